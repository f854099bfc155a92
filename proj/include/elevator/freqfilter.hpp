// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>
#include <vector>

#include "elevator/latent.hpp"

namespace elevator {

enum class FilterAxes { temporal, spatial_temporal };

std::string_view to_string(FilterAxes axes);

/// Gaussian low-pass gains, exp(-f^2 / (2 d0^2)) per DFT bin, f the signed
/// normalized frequency. DC gain is 1 and gains[k] == gains[n - k].
struct LowPassMask {
    std::vector<double> temporal;  // length F
    std::vector<double> spatial;   // H*W row-major, empty for temporal-only masks
    std::size_t height = 0;
    std::size_t width = 0;
    double d0 = 0.0;

    bool has_spatial() const { return !spatial.empty(); }
};

// d0 may be +inf (identity filter).
LowPassMask gaussian_mask(std::size_t frames, double d0);
// Temporal gains plus radial spatial gains with the same cutoff.
LowPassMask gaussian_mask(const Shape& shape, double d0);

struct LpffResult {
    LatentVideo video;
    double max_imag = 0.0;  // largest imaginary residual discarded by the inverse transforms
};

LpffResult lpff_detailed(const LatentVideo& video, const LowPassMask& mask, FilterAxes axes);
LatentVideo lpff(const LatentVideo& video, const LowPassMask& mask, FilterAxes axes);

}  // namespace elevator
