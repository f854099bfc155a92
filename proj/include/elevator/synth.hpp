// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>
#include <vector>

#include "elevator/denoiser.hpp"
#include "elevator/rng.hpp"

namespace elevator {

enum class SpectrumKind { lowpass, broadband, flat };

std::string_view to_string(SpectrumKind kind);
SpectrumKind spectrum_kind_from_string(std::string_view name);

// Per-bin variance over an H x W DFT grid, normalized to mean 1.
//   lowpass:   1 / (1 + (f / 0.1)^4)
//   broadband: 1 / (1 + (f / 0.35)^4)
//   flat:      1
std::vector<double> make_spectrum(SpectrumKind kind, std::size_t height, std::size_t width);

GaussianPrior make_gp_prior(Shape shape, double rho, SpectrumKind kind, double variance_scale);

// Temporally coherent, blurry stand-in for a video model's training data.
GaussianPrior default_t2v_prior(Shape shape);
// Per-frame, detailed stand-in for an image model's training data.
GaussianPrior default_t2i_prior(Shape shape);

inline constexpr Shape kDefaultShape{16, 4, 16, 16};

// Exact draw: white noise shaped by sqrt(spectrum) in the DFT domain, then an
// AR(1) recursion across frames, scaled and offset by the mean.
LatentVideo sample_prior(const GaussianPrior& prior, RandomStream& rng);

}  // namespace elevator
