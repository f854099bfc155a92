// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "elevator/latent.hpp"

namespace elevator {

struct RenderResult {
    std::vector<std::filesystem::path> files;
    double min_value = 0.0;  // normalization range over the whole video
    double max_value = 0.0;
};

/// Writes one binary PPM (P6) per frame, named <prefix>_f<NNN>.ppm.
/// C=1 renders gray, C=3 as RGB, C=4 through a fixed latent-to-RGB matrix.
/// Values are min/max normalized over the whole video; a constant video
/// renders mid gray.
RenderResult render_frames(const LatentVideo& v, const std::filesystem::path& path_prefix);

}  // namespace elevator
