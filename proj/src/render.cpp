// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#include "elevator/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "elevator/error.hpp"

namespace elevator {

namespace {

// rows: latent channel, cols: r, g, b
constexpr std::array<std::array<double, 3>, 4> kLatentToRgb{{
    {0.3512, 0.2297, 0.3227},
    {0.3250, 0.4974, 0.2350},
    {-0.2829, 0.1762, 0.2721},
    {-0.2120, -0.2616, -0.7177},
}};

std::array<double, 3> pixel_rgb(const LatentVideo& v, std::size_t f, std::size_t h, std::size_t w) {
    const std::size_t c = v.shape().channels;
    if (c == 1) {
        const double g = v.at(f, 0, h, w);
        return {g, g, g};
    }
    if (c == 3) {
        return {v.at(f, 0, h, w), v.at(f, 1, h, w), v.at(f, 2, h, w)};
    }
    std::array<double, 3> rgb{0.0, 0.0, 0.0};
    for (std::size_t ch = 0; ch < 4; ++ch) {
        const double x = v.at(f, ch, h, w);
        for (std::size_t k = 0; k < 3; ++k) rgb[k] += x * kLatentToRgb[ch][k];
    }
    return rgb;
}

}  // namespace

RenderResult render_frames(const LatentVideo& v, const std::filesystem::path& path_prefix) {
    const Shape& sh = v.shape();
    require(sh.channels == 1 || sh.channels == 3 || sh.channels == 4, ErrorCode::unsupported_channels,
            "render supports 1, 3 or 4 channels, got " + std::to_string(sh.channels));

    RenderResult result;
    result.min_value = std::numeric_limits<double>::infinity();
    result.max_value = -std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < sh.frames; ++f) {
        for (std::size_t h = 0; h < sh.height; ++h) {
            for (std::size_t w = 0; w < sh.width; ++w) {
                for (double x : pixel_rgb(v, f, h, w)) {
                    result.min_value = std::min(result.min_value, x);
                    result.max_value = std::max(result.max_value, x);
                }
            }
        }
    }
    const double range = result.max_value - result.min_value;

    std::vector<char> pixels(sh.plane_size() * 3);
    for (std::size_t f = 0; f < sh.frames; ++f) {
        std::size_t k = 0;
        for (std::size_t h = 0; h < sh.height; ++h) {
            for (std::size_t w = 0; w < sh.width; ++w) {
                for (double x : pixel_rgb(v, f, h, w)) {
                    const double unit = range > 0.0 ? (x - result.min_value) / range : 0.5;
                    pixels[k++] = static_cast<char>(static_cast<unsigned char>(std::lround(unit * 255.0)));
                }
            }
        }
        char suffix[32];
        std::snprintf(suffix, sizeof(suffix), "_f%03zu.ppm", f);
        std::filesystem::path path = path_prefix;
        path += suffix;
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        require(static_cast<bool>(os), ErrorCode::io_error, "cannot open " + path.string());
        os << "P6\n" << sh.width << ' ' << sh.height << "\n255\n";
        os.write(pixels.data(), static_cast<std::streamsize>(pixels.size()));
        require(static_cast<bool>(os), ErrorCode::io_error, "short write to " + path.string());
        result.files.push_back(std::move(path));
    }
    return result;
}

}  // namespace elevator
