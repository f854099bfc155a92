// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#include "elevator/freqfilter.hpp"

#include <algorithm>
#include <cmath>

#include "elevator/error.hpp"
#include "elevator/spectral.hpp"

namespace elevator {

std::string_view to_string(FilterAxes axes) {
    return axes == FilterAxes::temporal ? "temporal" : "spatial_temporal";
}

namespace {

double gaussian_gain(double f, double d0) { return std::exp(-(f * f) / (2.0 * d0 * d0)); }

}  // namespace

LowPassMask gaussian_mask(std::size_t frames, double d0) {
    require(frames >= 1, ErrorCode::invalid_params, "mask needs at least one frame");
    require(d0 > 0.0 && !std::isnan(d0), ErrorCode::invalid_d0, "d0 must be > 0");
    LowPassMask mask;
    mask.d0 = d0;
    mask.temporal.resize(frames);
    for (std::size_t k = 0; k < frames; ++k) {
        mask.temporal[k] = gaussian_gain(normalized_frequency(k, frames), d0);
    }
    return mask;
}

LowPassMask gaussian_mask(const Shape& shape, double d0) {
    LowPassMask mask = gaussian_mask(shape.frames, d0);
    mask.height = shape.height;
    mask.width = shape.width;
    mask.spatial.resize(shape.plane_size());
    for (std::size_t kh = 0; kh < shape.height; ++kh) {
        for (std::size_t kw = 0; kw < shape.width; ++kw) {
            mask.spatial[kh * shape.width + kw] =
                gaussian_gain(radial_frequency(kh, kw, shape.height, shape.width), d0);
        }
    }
    return mask;
}

LpffResult lpff_detailed(const LatentVideo& video, const LowPassMask& mask, FilterAxes axes) {
    const Shape& sh = video.shape();
    require(mask.temporal.size() == sh.frames, ErrorCode::mask_shape_mismatch,
            "temporal mask length differs from frame count");
    if (axes == FilterAxes::spatial_temporal) {
        require(mask.has_spatial() && mask.height == sh.height && mask.width == sh.width,
                ErrorCode::mask_shape_mismatch, "spatial mask missing or sized differently from frames");
    }

    LpffResult result{video, 0.0};
    LatentVideo& out = result.video;

    const FftPlan temporal_fft = FftPlan::one_d(sh.frames);
    std::vector<Complex> series(sh.frames);
    const std::size_t stride = sh.frame_size();
    for (std::size_t p = 0; p < stride; ++p) {
        for (std::size_t f = 0; f < sh.frames; ++f) series[f] = out[f * stride + p];
        temporal_fft.forward(series);
        for (std::size_t f = 0; f < sh.frames; ++f) series[f] *= mask.temporal[f];
        temporal_fft.inverse(series);
        for (std::size_t f = 0; f < sh.frames; ++f) {
            out[f * stride + p] = series[f].real();
            result.max_imag = std::max(result.max_imag, std::abs(series[f].imag()));
        }
    }

    if (axes == FilterAxes::spatial_temporal) {
        const FftPlan spatial_fft = FftPlan::two_d(sh.height, sh.width);
        std::vector<Complex> plane(sh.plane_size());
        for (std::size_t f = 0; f < sh.frames; ++f) {
            for (std::size_t c = 0; c < sh.channels; ++c) {
                double* px = out.frame(f).data() + c * sh.plane_size();
                for (std::size_t p = 0; p < plane.size(); ++p) plane[p] = px[p];
                spatial_fft.forward(plane);
                for (std::size_t p = 0; p < plane.size(); ++p) plane[p] *= mask.spatial[p];
                spatial_fft.inverse(plane);
                for (std::size_t p = 0; p < plane.size(); ++p) {
                    px[p] = plane[p].real();
                    result.max_imag = std::max(result.max_imag, std::abs(plane[p].imag()));
                }
            }
        }
    }
    return result;
}

LatentVideo lpff(const LatentVideo& video, const LowPassMask& mask, FilterAxes axes) {
    return lpff_detailed(video, mask, axes).video;
}

}  // namespace elevator
