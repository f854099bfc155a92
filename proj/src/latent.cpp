// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#include "elevator/latent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "elevator/error.hpp"

namespace elevator {

LatentVideo::LatentVideo(Shape shape, double fill) : shape_(shape), data_(shape.numel(), fill) {}

LatentVideo::LatentVideo(Shape shape, std::vector<double> data) : shape_(shape), data_(std::move(data)) {
    require(data_.size() == shape_.numel(), ErrorCode::shape_mismatch,
            "data length " + std::to_string(data_.size()) + " does not match shape");
}

std::span<double> LatentVideo::frame(std::size_t f) {
    return std::span<double>(data_).subspan(f * shape_.frame_size(), shape_.frame_size());
}

std::span<const double> LatentVideo::frame(std::size_t f) const {
    return std::span<const double>(data_).subspan(f * shape_.frame_size(), shape_.frame_size());
}

bool LatentVideo::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void require_same_shape(const LatentVideo& a, const LatentVideo& b, const char* what) {
    require(a.shape() == b.shape(), ErrorCode::shape_mismatch, std::string(what) + ": shapes differ");
}

LatentVideo axpby(double a, const LatentVideo& x, double b, const LatentVideo& y) {
    require_same_shape(x, y, "axpby");
    LatentVideo out(x.shape());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = a * x[i] + b * y[i];
    }
    return out;
}

LatentVideo scaled(const LatentVideo& x, double a) {
    LatentVideo out(x.shape());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = a * x[i];
    }
    return out;
}

double dot(const LatentVideo& x, const LatentVideo& y) {
    require_same_shape(x, y, "dot");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += x[i] * y[i];
    }
    return acc;
}

double l2_norm(const LatentVideo& x) { return std::sqrt(dot(x, x)); }

double relative_l2(const LatentVideo& x, const LatentVideo& y) {
    return l2_norm(axpby(1.0, x, -1.0, y)) / l2_norm(y);
}

double max_abs_diff(const LatentVideo& x, const LatentVideo& y) {
    require_same_shape(x, y, "max_abs_diff");
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        worst = std::max(worst, std::abs(x[i] - y[i]));
    }
    return worst;
}

double mean(const LatentVideo& x) {
    double acc = 0.0;
    for (double v : x.data()) {
        acc += v;
    }
    return x.size() == 0 ? 0.0 : acc / static_cast<double>(x.size());
}

double stddev(const LatentVideo& x) {
    const double m = mean(x);
    double acc = 0.0;
    for (double v : x.data()) {
        acc += (v - m) * (v - m);
    }
    return x.size() == 0 ? 0.0 : std::sqrt(acc / static_cast<double>(x.size()));
}

}  // namespace elevator
