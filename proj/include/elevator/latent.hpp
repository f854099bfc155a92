// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace elevator {

struct Shape {
    std::size_t frames = 0;
    std::size_t channels = 0;
    std::size_t height = 0;
    std::size_t width = 0;

    std::size_t frame_size() const { return channels * height * width; }
    std::size_t plane_size() const { return height * width; }
    std::size_t numel() const { return frames * frame_size(); }

    bool operator==(const Shape&) const = default;
};

/// F x C x H x W real tensor stored frame-major (w fastest).
///
/// Every noisy or clean latent in the pipeline is carried by this type. The
/// shape is fixed at construction; element-wise helpers never reshape.
class LatentVideo {
public:
    LatentVideo() = default;
    explicit LatentVideo(Shape shape, double fill = 0.0);
    LatentVideo(Shape shape, std::vector<double> data);

    const Shape& shape() const { return shape_; }
    std::size_t size() const { return data_.size(); }

    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    double& at(std::size_t f, std::size_t c, std::size_t h, std::size_t w) {
        return data_[index(f, c, h, w)];
    }
    double at(std::size_t f, std::size_t c, std::size_t h, std::size_t w) const {
        return data_[index(f, c, h, w)];
    }

    std::span<double> frame(std::size_t f);
    std::span<const double> frame(std::size_t f) const;

    bool all_finite() const;

    bool operator==(const LatentVideo&) const = default;

private:
    std::size_t index(std::size_t f, std::size_t c, std::size_t h, std::size_t w) const {
        return ((f * shape_.channels + c) * shape_.height + h) * shape_.width + w;
    }

    Shape shape_{};
    std::vector<double> data_;
};

// a*x + b*y. Shapes must agree.
LatentVideo axpby(double a, const LatentVideo& x, double b, const LatentVideo& y);
LatentVideo scaled(const LatentVideo& x, double a);

double dot(const LatentVideo& x, const LatentVideo& y);
double l2_norm(const LatentVideo& x);
// ||x - y|| / ||y||
double relative_l2(const LatentVideo& x, const LatentVideo& y);
double max_abs_diff(const LatentVideo& x, const LatentVideo& y);
double mean(const LatentVideo& x);
double stddev(const LatentVideo& x);

void require_same_shape(const LatentVideo& a, const LatentVideo& b, const char* what);

}  // namespace elevator
