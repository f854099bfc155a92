// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#include "elevator/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace elevator {

namespace {

// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(std::span<Complex> data) { return reinterpret_cast<fftw_complex*>(data.data()); }

}  // namespace

double normalized_frequency(std::size_t k, std::size_t n) {
    const auto kk = static_cast<double>(k);
    const auto nn = static_cast<double>(n);
    return (2 * k <= n) ? kk / nn : (kk - nn) / nn;
}

double radial_frequency(std::size_t kh, std::size_t kw, std::size_t h, std::size_t w) {
    return std::hypot(normalized_frequency(kh, h), normalized_frequency(kw, w));
}

struct FftPlan::Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    ~Plans() {
        std::lock_guard lock(planner_mutex());
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
    }
};

FftPlan::FftPlan(std::size_t size, std::unique_ptr<Plans> plans) : size_(size), plans_(std::move(plans)) {}
FftPlan::FftPlan(FftPlan&&) noexcept = default;
FftPlan& FftPlan::operator=(FftPlan&&) noexcept = default;
FftPlan::~FftPlan() = default;

FftPlan FftPlan::one_d(std::size_t n) {
    std::vector<Complex> scratch(n);
    auto plans = std::make_unique<Plans>();
    std::lock_guard lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    plans->forward = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, flags);
    plans->backward = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, flags);
    if (!plans->forward || !plans->backward) {
        throw std::runtime_error("fftw planning failed");
    }
    return FftPlan(n, std::move(plans));
}

FftPlan FftPlan::two_d(std::size_t rows, std::size_t cols) {
    std::vector<Complex> scratch(rows * cols);
    auto plans = std::make_unique<Plans>();
    std::lock_guard lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    plans->forward = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), buf, buf, FFTW_FORWARD, flags);
    plans->backward = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), buf, buf, FFTW_BACKWARD, flags);
    if (!plans->forward || !plans->backward) {
        throw std::runtime_error("fftw planning failed");
    }
    return FftPlan(rows * cols, std::move(plans));
}

void FftPlan::forward(std::span<Complex> data) const {
    fftw_execute_dft(plans_->forward, as_fftw(data), as_fftw(data));
}

void FftPlan::inverse(std::span<Complex> data) const {
    fftw_execute_dft(plans_->backward, as_fftw(data), as_fftw(data));
    const double scale = 1.0 / static_cast<double>(size_);
    for (auto& v : data) {
        v *= scale;
    }
}

}  // namespace elevator
