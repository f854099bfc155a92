// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace elevator {

using Complex = std::complex<double>;

// Signed normalized frequency of DFT bin k out of n, in [-0.5, 0.5].
double normalized_frequency(std::size_t k, std::size_t n);

// |(f_h, f_w)| for 2-D bin (kh, kw) of an h x w transform.
double radial_frequency(std::size_t kh, std::size_t kw, std::size_t h, std::size_t w);

/// In-place complex DFT of a fixed size (1-D or 2-D, row-major).
///
/// Plans are built once under a global lock; execution is reentrant, so one
/// instance may be shared by concurrent callers. Inverse is normalized.
class FftPlan {
public:
    static FftPlan one_d(std::size_t n);
    static FftPlan two_d(std::size_t rows, std::size_t cols);

    FftPlan(FftPlan&&) noexcept;
    FftPlan& operator=(FftPlan&&) noexcept;
    ~FftPlan();

    std::size_t size() const { return size_; }

    void forward(std::span<Complex> data) const;
    void inverse(std::span<Complex> data) const;

private:
    struct Plans;
    FftPlan(std::size_t size, std::unique_ptr<Plans> plans);

    std::size_t size_ = 0;
    std::unique_ptr<Plans> plans_;
};

}  // namespace elevator
