// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

#include "elevator/latent.hpp"

namespace elevator {

// Seeded Gaussian stream. Owned by exactly one sampling run at a time.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    double normal();
    LatentVideo normal_like(const Shape& shape);
    // Independent child stream; advances this one.
    RandomStream split();

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace elevator
