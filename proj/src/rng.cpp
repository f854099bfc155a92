// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#include "elevator/rng.hpp"

namespace elevator {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      0x9e3779b9u};
    return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : engine_(seeded_engine(seed)) {}

double RandomStream::normal() { return normal_(engine_); }

LatentVideo RandomStream::normal_like(const Shape& shape) {
    LatentVideo out(shape);
    for (double& v : out.data()) {
        v = normal_(engine_);
    }
    return out;
}

RandomStream RandomStream::split() { return RandomStream(engine_()); }

}  // namespace elevator
