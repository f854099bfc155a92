// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "elevator/latent.hpp"

namespace elevator {

/// One phase of one sampling step. `latent_t` is the timestep the recorded
/// latent lives at (0 for clean latents); `alpha_bar` is the coefficient the
/// phase read from its schedule at that timestep (1 for clean latents).
struct TraceRecord {
    int step = 0;
    int grid_t = 0;
    int latent_t = 0;
    std::string phase;
    std::string schedule;  // "t2i", "t2v" or "none"
    bool clean = false;
    double alpha_bar = 1.0;
    double mean = 0.0;
    double std = 0.0;
    std::optional<double> clean_consistency;
};

class Trace {
public:
    void record(TraceRecord r) { records_.push_back(std::move(r)); }
    // Fills mean/std from `latent` and the consistency from `clean_view`.
    void record(int step, int grid_t, int latent_t, std::string phase, std::string schedule, bool clean,
                double alpha_bar, const LatentVideo& latent, const LatentVideo& clean_view);

    const std::vector<TraceRecord>& records() const { return records_; }
    bool empty() const { return records_.empty(); }

    // One JSON object per line, tagged with the arm name and seed.
    void write_jsonl(std::ostream& os, const std::string& arm, std::uint64_t seed) const;

private:
    std::vector<TraceRecord> records_;
};

// frame_consistency, or nullopt when undefined (single frame, zero frame).
std::optional<double> safe_frame_consistency(const LatentVideo& v);

}  // namespace elevator
