// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#include "elevator/trace.hpp"

#include "json.hpp"

#include "elevator/error.hpp"
#include "elevator/metrics.hpp"

namespace elevator {

std::optional<double> safe_frame_consistency(const LatentVideo& v) {
    try {
        return frame_consistency(v);
    } catch (const Error&) {
        return std::nullopt;
    }
}

void Trace::record(int step, int grid_t, int latent_t, std::string phase, std::string schedule, bool clean,
                   double alpha_bar, const LatentVideo& latent, const LatentVideo& clean_view) {
    TraceRecord r;
    r.step = step;
    r.grid_t = grid_t;
    r.latent_t = latent_t;
    r.phase = std::move(phase);
    r.schedule = std::move(schedule);
    r.clean = clean;
    r.alpha_bar = alpha_bar;
    r.mean = elevator::mean(latent);
    r.std = stddev(latent);
    r.clean_consistency = safe_frame_consistency(clean_view);
    records_.push_back(std::move(r));
}

void Trace::write_jsonl(std::ostream& os, const std::string& arm, std::uint64_t seed) const {
    for (const auto& r : records_) {
        nlohmann::json j{
            {"arm", arm},       {"seed", seed},         {"step", r.step},        {"grid_t", r.grid_t},
            {"latent_t", r.latent_t}, {"phase", r.phase}, {"schedule", r.schedule}, {"clean", r.clean},
            {"alpha_bar", r.alpha_bar}, {"mean", r.mean}, {"std", r.std},
        };
        j["clean_consistency"] = r.clean_consistency ? nlohmann::json(*r.clean_consistency) : nlohmann::json();
        os << j.dump() << '\n';
    }
}

}  // namespace elevator
