// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "elevator/denoiser.hpp"
#include "elevator/elevator.hpp"
#include "elevator/metrics.hpp"
#include "elevator/run_config.hpp"
#include "elevator/trace.hpp"
#include "json.hpp"

namespace elevator {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr double kRoundtripTolerance = 1e-3;

// Everything a run needs that is derived from the config alone.
struct RunModels {
    GaussianPrior t2v_prior;
    GaussianPrior t2i_prior;
    NoiseSchedule t2v_schedule;
    NoiseSchedule t2i_schedule;
    std::shared_ptr<const Denoiser> t2v;
    std::shared_ptr<const Denoiser> t2i;  // cross-frame wrapped image model
    TimestepGrid grid;
};

RunModels build_models(const RunConfig& cfg);

ElevatorPlan make_plan(const RunConfig& cfg, const RunModels& models, std::uint64_t seed);

// One produced latent video of one seed.
struct ArmOutput {
    std::string arm;
    LatentVideo latent;
    Trace trace;
    std::optional<double> roundtrip_error;
};

// Runs every arm of cfg.mode for one seed, in memory.
std::vector<ArmOutput> run_seed(const RunConfig& cfg, const RunModels& models, std::uint64_t seed);

struct RunOptions {
    unsigned jobs = 1;
    bool check = false;
};

struct RunOutcome {
    nlohmann::json manifest;
    std::vector<std::string> check_failures;
    bool ok() const { return check_failures.empty(); }
};

// Writes latents, renders, metrics.csv, trace.jsonl and manifest.json under
// cfg.output_dir. Artifacts listed by a previous manifest there are removed first.
RunOutcome run(const RunConfig& cfg, const RunOptions& options = {});

}  // namespace elevator
