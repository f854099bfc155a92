// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "elevator/elevator.hpp"
#include "elevator/synth.hpp"
#include "json.hpp"

namespace elevator {

enum class RunMode { baseline_t2v, baseline_t2i, elevate, ablate_filter, ablate_inversion, ablate_steps, roundtrip };

std::string_view to_string(RunMode mode);
RunMode run_mode_from_string(std::string_view name);
const std::vector<RunMode>& all_run_modes();

struct PriorConfig {
    double rho = 0.0;
    SpectrumKind spectrum = SpectrumKind::flat;
    double variance_scale = 1.0;
};

struct ScheduleConfig {
    ScheduleKind kind = ScheduleKind::linear_beta;
    int total_steps = 1000;
    ScheduleParams params{};
};

struct RunConfig {
    RunMode mode = RunMode::elevate;
    std::vector<std::uint64_t> seeds{0};
    std::filesystem::path output_dir = "elevator_out";
    Shape shape = kDefaultShape;

    PriorConfig t2v_prior{0.9, SpectrumKind::lowpass, 1.0};
    PriorConfig t2i_prior{0.0, SpectrumKind::broadband, 1.0};
    ScheduleConfig t2v_schedule{ScheduleKind::scaled_linear_beta, 1000, {}};
    ScheduleConfig t2i_schedule{ScheduleKind::linear_beta, 1000, {}};

    int steps = 50;
    int refine_steps = 5;
    int n_sdedit = 9;
    FilterSettings filter{};
    InversionStrategy inversion = InversionStrategy::ddim;
    bool snr_matched = false;
    double eta_t2v = 0.0;
    double eta_t2i = 0.0;
    double attention_mix = 0.0;
    std::uint64_t attention_seed = 7;

    std::vector<int> step_counts{50, 100};  // ablate_steps only
    bool render = true;
    bool write_trace = true;

    // Throws invalid_config.
    void validate() const;
};

nlohmann::json config_to_json(const RunConfig& cfg);

// Accepts either a config document or a manifest (its "config" member).
// Omitted fields keep their defaults; unknown fields are rejected.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

// "7", "0-19", "1,4,9" or combinations such as "0-3,10".
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

}  // namespace elevator
