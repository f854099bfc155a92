// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "elevator/error.hpp"
#include "elevator/run_config.hpp"
#include "elevator/runner.hpp"

namespace {

const char* describe(elevator::RunMode mode) {
    using elevator::RunMode;
    switch (mode) {
    case RunMode::baseline_t2v: return "plain video-model sampling";
    case RunMode::baseline_t2i: return "plain image-model sampling, frame by frame";
    case RunMode::elevate: return "elevated sampling with the configured plan";
    case RunMode::ablate_filter: return "no filter vs temporal vs spatial-temporal low-pass";
    case RunMode::ablate_inversion: return "same noise vs DDIM inversion vs random noise";
    case RunMode::ablate_steps: return "video baseline at each of step_counts, plus image and elevated arms";
    case RunMode::roundtrip: return "invert image-prior samples and sample them back";
    }
    return "";
}

struct Flags {
    std::string config;
    std::string seeds;
    std::string output;
    unsigned jobs = 0;
    bool check = false;
};

void add_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "JSON config or a manifest.json to re-run");
    cmd->add_option("--seeds", f.seeds, "seed list, e.g. 0-19 or 1,5,9");
    cmd->add_option("--jobs", f.jobs, "concurrent seeds (default: hardware threads)");
    cmd->add_flag("--check", f.check, "run the invariant suite; nonzero exit on failure");
    cmd->add_option("--output", f.output, "output directory (default: $ELEVATOR_OUTPUT_DIR or config)");
}

int execute(const Flags& f, std::optional<elevator::RunMode> mode) {
    using namespace elevator;
    RunConfig cfg = f.config.empty() ? RunConfig{} : load_config(f.config);
    if (mode) cfg.mode = *mode;
    if (!f.seeds.empty()) cfg.seeds = parse_seed_list(f.seeds);
    if (!f.output.empty()) {
        cfg.output_dir = f.output;
    } else if (const char* env = std::getenv("ELEVATOR_OUTPUT_DIR"); env && *env) {
        cfg.output_dir = env;
    }
    RunOptions opts;
    opts.jobs = f.jobs ? f.jobs : std::max(1u, std::thread::hardware_concurrency());
    opts.check = f.check;

    const RunOutcome out = run(cfg, opts);
    const auto& agg = out.manifest.at("aggregate");
    std::cout << "mode " << to_string(cfg.mode) << ", " << cfg.seeds.size() << " seed(s) -> "
              << cfg.output_dir.string() << "\n";
    for (const auto& [arm, m] : agg.at("arms").items()) {
        std::cout << "  " << arm << ": FC " << m.at("frame_consistency").get<double>() << "  flicker "
                  << m.at("flicker_energy").get<double>() << "  detail " << m.at("spatial_detail").get<double>()
                  << "  dist_t2i " << m.at("spectrum_distance_t2i").get<double>() << "  dist_t2v "
                  << m.at("spectrum_distance_t2v").get<double>() << "\n";
    }
    if (agg.contains("max_roundtrip_error"))
        std::cout << "  max round-trip error " << agg.at("max_roundtrip_error").get<double>() << "\n";
    if (!f.check) return 0;
    if (out.ok()) {
        std::cout << "check: passed\n";
        return 0;
    }
    std::cerr << "check: " << out.check_failures.size() << " failure(s)\n";
    for (const auto& msg : out.check_failures) std::cerr << "  - " << msg << "\n";
    return 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Toy video-elevation experiments on analytic Gaussian latent priors"};
    app.require_subcommand(1);
    Flags flags;
    std::optional<elevator::RunMode> chosen;

    auto* run_cmd = app.add_subcommand("run", "run the mode named in --config");
    add_flags(run_cmd, flags);
    run_cmd->callback([&] { chosen.reset(); });
    for (auto mode : elevator::all_run_modes()) {
        auto* cmd = app.add_subcommand(std::string(elevator::to_string(mode)), describe(mode));
        add_flags(cmd, flags);
        cmd->callback([&chosen, mode] { chosen = mode; });
    }

    CLI11_PARSE(app, argc, argv);
    try {
        return execute(flags, chosen);
    } catch (const elevator::Error& e) {
        std::cerr << "error [" << elevator::to_string(e.code()) << "]: " << e.what() << "\n";
        return e.code() == elevator::ErrorCode::io_error ? 4 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
