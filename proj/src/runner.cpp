// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#include "elevator/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "elevator/attention.hpp"
#include "elevator/error.hpp"
#include "elevator/latent_io.hpp"
#include "elevator/render.hpp"
#include "elevator/sampler.hpp"
#include "elevator/synth.hpp"

namespace elevator {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double median(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

GaussianPrior prior_from(const RunConfig& cfg, const PriorConfig& p) {
    return make_gp_prior(cfg.shape, p.rho, p.spectrum, p.variance_scale);
}

std::string arm_for_filter(FilterMode m) { return "filter_" + std::string(to_string(m)); }
std::string arm_for_inversion(InversionStrategy s) { return "inversion_" + std::string(to_string(s)); }
std::string arm_for_steps(int k) { return "t2v_steps" + std::to_string(k); }

// Per-seed record kept for the manifest and CSV.
struct SeedArm {
    std::string arm;
    std::uint64_t seed = 0;
    MetricReport metrics;
    bool finite = true;
    std::optional<double> roundtrip_error;
    std::string latent_file;
    std::string latent_sha256;
    RenderResult render;
    std::string trace_jsonl;
    double seconds = 0.0;
};

json metrics_json(const MetricReport& m) {
    return {{"frame_consistency", m.frame_consistency},
            {"flicker_energy", m.flicker_energy},
            {"spatial_detail", m.spatial_detail},
            {"spectrum_distance_t2i", m.spectrum_distance_t2i},
            {"spectrum_distance_t2v", m.spectrum_distance_t2v}};
}

const std::vector<std::pair<const char*, double MetricReport::*>> kMetricFields = {
    {"frame_consistency", &MetricReport::frame_consistency},
    {"flicker_energy", &MetricReport::flicker_energy},
    {"spatial_detail", &MetricReport::spatial_detail},
    {"spectrum_distance_t2i", &MetricReport::spectrum_distance_t2i},
    {"spectrum_distance_t2v", &MetricReport::spectrum_distance_t2v},
};

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

void remove_previous_artifacts(const fs::path& dir) {
    const fs::path manifest = dir / "manifest.json";
    if (!fs::exists(manifest)) return;
    std::ifstream in(manifest);
    json old;
    try {
        in >> old;
    } catch (const json::exception&) {
        return;
    }
    if (!old.contains("artifacts") || !old.at("artifacts").is_array()) return;
    for (const auto& a : old.at("artifacts")) {
        if (!a.contains("path") || !a.at("path").is_string()) continue;
        const fs::path rel = a.at("path").get<std::string>();
        if (rel.is_absolute() || rel.string().find("..") != std::string::npos) continue;
        std::error_code ec;
        fs::remove(dir / rel, ec);
    }
    fs::remove(manifest);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    require(static_cast<bool>(os), ErrorCode::io_error, "cannot open " + path.string() + " for writing");
    os << text;
    require(static_cast<bool>(os), ErrorCode::io_error, "short write to " + path.string());
}

std::map<std::string, MetricReport> medians_by_arm(const std::vector<SeedArm>& rows,
                                                   const std::vector<std::string>& arms) {
    std::map<std::string, MetricReport> out;
    for (const auto& arm : arms) {
        MetricReport m;
        for (const auto& [name, field] : kMetricFields) {
            std::vector<double> vals;
            for (const auto& r : rows)
                if (r.arm == arm) vals.push_back(r.metrics.*field);
            m.*field = median(vals);
        }
        out[arm] = m;
    }
    return out;
}

// Trace records of noisy latents must carry the alpha-bar of the schedule they name.
void check_trace(const Trace& trace, const RunModels& models, const std::string& where,
                 std::vector<std::string>& failures) {
    for (const auto& r : trace.records()) {
        if (r.clean || r.schedule == "none") continue;
        const NoiseSchedule* s = r.schedule == "t2v" ? &models.t2v_schedule : &models.t2i_schedule;
        if (r.schedule != "t2v" && r.schedule != "t2i") {
            failures.push_back(where + ": unknown schedule tag '" + r.schedule + "'");
            return;
        }
        const bool video_phase = r.phase.rfind("t2v", 0) == 0;
        const bool any_schedule = r.phase == "denoise" || r.phase == "init";
        if (video_phase != (r.schedule == "t2v") && !any_schedule) {
            failures.push_back(where + ": phase " + r.phase + " used the " + r.schedule + " schedule");
            return;
        }
        if (std::abs(s->alpha_bar(r.latent_t) - r.alpha_bar) > 1e-12) {
            failures.push_back(where + ": step " + std::to_string(r.step) + " alpha-bar does not match the " +
                               r.schedule + " schedule");
            return;
        }
    }
}

void check_orderings(const RunConfig& cfg, const std::map<std::string, MetricReport>& med,
                     std::vector<std::string>& failures) {
    auto get = [&](const std::string& arm) { return med.at(arm); };
    switch (cfg.mode) {
    case RunMode::ablate_inversion: {
        const double same = get(arm_for_inversion(InversionStrategy::same_noise)).frame_consistency;
        const double ddim = get(arm_for_inversion(InversionStrategy::ddim)).frame_consistency;
        const double rnd = get(arm_for_inversion(InversionStrategy::random_noise)).frame_consistency;
        if (!(same >= ddim && ddim >= rnd))
            failures.push_back("inversion ordering: FC same=" + fmt(same) + " ddim=" + fmt(ddim) + " random=" + fmt(rnd));
        break;
    }
    case RunMode::ablate_filter: {
        const auto none = get(arm_for_filter(FilterMode::none));
        const auto temporal = get(arm_for_filter(FilterMode::temporal));
        const auto st = get(arm_for_filter(FilterMode::spatial_temporal));
        if (!(temporal.flicker_energy < none.flicker_energy))
            failures.push_back("filter ordering: flicker temporal=" + fmt(temporal.flicker_energy) +
                               " not below none=" + fmt(none.flicker_energy));
        if (!(temporal.spatial_detail > st.spatial_detail))
            failures.push_back("filter ordering: detail temporal=" + fmt(temporal.spatial_detail) +
                               " not above spatial_temporal=" + fmt(st.spatial_detail));
        break;
    }
    case RunMode::ablate_steps: {
        const auto elev = get("elevate");
        const auto t2i = get("t2i");
        const auto base = get(arm_for_steps(cfg.step_counts.front()));
        const double fc_gain = elev.frame_consistency - t2i.frame_consistency;
        const double sd_gain = base.spectrum_distance_t2i - elev.spectrum_distance_t2i;
        for (int k : cfg.step_counts) {
            const auto other = get(arm_for_steps(k));
            const double dfc = std::abs(other.frame_consistency - base.frame_consistency);
            const double dsd = std::abs(other.spectrum_distance_t2i - base.spectrum_distance_t2i);
            if (!(dfc < 0.5 * fc_gain))
                failures.push_back("steps: FC change " + fmt(dfc) + " at " + std::to_string(k) +
                                   " steps is not below half the elevation gain " + fmt(fc_gain));
            if (!(dsd < 0.5 * sd_gain))
                failures.push_back("steps: spectrum distance change " + fmt(dsd) + " at " + std::to_string(k) +
                                   " steps is not below half the elevation gain " + fmt(sd_gain));
        }
        break;
    }
    default: break;
    }
}

std::vector<std::string> arm_names(const RunConfig& cfg) {
    switch (cfg.mode) {
    case RunMode::baseline_t2v: return {"t2v"};
    case RunMode::baseline_t2i: return {"t2i"};
    case RunMode::elevate: return {"elevate"};
    case RunMode::ablate_filter:
        return {arm_for_filter(FilterMode::none), arm_for_filter(FilterMode::temporal),
                arm_for_filter(FilterMode::spatial_temporal)};
    case RunMode::ablate_inversion:
        return {arm_for_inversion(InversionStrategy::same_noise), arm_for_inversion(InversionStrategy::ddim),
                arm_for_inversion(InversionStrategy::random_noise)};
    case RunMode::ablate_steps: {
        std::vector<std::string> arms;
        for (int k : cfg.step_counts) arms.push_back(arm_for_steps(k));
        arms.push_back("t2i");
        arms.push_back("elevate");
        return arms;
    }
    case RunMode::roundtrip: return {"roundtrip_source", "roundtrip"};
    }
    return {};
}

}  // namespace

RunModels build_models(const RunConfig& cfg) {
    cfg.validate();
    RunModels m{prior_from(cfg, cfg.t2v_prior),
                prior_from(cfg, cfg.t2i_prior),
                make_schedule(cfg.t2v_schedule.kind, cfg.t2v_schedule.total_steps, cfg.t2v_schedule.params),
                make_schedule(cfg.t2i_schedule.kind, cfg.t2i_schedule.total_steps, cfg.t2i_schedule.params),
                nullptr,
                nullptr,
                {}};
    m.t2v = std::make_shared<AnalyticDenoiser>(m.t2v_prior);
    m.t2i = wrap_crossframe(std::make_shared<AnalyticDenoiser>(m.t2i_prior),
                            AttentionParams::random_orthonormal(cfg.shape.channels, cfg.attention_seed),
                            cfg.attention_mix);
    m.grid = select_timesteps(m.t2i_schedule, cfg.steps);
    if (cfg.refine_steps > 0) m.grid = select_refine_steps(m.grid, cfg.refine_steps);
    return m;
}

ElevatorPlan make_plan(const RunConfig& cfg, const RunModels& models, std::uint64_t seed) {
    ElevatorPlan plan;
    plan.t2v = {models.t2v, models.t2v_schedule, SamplerConfig{cfg.eta_t2v, Condition::null(), seed}};
    plan.t2i = {models.t2i, models.t2i_schedule, SamplerConfig{cfg.eta_t2i, Condition::null(), seed}};
    plan.grid = models.grid;
    plan.n_sdedit = cfg.n_sdedit;
    plan.filter = cfg.filter;
    plan.inversion = cfg.inversion;
    plan.snr_matched = cfg.snr_matched;
    plan.allow_empty_refine = cfg.refine_steps == 0;
    plan.seed = seed;
    return plan;
}

std::vector<ArmOutput> run_seed(const RunConfig& cfg, const RunModels& models, std::uint64_t seed) {
    std::vector<ArmOutput> out;
    const SamplerConfig video_cfg{cfg.eta_t2v, Condition::null(), seed};
    const SamplerConfig image_cfg{cfg.eta_t2i, Condition::null(), seed};

    auto elevate_arm = [&](const std::string& name, const ElevatorPlan& plan) {
        ArmOutput a{name, {}, {}, std::nullopt};
        a.latent = elevate_sample(plan, &a.trace);
        out.push_back(std::move(a));
    };
    auto baseline_arm = [&](const std::string& name, const Denoiser& model, const NoiseSchedule& s,
                            const TimestepGrid& grid, const SamplerConfig& sc, const std::string& tag) {
        ArmOutput a{name, {}, {}, std::nullopt};
        a.latent = baseline_sample(model, s, grid, sc, seed, &a.trace, tag);
        out.push_back(std::move(a));
    };

    switch (cfg.mode) {
    case RunMode::baseline_t2v:
        baseline_arm("t2v", *models.t2v, models.t2v_schedule, models.grid, video_cfg, "t2v");
        break;
    case RunMode::baseline_t2i:
        baseline_arm("t2i", *models.t2i, models.t2i_schedule, models.grid, image_cfg, "t2i");
        break;
    case RunMode::elevate: elevate_arm("elevate", make_plan(cfg, models, seed)); break;
    case RunMode::ablate_filter:
        for (FilterMode m : {FilterMode::none, FilterMode::temporal, FilterMode::spatial_temporal}) {
            ElevatorPlan plan = make_plan(cfg, models, seed);
            plan.filter.mode = m;
            elevate_arm(arm_for_filter(m), plan);
        }
        break;
    case RunMode::ablate_inversion:
        for (InversionStrategy s :
             {InversionStrategy::same_noise, InversionStrategy::ddim, InversionStrategy::random_noise}) {
            ElevatorPlan plan = make_plan(cfg, models, seed);
            plan.inversion = s;
            elevate_arm(arm_for_inversion(s), plan);
        }
        break;
    case RunMode::ablate_steps:
        for (int k : cfg.step_counts) {
            baseline_arm(arm_for_steps(k), *models.t2v, models.t2v_schedule,
                         select_timesteps(models.t2v_schedule, k), video_cfg, "t2v");
        }
        baseline_arm("t2i", *models.t2i, models.t2i_schedule, models.grid, image_cfg, "t2i");
        elevate_arm("elevate", make_plan(cfg, models, seed));
        break;
    case RunMode::roundtrip: {
        RandomStream rng(seed);
        ArmOutput source{"roundtrip_source", sample_prior(models.t2i_prior, rng), {}, std::nullopt};
        const int top = models.grid.steps.front();
        const LatentVideo noise =
            ddim_invert(*models.t2i, source.latent, models.grid, top, models.t2i_schedule, Condition::null());
        ArmOutput rec{"roundtrip", {}, {}, std::nullopt};
        const SamplerConfig deterministic{0.0, Condition::null(), seed};
        RandomStream unused(seed);
        rec.trace.record(0, top, top, "init", "t2i", false, models.t2i_schedule.alpha_bar(top), noise, noise);
        rec.latent = ddim_sample(*models.t2i, noise, models.grid, models.t2i_schedule, deterministic, unused,
                                 [&](int t, int t_prev, const StepResult& r) {
                                     rec.trace.record(models.grid.position(t), t, t_prev, "denoise", "t2i",
                                                      t_prev == 0, models.t2i_schedule.alpha_bar(t_prev), r.next,
                                                      r.clean);
                                 });
        rec.roundtrip_error = relative_l2(rec.latent, source.latent);
        out.push_back(std::move(source));
        out.push_back(std::move(rec));
        break;
    }
    }
    return out;
}

RunOutcome run(const RunConfig& cfg, const RunOptions& options) {
    const auto t_start = Clock::now();
    const RunModels models = build_models(cfg);
    const fs::path dir = cfg.output_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    require(!ec && fs::is_directory(dir), ErrorCode::io_error, "cannot create output directory " + dir.string());
    remove_previous_artifacts(dir);

    const std::vector<std::string> arms = arm_names(cfg);
    const std::size_t n_seeds = cfg.seeds.size();
    std::vector<std::vector<SeedArm>> per_seed(n_seeds);
    std::vector<double> seed_seconds(n_seeds, 0.0);
    std::vector<std::exception_ptr> errors(n_seeds);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < n_seeds; i = next++) {
            try {
                const auto t0 = Clock::now();
                const std::uint64_t seed = cfg.seeds[i];
                for (auto& a : run_seed(cfg, models, seed)) {
                    SeedArm row;
                    row.arm = a.arm;
                    row.seed = seed;
                    row.finite = a.latent.all_finite();
                    if (row.finite) row.metrics = evaluate(a.latent, models.t2i_prior, models.t2v_prior);
                    row.roundtrip_error = a.roundtrip_error;
                    const std::string stem = a.arm + "_s" + std::to_string(seed);
                    row.latent_file = stem + ".elvt";
                    save_latent(a.latent, dir / row.latent_file);
                    row.latent_sha256 = sha256_file(dir / row.latent_file);
                    if (cfg.render) row.render = render_frames(a.latent, dir / stem);
                    if (cfg.write_trace) {
                        std::ostringstream os;
                        a.trace.write_jsonl(os, a.arm, seed);
                        row.trace_jsonl = os.str();
                    }
                    per_seed[i].push_back(std::move(row));
                }
                seed_seconds[i] = seconds_since(t0);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(n_seeds)));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    // Single-threaded assembly from here on, in arm then seed order.
    std::vector<SeedArm> rows;
    for (const auto& arm : arms)
        for (std::size_t i = 0; i < n_seeds; ++i)
            for (auto& r : per_seed[i])
                if (r.arm == arm) rows.push_back(r);

    std::ostringstream csv;
    csv << "arm,seed,frame_consistency,flicker_energy,spatial_detail,spectrum_distance_t2i,spectrum_distance_t2v,"
           "roundtrip_error,latent_sha256\n";
    for (const auto& r : rows) {
        csv << r.arm << ',' << r.seed;
        for (const auto& [name, field] : kMetricFields) csv << ',' << fmt(r.metrics.*field);
        csv << ',' << (r.roundtrip_error ? fmt(*r.roundtrip_error) : "") << ',' << r.latent_sha256 << '\n';
    }
    write_text(dir / "metrics.csv", csv.str());
    if (cfg.write_trace) {
        std::string all;
        for (const auto& r : rows) all += r.trace_jsonl;
        write_text(dir / "trace.jsonl", all);
    }

    const auto medians = medians_by_arm(rows, arms);
    std::vector<std::string> failures;
    std::optional<double> max_roundtrip;
    for (const auto& r : rows) {
        const std::string where = r.arm + " seed " + std::to_string(r.seed);
        if (!r.finite) failures.push_back(where + ": non-finite latent");
        const auto& m = r.metrics;
        if (!(m.frame_consistency >= -1.0 - 1e-12 && m.frame_consistency <= 1.0 + 1e-12))
            failures.push_back(where + ": frame consistency out of [-1, 1]");
        if (!(m.flicker_energy >= 0.0 && m.flicker_energy <= 1.0 + 1e-12))
            failures.push_back(where + ": flicker energy out of [0, 1]");
        if (!(m.spatial_detail >= 0.0 && m.spatial_detail <= 1.0 + 1e-12))
            failures.push_back(where + ": spatial detail out of [0, 1]");
        if (r.roundtrip_error) {
            max_roundtrip = std::max(max_roundtrip.value_or(0.0), *r.roundtrip_error);
            if (!(*r.roundtrip_error < kRoundtripTolerance))
                failures.push_back(where + ": round-trip error " + fmt(*r.roundtrip_error));
        }
    }

    if (options.check) {
        // Reproducibility: the first seed must regenerate bit-identical latents.
        const std::uint64_t seed = cfg.seeds.front();
        for (const auto& a : run_seed(cfg, models, seed)) {
            const std::string where = a.arm + " seed " + std::to_string(seed);
            const auto it = std::find_if(rows.begin(), rows.end(),
                                         [&](const SeedArm& r) { return r.arm == a.arm && r.seed == seed; });
            if (it == rows.end() || sha256_hex(encode_latent(a.latent)) != it->latent_sha256)
                failures.push_back(where + ": rerun changed the latent checksum");
            check_trace(a.trace, models, where, failures);
        }
        check_orderings(cfg, medians, failures);
    }

    json manifest;
    manifest["tool"] = "elevator";
    manifest["version"] = kToolVersion;
    manifest["config"] = config_to_json(cfg);
    manifest["schedules"] = {
        {"t2v", {{"kind", to_string(models.t2v_schedule.kind())}, {"alpha_bars", models.t2v_schedule.alpha_bars()}}},
        {"t2i", {{"kind", to_string(models.t2i_schedule.kind())}, {"alpha_bars", models.t2i_schedule.alpha_bars()}}}};
    manifest["grid"] = {{"steps", models.grid.steps}, {"refine_set", models.grid.refine_set}};
    auto prior_json = [](const GaussianPrior& p) {
        return json{{"temporal_rho", p.temporal_rho},
                    {"variance_scale", p.variance_scale},
                    {"spatial_spectrum", p.spatial_spectrum}};
    };
    manifest["priors"] = {{"t2v", prior_json(models.t2v_prior)}, {"t2i", prior_json(models.t2i_prior)}};

    json runs = json::array();
    for (const auto& r : rows) {
        json entry{{"arm", r.arm},
                   {"seed", r.seed},
                   {"latent", r.latent_file},
                   {"sha256", r.latent_sha256},
                   {"metrics", metrics_json(r.metrics)}};
        if (r.roundtrip_error) entry["roundtrip_error"] = *r.roundtrip_error;
        if (cfg.render) {
            json files = json::array();
            for (const auto& f : r.render.files) files.push_back(f.filename().string());
            entry["render"] = {{"files", files}, {"min", r.render.min_value}, {"max", r.render.max_value}};
        }
        runs.push_back(std::move(entry));
    }
    manifest["runs"] = std::move(runs);

    json aggregate = json::object();
    for (const auto& [arm, m] : medians) aggregate[arm] = metrics_json(m);
    manifest["aggregate"] = {{"statistic", "median"}, {"arms", aggregate}};
    if (max_roundtrip) manifest["aggregate"]["max_roundtrip_error"] = *max_roundtrip;

    json timings = json::array();
    for (std::size_t i = 0; i < n_seeds; ++i) timings.push_back({{"seed", cfg.seeds[i]}, {"seconds", seed_seconds[i]}});
    manifest["timings"] = {{"jobs", jobs}, {"per_seed", timings}, {"total_seconds", seconds_since(t_start)}};
    manifest["checks"] = {{"enabled", options.check}, {"passed", failures.empty()}, {"failures", failures}};

    json artifacts = json::array();
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().filename() != "manifest.json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        artifacts.push_back({{"path", fs::relative(f, dir).generic_string()},
                             {"sha256", sha256_file(f)},
                             {"bytes", fs::file_size(f)}});
    }
    manifest["artifacts"] = std::move(artifacts);
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");

    return RunOutcome{std::move(manifest), std::move(failures)};
}

}  // namespace elevator
