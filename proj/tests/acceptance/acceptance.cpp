// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "elevator/attention.hpp"
#include "elevator/elevator.hpp"
#include "elevator/freqfilter.hpp"
#include "elevator/metrics.hpp"
#include "elevator/runner.hpp"
#include "elevator/synth.hpp"
#include "oracles.hpp"

using namespace elevator;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

unsigned g_jobs = 1;
fs::path g_root;

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < std::max(1u, g_jobs); ++j)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < n;) fn(i);
        });
    for (auto& t : pool) t.join();
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

std::vector<std::uint64_t> seeds(std::uint64_t n) {
    std::vector<std::uint64_t> out(n);
    for (std::uint64_t i = 0; i < n; ++i) out[i] = i;
    return out;
}

RunConfig base_config(RunMode mode, const std::string& dir, std::uint64_t n_seeds) {
    RunConfig cfg;
    cfg.mode = mode;
    cfg.seeds = seeds(n_seeds);
    cfg.output_dir = g_root / dir;
    cfg.render = false;
    return cfg;
}

double arm_metric(const json& manifest, const std::string& arm, const char* metric) {
    return manifest.at("aggregate").at("arms").at(arm).at(metric).get<double>();
}

// Every produced manifest, for the reproducibility check.
std::vector<fs::path> g_manifests;

json run_logged(const RunConfig& cfg) {
    const auto out = run(cfg, {g_jobs, false});
    g_manifests.push_back(cfg.output_dir / "manifest.json");
    return out.manifest;
}

class FixedEps final : public Denoiser {
public:
    explicit FixedEps(LatentVideo eps) : eps_(std::move(eps)) {}
    Shape shape() const override { return eps_.shape(); }
    LatentVideo predict_eps(const LatentVideo&, int, const Condition&, const NoiseSchedule&) const override {
        return eps_;
    }

private:
    LatentVideo eps_;
};

Verdict criterion1() {
    double worst_rt = 0, worst_step = 0, worst_lpff = 0, worst_attn = 0, worst_eps = 0;
    const auto sched = default_t2i_schedule();

    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Shape sh{4, 2, 4, 4};
        const auto z0 = oracle::random_video(sh, seed), eps = oracle::random_video(sh, seed + 100);
        for (int t : {1, 250, 500, 999, 1000})
            worst_rt = std::max(worst_rt, max_abs_diff(project_clean(forward_diffuse(z0, t, eps, sched), eps, t, sched), z0));
    }

    // z' = sqrt(ab') (z - sqrt(1-ab) e) / sqrt(ab) + sqrt(1-ab') e with fixed e.
    struct Case {
        double ab1, ab2, z, e;
    };
    for (const Case c : {Case{0.81, 0.25, 1.0, 1.0}, Case{0.5, 0.1, -2.0, 0.5}, Case{0.99, 0.9, 0.3, -1.2}}) {
        const auto s = make_schedule(ScheduleKind::linear_beta, 2, {1.0 - c.ab1, 1.0 - c.ab2 / c.ab1});
        const Shape sh{1, 1, 2, 2};
        const FixedEps model(LatentVideo(sh, c.e));
        RandomStream rng(0);
        const auto got = ddim_step(model, LatentVideo(sh, c.z), 2, 1, s, {}, rng);
        const double want = std::sqrt(c.ab1) * (c.z - std::sqrt(1 - c.ab2) * c.e) / std::sqrt(c.ab2) +
                            std::sqrt(1 - c.ab1) * c.e;
        for (double x : got.data()) worst_step = std::max(worst_step, std::abs(x - want));
    }

    for (const Shape sh : {Shape{8, 2, 4, 4}, Shape{5, 1, 6, 3}, Shape{16, 2, 8, 8}}) {
        const auto v = oracle::random_video(sh, 3);
        for (double d0 : {0.1, 0.25, 0.5}) {
            const auto mask = gaussian_mask(sh, d0);
            worst_lpff = std::max(worst_lpff,
                                  max_abs_diff(lpff(v, mask, FilterAxes::temporal), oracle::temporal_lowpass(v, d0)));
            worst_lpff = std::max(worst_lpff, max_abs_diff(lpff(v, mask, FilterAxes::spatial_temporal),
                                                           oracle::spatial_lowpass(oracle::temporal_lowpass(v, d0), d0)));
        }
    }

    RandomStream rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const Eigen::Index n = 3 + trial, m = 7 - trial, d = 4, dv = 5;
        Eigen::MatrixXd q(n, d), k(m, d), v(m, dv);
        for (auto* mat : {&q, &k, &v})
            for (Eigen::Index i = 0; i < mat->size(); ++i) mat->data()[i] = 2.0 * rng.normal();
        worst_attn = std::max(worst_attn, (attention(q, k, v) - oracle::attention(q, k, v)).cwiseAbs().maxCoeff());
    }

    for (const Shape sh : {Shape{4, 2, 4, 4}, Shape{3, 1, 4, 2}, Shape{2, 2, 2, 4}}) {
        for (SpectrumKind kind : {SpectrumKind::lowpass, SpectrumKind::broadband}) {
            const auto prior = make_gp_prior(sh, 0.8, kind, 1.3);
            const auto cov = oracle::prior_covariance(sh, prior.temporal_rho, prior.spatial_spectrum, prior.variance_scale);
            const auto z = oracle::random_video(sh, 21);
            for (int t : {20, 400, 1000}) {
                const auto got = analytic_eps(prior, z, t, Condition::null(), sched);
                worst_eps = std::max(worst_eps, max_abs_diff(got, oracle::posterior_eps(cov, prior.mean, z, sched.alpha_bar(t))));
            }
        }
    }

    Verdict v;
    v.pass = worst_rt < 1e-6 && worst_step < 1e-6 && worst_lpff < 1e-6 && worst_attn < 1e-6 && worst_eps < 1e-5;
    v.detail = "round trip " + fmt(worst_rt) + ", ddim_step " + fmt(worst_step) + ", lpff " + fmt(worst_lpff) +
               ", attention " + fmt(worst_attn) + ", analytic_eps " + fmt(worst_eps);
    return v;
}

Verdict criterion2() {
    auto cfg = base_config(RunMode::roundtrip, "c2_roundtrip", 20);
    cfg.shape = Shape{16, 4, 8, 8};
    const auto m = run_logged(cfg);
    const double err = m.at("aggregate").at("max_roundtrip_error").get<double>();
    return {err < 1e-3, "max relative L2 over 20 seeds " + fmt(err) + " (limit 1e-3)"};
}

Verdict criterion3() {
    const Shape sh{4, 2, 4, 4};
    const auto prior = make_gp_prior(sh, 0.0, SpectrumKind::flat, 1.0);
    const AnalyticDenoiser model(prior);
    const auto sched = default_t2i_schedule();
    const auto grid = select_timesteps(sched, 50);
    const std::size_t n = 2000, dims = sh.numel();
    std::vector<LatentVideo> samples(n);
    parallel_for(n, [&](std::size_t i) { samples[i] = baseline_sample(model, sched, grid, {}, i); });
    double bias_sum = 0, var_sum = 0, worst_var = 0;
    for (std::size_t d = 0; d < dims; ++d) {
        double s1 = 0, s2 = 0;
        for (const auto& x : samples) {
            s1 += x[d];
            s2 += x[d] * x[d];
        }
        const double mu = s1 / n, var = (s2 - n * mu * mu) / (n - 1);
        bias_sum += std::abs(mu);
        var_sum += var;
        worst_var = std::max(worst_var, std::abs(var - 1.0));
    }
    const double bias = bias_sum / dims, var = var_sum / dims;

    // Each deterministic step scales a standard-normal latent by
    // sqrt(ab_p ab_t) + sqrt((1 - ab_p)(1 - ab_t)).
    double gain = 1.0;
    for (std::size_t i = 0; i < grid.steps.size(); ++i) {
        const double ab_t = sched.alpha_bar(grid.steps[i]);
        const double ab_p = i + 1 < grid.steps.size() ? sched.alpha_bar(grid.steps[i + 1]) : 1.0;
        gain *= std::sqrt(ab_p * ab_t) + std::sqrt((1 - ab_p) * (1 - ab_t));
    }
    const bool closed_form = std::abs(var / (gain * gain) - 1.0) < 0.01;
    return {bias < 0.05 && std::abs(var - 1.0) < 0.1 && closed_form,
            "mean |bias| " + fmt(bias) + ", mean variance " + fmt(var) + " (closed form " + fmt(gain * gain) +
                "), worst single dimension |var - 1| " + fmt(worst_var) + " over " + std::to_string(dims) + " dims"};
}

Verdict criterion4() {
    const auto m = run_logged(base_config(RunMode::ablate_inversion, "c4_inversion", 20));
    const double same = arm_metric(m, "inversion_same_noise", "frame_consistency");
    const double ddim = arm_metric(m, "inversion_ddim", "frame_consistency");
    const double rnd = arm_metric(m, "inversion_random_noise", "frame_consistency");
    return {same >= ddim && ddim >= rnd && same - rnd > 0.02,
            "median FC same " + fmt(same) + ", ddim " + fmt(ddim) + ", random " + fmt(rnd)};
}

Verdict criterion5() {
    const auto m = run_logged(base_config(RunMode::ablate_filter, "c5_filter", 20));
    const double fl_none = arm_metric(m, "filter_none", "flicker_energy");
    const double fl_temp = arm_metric(m, "filter_temporal", "flicker_energy");
    const double de_temp = arm_metric(m, "filter_temporal", "spatial_detail");
    const double de_st = arm_metric(m, "filter_spatial_temporal", "spatial_detail");
    const bool a = fl_temp < fl_none, b = de_temp > de_st;
    return {a && b, std::string("flicker temporal ") + fmt(fl_temp) + " vs none " + fmt(fl_none) + (a ? " ok" : " FAIL") +
                        "; detail temporal " + fmt(de_temp) + " vs spatial_temporal " + fmt(de_st) + (b ? " ok" : " FAIL")};
}

struct C6Numbers {
    double fc_elevate = 0, fc_t2i = 0, sd_elevate = 0, sd_t2v = 0;
    json steps_manifest;
};

// One ablate_steps run holds the step arms plus the elevated and T2I arms.
C6Numbers g_c6;

Verdict criterion6() {
    auto cfg = base_config(RunMode::ablate_steps, "c6_c7_steps", 20);
    cfg.step_counts = {50, 100};
    const auto m = run_logged(cfg);
    auto& n = g_c6;
    n.steps_manifest = m;
    n.fc_elevate = arm_metric(m, "elevate", "frame_consistency");
    n.fc_t2i = arm_metric(m, "t2i", "frame_consistency");
    n.sd_elevate = arm_metric(m, "elevate", "spectrum_distance_t2i");
    n.sd_t2v = arm_metric(m, "t2v_steps50", "spectrum_distance_t2i");
    const bool a = n.sd_elevate < n.sd_t2v, b = n.fc_elevate > n.fc_t2i;
    return {a && b, "dist to T2I prior elevated " + fmt(n.sd_elevate) + " vs T2V " + fmt(n.sd_t2v) +
                        "; FC elevated " + fmt(n.fc_elevate) + " vs T2I " + fmt(n.fc_t2i)};
}

Verdict criterion7() {
    const auto& n = g_c6;
    const auto& m = n.steps_manifest;
    const double d_fc = std::abs(arm_metric(m, "t2v_steps100", "frame_consistency") -
                                 arm_metric(m, "t2v_steps50", "frame_consistency"));
    const double d_sd = std::abs(arm_metric(m, "t2v_steps100", "spectrum_distance_t2i") -
                                 arm_metric(m, "t2v_steps50", "spectrum_distance_t2i"));
    const double gain_fc = n.fc_elevate - n.fc_t2i, gain_sd = n.sd_t2v - n.sd_elevate;
    const bool ok = gain_fc > 0 && gain_sd > 0 && d_fc < 0.5 * gain_fc && d_sd < 0.5 * gain_sd;
    return {ok, "|dFC| " + fmt(d_fc) + " vs half gain " + fmt(0.5 * gain_fc) + "; |d dist| " + fmt(d_sd) +
                    " vs half gain " + fmt(0.5 * gain_sd)};
}

Verdict criterion8() {
    bool ok = true;
    std::string detail;

    // Empty refine set against the image baseline, through the runner.
    auto e = base_config(RunMode::elevate, "c8_empty_refine", 5);
    e.refine_steps = 0;
    auto b = e;
    b.mode = RunMode::baseline_t2i;
    b.output_dir = g_root / "c8_t2i";
    const auto me = run_logged(e), mb = run_logged(b);
    bool same = true;
    for (std::size_t i = 0; i < e.seeds.size(); ++i)
        same = same && me.at("runs")[i].at("sha256") == mb.at("runs")[i].at("sha256");
    ok = ok && same;
    detail += std::string("empty refine == T2I baseline: ") + (same ? "yes" : "no");

    // Wrapper at mix 0 against its base model.
    const Shape sh = kDefaultShape;
    auto base = std::make_shared<AnalyticDenoiser>(default_t2i_prior(sh));
    auto wrapped = wrap_crossframe(base, AttentionParams::random_orthonormal(sh.channels, 7), 0.0);
    const auto sched = default_t2i_schedule();
    bool bitwise = true;
    for (int t : {20, 500, 1000}) {
        const auto z = oracle::random_video(sh, static_cast<std::uint64_t>(t));
        bitwise = bitwise && wrapped->predict_eps(z, t, Condition::null(), sched) ==
                                 base->predict_eps(z, t, Condition::null(), sched);
    }
    ok = ok && bitwise;
    detail += std::string("; mix 0 wrapper == base: ") + (bitwise ? "yes" : "no");

    // With eta 0 the sampler consumes no randomness after the initial latent.
    const auto grid = select_timesteps(sched, 50);
    const auto z = oracle::random_video(sh, 99);
    RandomStream r1(1), r2(12345);
    SamplerConfig c1, c2;
    c2.seed = 777;
    const bool indep = ddim_sample(*base, z, grid, sched, c1, r1) == ddim_sample(*base, z, grid, sched, c2, r2);
    ok = ok && indep;
    detail += std::string("; eta 0 independent of sampler seed: ") + (indep ? "yes" : "no");
    return {ok, detail};
}

Verdict criterion9() {
    std::size_t compared = 0, mismatched = 0;
    for (const auto& path : g_manifests) {
        const auto old = json::parse(std::ifstream(path));
        auto cfg = load_config(path);
        cfg.output_dir = path.parent_path().string() + "_rerun";
        const auto fresh = run(cfg, {g_jobs, false}).manifest;
        const auto& a = old.at("runs");
        const auto& b = fresh.at("runs");
        if (a.size() != b.size()) {
            ++mismatched;
            continue;
        }
        for (std::size_t i = 0; i < a.size(); ++i) {
            ++compared;
            mismatched += a[i].at("sha256") != b[i].at("sha256") || a[i].at("arm") != b[i].at("arm");
        }
    }
    return {compared > 0 && mismatched == 0, std::to_string(g_manifests.size()) + " manifests re-run, " +
                                                 std::to_string(compared) + " latents compared, " +
                                                 std::to_string(mismatched) + " mismatched"};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"elevator acceptance suite"};
    g_jobs = std::max(1u, std::thread::hardware_concurrency());
    std::string root = (fs::temp_directory_path() / "elevator_acceptance").string();
    app.add_option("--jobs", g_jobs, "concurrent seeds");
    app.add_option("--output", root, "scratch directory");
    CLI11_PARSE(app, argc, argv);
    g_root = root;
    fs::remove_all(g_root);
    fs::create_directories(g_root);

    struct Criterion {
        int id;
        double limit_seconds;
        Verdict (*fn)();
    };
    const Criterion criteria[] = {{1, 10, criterion1},  {2, 30, criterion2},  {3, 120, criterion3},
                                  {4, 300, criterion4}, {5, 300, criterion5}, {6, 600, criterion6},
                                  {7, 600, criterion7}, {8, 600, criterion8}, {9, 600, criterion9}};
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.fn();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs >= c.limit_seconds) {
            v.pass = false;
            v.detail += "; over time limit";
        }
        failures += !v.pass;
        std::cout << (v.pass ? "PASS" : "FAIL") << " C" << c.id << ": " << v.detail << " [" << fmt(secs) << " s, limit "
                  << c.limit_seconds << " s]" << std::endl;
    }
    std::cout << (9 - failures) << "/9 criteria passed" << std::endl;
    return failures ? 1 : 0;
}
