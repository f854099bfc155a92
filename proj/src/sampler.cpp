// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#include "elevator/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "elevator/error.hpp"

namespace elevator {

void SamplerConfig::validate() const {
    require(std::isfinite(eta) && eta >= 0.0 && eta <= 1.0, ErrorCode::invalid_eta, "eta must lie in [0, 1]");
    require(guidance.guidance_scale >= 0.0, ErrorCode::invalid_params, "guidance scale must be >= 0");
}

double ddim_sigma(const NoiseSchedule& s, int t, int t_prev, double eta) {
    const double ab = s.alpha_bar(t);
    const double ab_prev = s.alpha_bar(t_prev);
    const double var = (1.0 - ab_prev) / (1.0 - ab) * (1.0 - ab / ab_prev);
    return eta * std::sqrt(std::max(var, 0.0));
}

StepResult ddim_step_detailed(const Denoiser& model, const LatentVideo& z_t, int t, int t_prev,
                              const NoiseSchedule& s, const SamplerConfig& cfg, RandomStream& rng) {
    require(t > t_prev && t_prev >= 0, ErrorCode::timestep_order,
            "ddim_step needs t > t_prev >= 0, got " + std::to_string(t) + " -> " + std::to_string(t_prev));
    cfg.validate();
    const LatentVideo eps = cfg_eps(model, z_t, t, cfg.guidance, s);
    LatentVideo clean = project_clean(z_t, eps, t, s);

    const double ab_prev = s.alpha_bar(t_prev);
    const double sigma = ddim_sigma(s, t, t_prev, cfg.eta);
    const double dir = std::sqrt(std::max(1.0 - ab_prev - sigma * sigma, 0.0));
    LatentVideo next = axpby(std::sqrt(ab_prev), clean, dir, eps);
    if (sigma > 0.0) {
        const LatentVideo noise = rng.normal_like(z_t.shape());
        for (std::size_t i = 0; i < next.size(); ++i) {
            next[i] += sigma * noise[i];
        }
    }
    return {std::move(next), std::move(clean)};
}

LatentVideo ddim_step(const Denoiser& model, const LatentVideo& z_t, int t, int t_prev, const NoiseSchedule& s,
                      const SamplerConfig& cfg, RandomStream& rng) {
    return ddim_step_detailed(model, z_t, t, t_prev, s, cfg, rng).next;
}

LatentVideo ddim_invert_step(const Denoiser& model, const LatentVideo& z, int t_from, int t_to,
                             const NoiseSchedule& s, const Condition& cond) {
    require(t_to > t_from && t_from >= 0, ErrorCode::timestep_order,
            "inversion needs t_to > t_from >= 0, got " + std::to_string(t_from) + " -> " + std::to_string(t_to));
    const LatentVideo eps = cfg_eps(model, z, t_to, cond, s);
    const LatentVideo clean = project_clean(z, eps, t_from, s);
    const double ab_to = s.alpha_bar(t_to);
    return axpby(std::sqrt(ab_to), clean, std::sqrt(1.0 - ab_to), eps);
}

LatentVideo ddim_sample(const Denoiser& model, const LatentVideo& z_init, const TimestepGrid& grid,
                        const NoiseSchedule& s, const SamplerConfig& cfg, RandomStream& rng,
                        const StepObserver& observer) {
    require(!grid.steps.empty(), ErrorCode::invalid_params, "empty timestep grid");
    LatentVideo z = z_init;
    for (std::size_t i = 0; i < grid.steps.size(); ++i) {
        const int t = grid.steps[i];
        const int t_prev = grid.next_after(i);
        StepResult step = ddim_step_detailed(model, z, t, t_prev, s, cfg, rng);
        if (observer) observer(t, t_prev, step);
        z = std::move(step.next);
    }
    return z;
}

LatentVideo ddim_invert(const Denoiser& model, const LatentVideo& z0, const TimestepGrid& grid, int target_t,
                        const NoiseSchedule& s, const Condition& cond) {
    const int pos = grid.position(target_t);
    require(pos >= 0, ErrorCode::target_not_on_grid,
            "inversion target " + std::to_string(target_t) + " is not a grid step");
    LatentVideo z = z0;
    int from = 0;
    for (int i = static_cast<int>(grid.steps.size()) - 1; i >= pos; --i) {
        const int to = grid.steps[static_cast<std::size_t>(i)];
        z = ddim_invert_step(model, z, from, to, s, cond);
        from = to;
    }
    return z;
}

SdeditResult sdedit(const Denoiser& model, const LatentVideo& z_clean, int t, int n_steps, const TimestepGrid& grid,
                    const NoiseSchedule& s, const SamplerConfig& cfg, RandomStream& rng,
                    const StepObserver& observer) {
    const int pos = grid.position(t);
    require(pos >= 0, ErrorCode::t_not_on_grid, "sdedit start " + std::to_string(t) + " is not a grid step");
    const int available = static_cast<int>(grid.steps.size()) - pos;
    require(n_steps >= 1 && n_steps <= available, ErrorCode::n_steps_out_of_range,
            "sdedit n_steps=" + std::to_string(n_steps) + " outside [1, " + std::to_string(available) + "]");

    const LatentVideo noise = rng.normal_like(z_clean.shape());
    LatentVideo z = forward_diffuse(z_clean, t, noise, s);
    int t_cur = t;
    for (int i = 0; i < n_steps; ++i) {
        const auto idx = static_cast<std::size_t>(pos + i);
        const int t_next = grid.next_after(idx);
        StepResult step = ddim_step_detailed(model, z, grid.steps[idx], t_next, s, cfg, rng);
        if (observer) observer(grid.steps[idx], t_next, step);
        z = std::move(step.next);
        t_cur = t_next;
    }
    return {std::move(z), t_cur};
}

}  // namespace elevator
