// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#include "elevator/elevator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "elevator/error.hpp"

namespace elevator {

std::string_view to_string(InversionStrategy s) {
    switch (s) {
    case InversionStrategy::ddim: return "ddim";
    case InversionStrategy::same_noise: return "same_noise";
    case InversionStrategy::random_noise: return "random_noise";
    }
    return "unknown";
}

InversionStrategy inversion_strategy_from_string(std::string_view name) {
    if (name == "ddim") return InversionStrategy::ddim;
    if (name == "same_noise") return InversionStrategy::same_noise;
    if (name == "random_noise") return InversionStrategy::random_noise;
    throw Error(ErrorCode::invalid_config, "unknown inversion strategy '" + std::string(name) + "'");
}

std::string_view to_string(FilterMode m) {
    switch (m) {
    case FilterMode::none: return "none";
    case FilterMode::temporal: return "temporal";
    case FilterMode::spatial_temporal: return "spatial_temporal";
    }
    return "unknown";
}

FilterMode filter_mode_from_string(std::string_view name) {
    if (name == "none") return FilterMode::none;
    if (name == "temporal") return FilterMode::temporal;
    if (name == "spatial_temporal") return FilterMode::spatial_temporal;
    throw Error(ErrorCode::invalid_config, "unknown filter mode '" + std::string(name) + "'");
}

void ElevatorPlan::validate() const {
    require(t2v.model && t2i.model, ErrorCode::plan_invalid, "both models must be set");
    require(t2v.model->shape() == t2i.model->shape(), ErrorCode::plan_invalid, "model shapes differ");
    const int total = t2i.schedule.total_steps();
    require(t2v.schedule.total_steps() == total, ErrorCode::plan_invalid, "schedules must share T");
    require(!grid.steps.empty(), ErrorCode::plan_invalid, "empty grid");
    for (std::size_t i = 0; i < grid.steps.size(); ++i) {
        require(grid.steps[i] >= 1 && grid.steps[i] <= total, ErrorCode::plan_invalid, "grid step outside [1, T]");
        require(i == 0 || grid.steps[i] < grid.steps[i - 1], ErrorCode::plan_invalid,
                "grid steps must be strictly decreasing");
    }
    require(!grid.refine_set.empty() || allow_empty_refine, ErrorCode::plan_invalid,
            "refine set is empty; enable pure image-model mode explicitly");
    require(n_sdedit >= 0, ErrorCode::plan_invalid, "n_sdedit must be >= 0");
    for (int t : grid.refine_set) {
        const int pos = grid.position(t);
        require(pos >= 0, ErrorCode::plan_invalid, "refine step " + std::to_string(t) + " not on grid");
        require(n_sdedit <= static_cast<int>(grid.steps.size()) - pos, ErrorCode::plan_invalid,
                "n_sdedit exceeds grid depth below refine step " + std::to_string(t));
    }
    t2v.sampler.validate();
    t2i.sampler.validate();
    if (filter.mode != FilterMode::none) {
        require(filter.d0 > 0.0, ErrorCode::plan_invalid, "filter d0 must be > 0");
    }
}

LowPassMask ElevatorPlan::mask() const {
    return filter.mode == FilterMode::spatial_temporal ? gaussian_mask(shape(), filter.d0)
                                                       : gaussian_mask(shape().frames, filter.d0);
}

namespace {

// Grid the video model walks when its start timestep is remapped.
TimestepGrid video_grid(const ElevatorPlan& plan, int t_video, int t) {
    if (t_video == t) {
        return plan.grid;
    }
    TimestepGrid g;
    g.steps.push_back(t_video);
    for (int s : plan.grid.steps) {
        if (s < t && s < t_video) g.steps.push_back(s);
    }
    return g;
}

}  // namespace

LatentVideo refine_temporal(const LatentVideo& z_t, int t, const ElevatorPlan& plan, RandomStream& rng,
                            Trace* trace) {
    require(plan.grid.is_refine_step(t), ErrorCode::step_not_refinable,
            "timestep " + std::to_string(t) + " is not a refining step");
    const int step = plan.grid.position(t);
    const NoiseSchedule& image_s = plan.t2i.schedule;
    const NoiseSchedule& video_s = plan.t2v.schedule;

    const LatentVideo eps = cfg_eps(*plan.t2i.model, z_t, t, plan.t2i.sampler.guidance, image_s);
    LatentVideo clean = project_clean(z_t, eps, t, image_s);
    if (trace) trace->record(step, t, 0, "t2i_project", "t2i", true, image_s.alpha_bar(t), clean, clean);

    const bool filter_now = plan.filter.mode != FilterMode::none &&
                            (plan.filter.every_refine || t == plan.grid.refine_set.front());
    if (filter_now) {
        const FilterAxes axes =
            plan.filter.mode == FilterMode::temporal ? FilterAxes::temporal : FilterAxes::spatial_temporal;
        clean = lpff(clean, plan.mask(), axes);
        if (trace) trace->record(step, t, 0, "lpff", "none", true, 1.0, clean, clean);
    }

    if (plan.n_sdedit > 0) {
        const int t_video = plan.snr_matched ? snr_matched_timestep(image_s, video_s, t) : t;
        const TimestepGrid grid = video_grid(plan, t_video, t);
        StepObserver observer;
        if (trace) {
            observer = [&](int, int t_prev, const StepResult& r) {
                trace->record(step, t, t_prev, "t2v_sdedit", "t2v", t_prev == 0, video_s.alpha_bar(t_prev), r.next,
                              r.clean);
            };
        }
        const SdeditResult edited =
            sdedit(*plan.t2v.model, clean, t_video, plan.n_sdedit, grid, video_s, plan.t2v.sampler, rng, observer);
        if (edited.timestep > 0) {
            const LatentVideo eps_v =
                cfg_eps(*plan.t2v.model, edited.latent, edited.timestep, plan.t2v.sampler.guidance, video_s);
            clean = project_clean(edited.latent, eps_v, edited.timestep, video_s);
        } else {
            clean = edited.latent;
        }
        if (trace) {
            trace->record(step, t, 0, "t2v_project", "t2v", true, video_s.alpha_bar(edited.timestep), clean, clean);
        }
    }

    LatentVideo inverted;
    switch (plan.inversion) {
    case InversionStrategy::ddim:
        inverted = ddim_invert(*plan.t2i.model, clean, plan.grid, t, image_s, Condition::null());
        break;
    case InversionStrategy::same_noise: {
        const Shape& sh = clean.shape();
        const LatentVideo one = rng.normal_like(Shape{1, sh.channels, sh.height, sh.width});
        LatentVideo noise(sh);
        for (std::size_t f = 0; f < sh.frames; ++f) {
            std::copy(one.data().begin(), one.data().end(), noise.frame(f).begin());
        }
        inverted = forward_diffuse(clean, t, noise, image_s);
        break;
    }
    case InversionStrategy::random_noise:
        inverted = forward_diffuse(clean, t, rng.normal_like(clean.shape()), image_s);
        break;
    }
    if (trace) trace->record(step, t, t, "t2i_invert", "t2i", false, image_s.alpha_bar(t), inverted, clean);
    return inverted;
}

LatentVideo elevate_spatial(const LatentVideo& z_t, int t, int t_prev, const ElevatorPlan& plan, RandomStream& rng,
                            Trace* trace) {
    StepResult r = ddim_step_detailed(*plan.t2i.model, z_t, t, t_prev, plan.t2i.schedule, plan.t2i.sampler, rng);
    if (trace) {
        trace->record(plan.grid.position(t), t, t_prev, "t2i_elevate", "t2i", t_prev == 0,
                      plan.t2i.schedule.alpha_bar(t_prev), r.next, r.clean);
    }
    return std::move(r.next);
}

LatentVideo elevate_sample(const ElevatorPlan& plan, Trace* trace) {
    plan.validate();
    RandomStream rng(plan.seed);
    LatentVideo z = rng.normal_like(plan.shape());
    const int first = plan.grid.steps.front();
    if (trace) trace->record(0, first, first, "init", "t2i", false, plan.t2i.schedule.alpha_bar(first), z, z);
    for (std::size_t i = 0; i < plan.grid.steps.size(); ++i) {
        const int t = plan.grid.steps[i];
        if (plan.grid.is_refine_step(t)) {
            z = refine_temporal(z, t, plan, rng, trace);
        }
        z = elevate_spatial(z, t, plan.grid.next_after(i), plan, rng, trace);
    }
    return z;
}

LatentVideo baseline_sample(const Denoiser& model, const NoiseSchedule& s, const TimestepGrid& grid,
                            const SamplerConfig& cfg, std::uint64_t seed, Trace* trace,
                            const std::string& schedule_tag) {
    require(!grid.steps.empty(), ErrorCode::plan_invalid, "empty grid");
    RandomStream rng(seed);
    const LatentVideo z = rng.normal_like(model.shape());
    const int first = grid.steps.front();
    StepObserver observer;
    if (trace) {
        trace->record(0, first, first, "init", schedule_tag, false, s.alpha_bar(first), z, z);
        observer = [&](int t, int t_prev, const StepResult& r) {
            trace->record(grid.position(t), t, t_prev, "denoise", schedule_tag, t_prev == 0, s.alpha_bar(t_prev),
                          r.next, r.clean);
        };
    }
    return ddim_sample(model, z, grid, s, cfg, rng, observer);
}

}  // namespace elevator
