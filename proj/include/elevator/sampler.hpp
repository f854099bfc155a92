// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>

#include "elevator/denoiser.hpp"
#include "elevator/rng.hpp"
#include "elevator/schedule.hpp"

namespace elevator {

struct SamplerConfig {
    double eta = 0.0;  // 0 = deterministic DDIM, 1 = ancestral DDPM
    Condition guidance;
    std::uint64_t seed = 0;

    void validate() const;
};

// eta * sqrt((1 - ab_prev) / (1 - ab_t)) * sqrt(1 - ab_t / ab_prev)
double ddim_sigma(const NoiseSchedule& s, int t, int t_prev, double eta);

struct StepResult {
    LatentVideo next;   // latent at t_prev
    LatentVideo clean;  // clean projection used for the step
};

/// One generalized DDIM transition t -> t_prev:
///   z_prev = sqrt(ab_prev) x0 + sqrt(1 - ab_prev - sigma^2) eps_hat + sigma * noise.
/// Noise is drawn from rng only when sigma > 0.
StepResult ddim_step_detailed(const Denoiser& model, const LatentVideo& z_t, int t, int t_prev,
                              const NoiseSchedule& s, const SamplerConfig& cfg, RandomStream& rng);
LatentVideo ddim_step(const Denoiser& model, const LatentVideo& z_t, int t, int t_prev, const NoiseSchedule& s,
                      const SamplerConfig& cfg, RandomStream& rng);

/// One deterministic DDIM inversion step t_from -> t_to (t_to > t_from).
/// The noise estimate is eps(z_{t_from}, t_to), i.e. the latent at the lower
/// timestep evaluated with the higher timestep index.
LatentVideo ddim_invert_step(const Denoiser& model, const LatentVideo& z, int t_from, int t_to,
                             const NoiseSchedule& s, const Condition& cond);

using StepObserver = std::function<void(int t, int t_prev, const StepResult& step)>;

// Runs grid.steps from the first step down to 0.
LatentVideo ddim_sample(const Denoiser& model, const LatentVideo& z_init, const TimestepGrid& grid,
                        const NoiseSchedule& s, const SamplerConfig& cfg, RandomStream& rng,
                        const StepObserver& observer = {});

// Ascends 0 -> smallest grid step -> ... -> target_t.
LatentVideo ddim_invert(const Denoiser& model, const LatentVideo& z0, const TimestepGrid& grid, int target_t,
                        const NoiseSchedule& s, const Condition& cond = Condition::null());

struct SdeditResult {
    LatentVideo latent;
    int timestep = 0;
};

/// Forward-diffuses z_clean to grid timestep t with fresh noise, then takes
/// n_steps sampler steps down the grid. Returns the latent and where it ended.
SdeditResult sdedit(const Denoiser& model, const LatentVideo& z_clean, int t, int n_steps, const TimestepGrid& grid,
                    const NoiseSchedule& s, const SamplerConfig& cfg, RandomStream& rng,
                    const StepObserver& observer = {});

}  // namespace elevator
