// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <string_view>

#include "elevator/denoiser.hpp"
#include "elevator/freqfilter.hpp"
#include "elevator/sampler.hpp"
#include "elevator/schedule.hpp"
#include "elevator/trace.hpp"

namespace elevator {

// How a refined clean latent re-enters the image model's noise distribution.
enum class InversionStrategy { ddim, same_noise, random_noise };
enum class FilterMode { none, temporal, spatial_temporal };

std::string_view to_string(InversionStrategy s);
InversionStrategy inversion_strategy_from_string(std::string_view name);
std::string_view to_string(FilterMode m);
FilterMode filter_mode_from_string(std::string_view name);

struct ModelSide {
    std::shared_ptr<const Denoiser> model;
    NoiseSchedule schedule;
    SamplerConfig sampler;
};

struct FilterSettings {
    FilterMode mode = FilterMode::temporal;
    double d0 = 0.25;
    bool every_refine = true;  // false: only at the first refining step
};

/// Everything one decomposed sampling run needs.
///
/// Both schedules share T and "timestep t" is the same integer index on both
/// sides unless snr_matched is set, in which case the video side runs from
/// the timestep with the closest signal-to-noise ratio.
struct ElevatorPlan {
    ModelSide t2v;
    ModelSide t2i;  // the inflated image model
    TimestepGrid grid;
    int n_sdedit = 9;
    FilterSettings filter;
    InversionStrategy inversion = InversionStrategy::ddim;
    bool snr_matched = false;
    bool allow_empty_refine = false;
    std::uint64_t seed = 0;

    Shape shape() const { return t2i.model->shape(); }
    // Throws plan_invalid.
    void validate() const;
    LowPassMask mask() const;
};

/// Temporal motion refining at refine step t: clean-project under the image
/// schedule, low-pass along time, SDEdit with the video model for n_sdedit
/// steps, clean-project under the video schedule, then carry back to the
/// image model's noise distribution at t (DDIM inversion with the null
/// condition by default).
LatentVideo refine_temporal(const LatentVideo& z_t, int t, const ElevatorPlan& plan, RandomStream& rng,
                            Trace* trace = nullptr);

// One image-model sampler step t -> t_prev with the inflated denoiser.
LatentVideo elevate_spatial(const LatentVideo& z_t, int t, int t_prev, const ElevatorPlan& plan, RandomStream& rng,
                            Trace* trace = nullptr);

// Full decomposed chain from seeded Gaussian noise; returns the clean latent.
LatentVideo elevate_sample(const ElevatorPlan& plan, Trace* trace = nullptr);

// Plain single-model chain from seeded Gaussian noise, same trace format.
LatentVideo baseline_sample(const Denoiser& model, const NoiseSchedule& s, const TimestepGrid& grid,
                            const SamplerConfig& cfg, std::uint64_t seed, Trace* trace = nullptr,
                            const std::string& schedule_tag = "t2i");

}  // namespace elevator
