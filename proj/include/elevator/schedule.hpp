// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "elevator/latent.hpp"

namespace elevator {

enum class ScheduleKind { linear_beta, scaled_linear_beta, cosine };

std::string_view to_string(ScheduleKind kind);
ScheduleKind schedule_kind_from_string(std::string_view name);

struct ScheduleParams {
    double beta_start = 1e-4;
    double beta_end = 2e-2;
    // cosine only
    double cosine_offset = 0.008;
    double max_beta = 0.999;
};

/// Cumulative signal coefficients alpha_bar[0..T] of a discrete diffusion.
///
/// alpha_bar[0] is exactly 1 and the sequence is strictly decreasing and
/// positive. Everywhere in this project "alpha" means the cumulative product.
class NoiseSchedule {
public:
    ScheduleKind kind() const { return kind_; }
    const ScheduleParams& params() const { return params_; }
    int total_steps() const { return static_cast<int>(alpha_bar_.size()) - 1; }
    const std::vector<double>& alpha_bars() const { return alpha_bar_; }

    // Throws timestep_out_of_range outside [0, T].
    double alpha_bar(int t) const;

private:
    friend NoiseSchedule make_schedule(ScheduleKind, int, const ScheduleParams&);

    ScheduleKind kind_ = ScheduleKind::linear_beta;
    ScheduleParams params_{};
    std::vector<double> alpha_bar_;
};

NoiseSchedule make_schedule(ScheduleKind kind, int total_steps, const ScheduleParams& params = {});

// Defaults for the two sides of the pipeline; intentionally different kinds.
NoiseSchedule default_t2i_schedule();
NoiseSchedule default_t2v_schedule();

// sqrt(ab_t) z0 + sqrt(1 - ab_t) eps
LatentVideo forward_diffuse(const LatentVideo& z0, int t, const LatentVideo& eps, const NoiseSchedule& s);

inline constexpr double kAlphaBarFloor = 1e-8;

// (z_t - sqrt(1 - ab_t) eps) / sqrt(ab_t). Throws degenerate_alpha below kAlphaBarFloor.
LatentVideo project_clean(const LatentVideo& z_t, const LatentVideo& eps_pred, int t, const NoiseSchedule& s);

double snr(const NoiseSchedule& s, int t);

// Index on `to` whose SNR is closest to snr(from, t).
int snr_matched_timestep(const NoiseSchedule& from, const NoiseSchedule& to, int t);

struct TimestepGrid {
    std::vector<int> steps;       // strictly decreasing, all in [1, T]
    std::vector<int> refine_set;  // subset of steps, same order

    bool is_refine_step(int t) const;
    // Position of t in steps, or -1.
    int position(int t) const;
    // Next lower grid timestep after position i (0 past the end).
    int next_after(std::size_t i) const { return i + 1 < steps.size() ? steps[i + 1] : 0; }
};

// K steps with stride T/K starting at T: t_i = T - floor(i*T/K).
TimestepGrid select_timesteps(const NoiseSchedule& s, int k);

// Spreads k refine steps evenly over the high-noise half of the grid,
// always including the first step.
TimestepGrid select_refine_steps(const TimestepGrid& grid, int k);

}  // namespace elevator
