// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#include "elevator/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "elevator/error.hpp"

namespace elevator {

std::string_view to_string(ScheduleKind kind) {
    switch (kind) {
    case ScheduleKind::linear_beta: return "linear_beta";
    case ScheduleKind::scaled_linear_beta: return "scaled_linear_beta";
    case ScheduleKind::cosine: return "cosine";
    }
    return "unknown";
}

ScheduleKind schedule_kind_from_string(std::string_view name) {
    if (name == "linear_beta") return ScheduleKind::linear_beta;
    if (name == "scaled_linear_beta") return ScheduleKind::scaled_linear_beta;
    if (name == "cosine") return ScheduleKind::cosine;
    throw Error(ErrorCode::invalid_params, "unknown schedule kind '" + std::string(name) + "'");
}

double NoiseSchedule::alpha_bar(int t) const {
    require(t >= 0 && t <= total_steps(), ErrorCode::timestep_out_of_range,
            "timestep " + std::to_string(t) + " outside [0, " + std::to_string(total_steps()) + "]");
    return alpha_bar_[static_cast<std::size_t>(t)];
}

namespace {

std::vector<double> betas_for(ScheduleKind kind, int total_steps, const ScheduleParams& p) {
    const auto n = static_cast<std::size_t>(total_steps);
    std::vector<double> betas(n);
    auto lerp = [&](double a, double b, std::size_t i) {
        if (n == 1) return a;
        return a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    };
    switch (kind) {
    case ScheduleKind::linear_beta:
        for (std::size_t i = 0; i < n; ++i) betas[i] = lerp(p.beta_start, p.beta_end, i);
        break;
    case ScheduleKind::scaled_linear_beta:
        for (std::size_t i = 0; i < n; ++i) {
            const double r = lerp(std::sqrt(p.beta_start), std::sqrt(p.beta_end), i);
            betas[i] = r * r;
        }
        break;
    case ScheduleKind::cosine: {
        auto f = [&](double x) {
            const double c = std::cos((x + p.cosine_offset) / (1.0 + p.cosine_offset) * std::numbers::pi / 2.0);
            return c * c;
        };
        for (std::size_t i = 0; i < n; ++i) {
            const double t0 = static_cast<double>(i) / static_cast<double>(n);
            const double t1 = static_cast<double>(i + 1) / static_cast<double>(n);
            betas[i] = std::min(1.0 - f(t1) / f(t0), p.max_beta);
        }
        break;
    }
    }
    return betas;
}

}  // namespace

NoiseSchedule make_schedule(ScheduleKind kind, int total_steps, const ScheduleParams& params) {
    require(total_steps >= 1, ErrorCode::invalid_params, "total_steps must be >= 1");
    if (kind == ScheduleKind::cosine) {
        require(params.cosine_offset >= 0.0 && params.max_beta > 0.0 && params.max_beta < 1.0,
                ErrorCode::invalid_params, "cosine schedule needs offset >= 0 and 0 < max_beta < 1");
    } else {
        require(params.beta_start > 0.0 && params.beta_start <= params.beta_end && params.beta_end < 1.0,
                ErrorCode::invalid_params, "beta schedule needs 0 < beta_start <= beta_end < 1");
    }

    NoiseSchedule s;
    s.kind_ = kind;
    s.params_ = params;
    s.alpha_bar_.resize(static_cast<std::size_t>(total_steps) + 1);
    s.alpha_bar_[0] = 1.0;
    const auto betas = betas_for(kind, total_steps, params);
    for (std::size_t i = 0; i < betas.size(); ++i) {
        s.alpha_bar_[i + 1] = s.alpha_bar_[i] * (1.0 - betas[i]);
    }
    for (std::size_t i = 1; i < s.alpha_bar_.size(); ++i) {
        require(s.alpha_bar_[i] < s.alpha_bar_[i - 1] && s.alpha_bar_[i] > 0.0, ErrorCode::invalid_params,
                "alpha_bar not strictly decreasing and positive at t=" + std::to_string(i));
    }
    return s;
}

NoiseSchedule default_t2i_schedule() { return make_schedule(ScheduleKind::linear_beta, 1000, {1e-4, 2e-2}); }

NoiseSchedule default_t2v_schedule() {
    return make_schedule(ScheduleKind::scaled_linear_beta, 1000, {1e-4, 2e-2});
}

LatentVideo forward_diffuse(const LatentVideo& z0, int t, const LatentVideo& eps, const NoiseSchedule& s) {
    require_same_shape(z0, eps, "forward_diffuse");
    const double ab = s.alpha_bar(t);
    return axpby(std::sqrt(ab), z0, std::sqrt(1.0 - ab), eps);
}

LatentVideo project_clean(const LatentVideo& z_t, const LatentVideo& eps_pred, int t, const NoiseSchedule& s) {
    require_same_shape(z_t, eps_pred, "project_clean");
    const double ab = s.alpha_bar(t);
    require(ab >= kAlphaBarFloor, ErrorCode::degenerate_alpha,
            "alpha_bar(" + std::to_string(t) + ") below floor");
    const double inv = 1.0 / std::sqrt(ab);
    return axpby(inv, z_t, -std::sqrt(1.0 - ab) * inv, eps_pred);
}

double snr(const NoiseSchedule& s, int t) {
    require(t >= 1 && t <= s.total_steps(), ErrorCode::timestep_out_of_range,
            "snr needs 1 <= t <= T, got " + std::to_string(t));
    const double ab = s.alpha_bar(t);
    return ab / (1.0 - ab);
}

int snr_matched_timestep(const NoiseSchedule& from, const NoiseSchedule& to, int t) {
    const double target = std::log(snr(from, t));
    int best = 1;
    double best_gap = std::numeric_limits<double>::infinity();
    for (int u = 1; u <= to.total_steps(); ++u) {
        const double gap = std::abs(std::log(snr(to, u)) - target);
        if (gap < best_gap) {
            best_gap = gap;
            best = u;
        }
    }
    return best;
}

bool TimestepGrid::is_refine_step(int t) const {
    return std::find(refine_set.begin(), refine_set.end(), t) != refine_set.end();
}

int TimestepGrid::position(int t) const {
    const auto it = std::find(steps.begin(), steps.end(), t);
    return it == steps.end() ? -1 : static_cast<int>(it - steps.begin());
}

TimestepGrid select_timesteps(const NoiseSchedule& s, int k) {
    const int total = s.total_steps();
    require(k >= 1 && k <= total, ErrorCode::k_out_of_range,
            "K=" + std::to_string(k) + " outside [1, " + std::to_string(total) + "]");
    TimestepGrid grid;
    grid.steps.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        grid.steps.push_back(total - static_cast<int>((static_cast<long long>(i) * total) / k));
    }
    return grid;
}

TimestepGrid select_refine_steps(const TimestepGrid& grid, int k) {
    const int n = static_cast<int>(grid.steps.size());
    require(k >= 0 && k <= n, ErrorCode::k_out_of_range,
            "refine count " + std::to_string(k) + " outside [0, " + std::to_string(n) + "]");
    TimestepGrid out = grid;
    out.refine_set.clear();
    if (k == 0) {
        return out;
    }
    const int span = std::max(k, (n + 1) / 2);
    for (int i = 0; i < k; ++i) {
        const int pos = (k == 1) ? 0 : (i * (span - 1)) / (k - 1);
        out.refine_set.push_back(grid.steps[static_cast<std::size_t>(pos)]);
    }
    return out;
}

}  // namespace elevator
