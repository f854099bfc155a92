// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "elevator/latent.hpp"
#include "elevator/schedule.hpp"
#include "elevator/spectral.hpp"

namespace elevator {

/// Toy text condition: an optional mean offset plus a guidance weight.
/// No shift means the null condition.
struct Condition {
    std::optional<LatentVideo> shift;
    double guidance_scale = 1.0;

    static Condition null() { return {}; }
    bool is_null() const { return !shift.has_value(); }
};

/// Epsilon-prediction model. Implementations are immutable and must tolerate
/// concurrent predict_eps calls.
class Denoiser {
public:
    virtual ~Denoiser() = default;

    virtual Shape shape() const = 0;
    virtual LatentVideo predict_eps(const LatentVideo& z, int t, const Condition& cond,
                                    const NoiseSchedule& s) const = 0;
};

/// Zero-mean-offset Gaussian over F x C x H x W latents with separable
/// covariance variance_scale * (AR(1) over frames) (x) I_C (x) (stationary
/// spatial field with the given per-bin DFT spectrum).
struct GaussianPrior {
    Shape shape;
    LatentVideo mean;
    double temporal_rho = 0.0;
    std::vector<double> spatial_spectrum;  // H*W, row-major DFT bins
    double variance_scale = 1.0;

    // Throws invalid_prior.
    void validate() const;
};

// rho^|i-j| for i, j < frames.
Eigen::MatrixXd ar1_correlation(std::size_t frames, double rho);

/// Exact Bayes-optimal epsilon predictor for a GaussianPrior.
///
/// The covariance is diagonal in (temporal AR(1) eigenvectors) x (2-D DFT
/// modes); per mode with prior variance mu and v = ab*mu + 1 - ab,
///   E[z0|z_t] = m + sqrt(ab) * (mu / v) * (z_t - sqrt(ab) m)
///   eps_hat   = sqrt(1 - ab) / v * (z_t - sqrt(ab) m).
class AnalyticDenoiser final : public Denoiser {
public:
    explicit AnalyticDenoiser(GaussianPrior prior);

    const GaussianPrior& prior() const { return prior_; }
    Shape shape() const override { return prior_.shape; }

    LatentVideo predict_eps(const LatentVideo& z, int t, const Condition& cond,
                            const NoiseSchedule& s) const override;
    LatentVideo posterior_mean(const LatentVideo& z, int t, const Condition& cond, const NoiseSchedule& s) const;

    const Eigen::VectorXd& temporal_eigenvalues() const { return temporal_eigenvalues_; }

private:
    template <typename Gain>
    LatentVideo apply_modal(const LatentVideo& x, Gain&& gain) const;
    LatentVideo centered(const LatentVideo& z, double sqrt_ab, const Condition& cond) const;

    GaussianPrior prior_;
    Eigen::MatrixXd temporal_basis_;  // columns are eigenvectors
    Eigen::VectorXd temporal_eigenvalues_;
    FftPlan spatial_fft_;
};

LatentVideo analytic_eps(const GaussianPrior& prior, const LatentVideo& z_t, int t, const Condition& cond,
                         const NoiseSchedule& s);

// eps(null) + w * (eps(cond) - eps(null)); w = cond.guidance_scale.
LatentVideo cfg_eps(const Denoiser& model, const LatentVideo& z_t, int t, const Condition& cond,
                    const NoiseSchedule& s);

std::shared_ptr<AnalyticDenoiser> make_t2v_toy(Shape shape, double rho, std::vector<double> spectrum);
std::shared_ptr<AnalyticDenoiser> make_t2i_toy(Shape shape, std::vector<double> spectrum);

}  // namespace elevator
