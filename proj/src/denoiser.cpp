// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#include "elevator/denoiser.hpp"

#include <cmath>

#include "elevator/error.hpp"

namespace elevator {

void GaussianPrior::validate() const {
    require(shape.numel() > 0, ErrorCode::invalid_prior, "empty prior shape");
    require(mean.shape() == shape, ErrorCode::invalid_prior, "mean shape differs from prior shape");
    require(std::abs(temporal_rho) < 1.0, ErrorCode::invalid_prior, "|temporal_rho| must be < 1");
    require(spatial_spectrum.size() == shape.plane_size(), ErrorCode::invalid_prior,
            "spatial spectrum must have H*W entries");
    for (double v : spatial_spectrum) {
        require(std::isfinite(v) && v > 0.0, ErrorCode::invalid_prior, "spectrum entries must be positive");
    }
    for (std::size_t kh = 0; kh < shape.height; ++kh) {
        for (std::size_t kw = 0; kw < shape.width; ++kw) {
            const std::size_t mh = (shape.height - kh) % shape.height;
            const std::size_t mw = (shape.width - kw) % shape.width;
            require(spatial_spectrum[kh * shape.width + kw] == spatial_spectrum[mh * shape.width + mw],
                    ErrorCode::invalid_prior, "spectrum must be symmetric under k -> -k");
        }
    }
    require(std::isfinite(variance_scale) && variance_scale >= 0.0, ErrorCode::invalid_prior,
            "variance_scale must be >= 0");
    require(mean.all_finite(), ErrorCode::invalid_prior, "mean must be finite");
}

Eigen::MatrixXd ar1_correlation(std::size_t frames, double rho) {
    const auto n = static_cast<Eigen::Index>(frames);
    Eigen::MatrixXd r(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            r(i, j) = std::pow(rho, static_cast<double>(std::abs(i - j)));
        }
    }
    return r;
}

AnalyticDenoiser::AnalyticDenoiser(GaussianPrior prior)
    : prior_(std::move(prior)),
      spatial_fft_(FftPlan::two_d(prior_.shape.height == 0 ? 1 : prior_.shape.height,
                                  prior_.shape.width == 0 ? 1 : prior_.shape.width)) {
    prior_.validate();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ar1_correlation(prior_.shape.frames, prior_.temporal_rho));
    temporal_basis_ = eig.eigenvectors();
    temporal_eigenvalues_ = eig.eigenvalues();
}

template <typename Gain>
LatentVideo AnalyticDenoiser::apply_modal(const LatentVideo& x, Gain&& gain) const {
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Shape& sh = prior_.shape;
    const auto frames = static_cast<Eigen::Index>(sh.frames);
    const auto width = static_cast<Eigen::Index>(sh.frame_size());

    Eigen::Map<const RowMajor> in(x.data().data(), frames, width);
    RowMajor modal = temporal_basis_.transpose() * in;

    std::vector<Complex> buf(sh.plane_size());
    for (std::size_t j = 0; j < sh.frames; ++j) {
        const double lambda = temporal_eigenvalues_(static_cast<Eigen::Index>(j));
        for (std::size_t c = 0; c < sh.channels; ++c) {
            double* plane = modal.data() + j * sh.frame_size() + c * sh.plane_size();
            for (std::size_t p = 0; p < buf.size(); ++p) buf[p] = plane[p];
            spatial_fft_.forward(buf);
            for (std::size_t p = 0; p < buf.size(); ++p) {
                buf[p] *= gain(prior_.variance_scale * lambda * prior_.spatial_spectrum[p]);
            }
            spatial_fft_.inverse(buf);
            for (std::size_t p = 0; p < buf.size(); ++p) plane[p] = buf[p].real();
        }
    }

    LatentVideo out(sh);
    Eigen::Map<RowMajor> result(out.data().data(), frames, width);
    result.noalias() = temporal_basis_ * modal;
    return out;
}

LatentVideo AnalyticDenoiser::centered(const LatentVideo& z, double sqrt_ab, const Condition& cond) const {
    require(z.shape() == prior_.shape, ErrorCode::shape_mismatch, "latent shape differs from prior shape");
    if (cond.shift) {
        require(cond.shift->shape() == prior_.shape, ErrorCode::shape_mismatch, "condition shift shape");
    }
    LatentVideo r(z.shape());
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double m = prior_.mean[i] + (cond.shift ? (*cond.shift)[i] : 0.0);
        r[i] = z[i] - sqrt_ab * m;
    }
    return r;
}

LatentVideo AnalyticDenoiser::predict_eps(const LatentVideo& z, int t, const Condition& cond,
                                          const NoiseSchedule& s) const {
    require(t >= 1 && t <= s.total_steps(), ErrorCode::timestep_out_of_range,
            "denoiser timestep " + std::to_string(t) + " outside [1, T]");
    const double ab = s.alpha_bar(t);
    const LatentVideo r = centered(z, std::sqrt(ab), cond);
    const double noise_sd = std::sqrt(1.0 - ab);
    return apply_modal(r, [&](double mu) { return noise_sd / (ab * mu + 1.0 - ab); });
}

LatentVideo AnalyticDenoiser::posterior_mean(const LatentVideo& z, int t, const Condition& cond,
                                             const NoiseSchedule& s) const {
    require(t >= 1 && t <= s.total_steps(), ErrorCode::timestep_out_of_range,
            "denoiser timestep " + std::to_string(t) + " outside [1, T]");
    const double ab = s.alpha_bar(t);
    const double sqrt_ab = std::sqrt(ab);
    const LatentVideo r = centered(z, sqrt_ab, cond);
    LatentVideo out = apply_modal(r, [&](double mu) { return sqrt_ab * mu / (ab * mu + 1.0 - ab); });
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] += prior_.mean[i] + (cond.shift ? (*cond.shift)[i] : 0.0);
    }
    return out;
}

LatentVideo analytic_eps(const GaussianPrior& prior, const LatentVideo& z_t, int t, const Condition& cond,
                         const NoiseSchedule& s) {
    return AnalyticDenoiser(prior).predict_eps(z_t, t, cond, s);
}

LatentVideo cfg_eps(const Denoiser& model, const LatentVideo& z_t, int t, const Condition& cond,
                    const NoiseSchedule& s) {
    const double w = cond.guidance_scale;
    require(std::isfinite(w) && w >= 0.0, ErrorCode::invalid_params, "guidance scale must be >= 0");
    if (cond.is_null()) {
        return model.predict_eps(z_t, t, cond, s);
    }
    if (w == 1.0) {
        return model.predict_eps(z_t, t, cond, s);
    }
    LatentVideo uncond = model.predict_eps(z_t, t, Condition::null(), s);
    if (w == 0.0) {
        return uncond;
    }
    const LatentVideo cond_eps = model.predict_eps(z_t, t, cond, s);
    for (std::size_t i = 0; i < uncond.size(); ++i) {
        uncond[i] += w * (cond_eps[i] - uncond[i]);
    }
    return uncond;
}

std::shared_ptr<AnalyticDenoiser> make_t2v_toy(Shape shape, double rho, std::vector<double> spectrum) {
    GaussianPrior prior{shape, LatentVideo(shape), rho, std::move(spectrum), 1.0};
    return std::make_shared<AnalyticDenoiser>(std::move(prior));
}

std::shared_ptr<AnalyticDenoiser> make_t2i_toy(Shape shape, std::vector<double> spectrum) {
    return make_t2v_toy(shape, 0.0, std::move(spectrum));
}

}  // namespace elevator
