// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#include "elevator/synth.hpp"

#include <cmath>
#include <numeric>

#include "elevator/error.hpp"
#include "elevator/spectral.hpp"

namespace elevator {

std::string_view to_string(SpectrumKind kind) {
    switch (kind) {
    case SpectrumKind::lowpass: return "lowpass";
    case SpectrumKind::broadband: return "broadband";
    case SpectrumKind::flat: return "flat";
    }
    return "unknown";
}

SpectrumKind spectrum_kind_from_string(std::string_view name) {
    if (name == "lowpass") return SpectrumKind::lowpass;
    if (name == "broadband") return SpectrumKind::broadband;
    if (name == "flat") return SpectrumKind::flat;
    throw Error(ErrorCode::invalid_params, "unknown spectrum kind '" + std::string(name) + "'");
}

std::vector<double> make_spectrum(SpectrumKind kind, std::size_t height, std::size_t width) {
    require(height >= 1 && width >= 1, ErrorCode::invalid_params, "spectrum needs H, W >= 1");
    std::vector<double> spec(height * width, 1.0);
    if (kind != SpectrumKind::flat) {
        const double knee = kind == SpectrumKind::lowpass ? 0.1 : 0.35;
        for (std::size_t kh = 0; kh < height; ++kh) {
            for (std::size_t kw = 0; kw < width; ++kw) {
                const double ratio = radial_frequency(kh, kw, height, width) / knee;
                spec[kh * width + kw] = 1.0 / (1.0 + std::pow(ratio, 4));
            }
        }
    }
    const double avg = std::accumulate(spec.begin(), spec.end(), 0.0) / static_cast<double>(spec.size());
    for (double& v : spec) v /= avg;
    return spec;
}

GaussianPrior make_gp_prior(Shape shape, double rho, SpectrumKind kind, double variance_scale) {
    require(shape.numel() > 0, ErrorCode::invalid_params, "prior shape must be non-empty");
    require(rho >= 0.0 && rho < 1.0, ErrorCode::invalid_params, "rho must lie in [0, 1)");
    require(std::isfinite(variance_scale) && variance_scale >= 0.0, ErrorCode::invalid_params,
            "variance_scale must be >= 0");
    GaussianPrior prior{shape, LatentVideo(shape), rho, make_spectrum(kind, shape.height, shape.width),
                        variance_scale};
    prior.validate();
    return prior;
}

GaussianPrior default_t2v_prior(Shape shape) { return make_gp_prior(shape, 0.9, SpectrumKind::lowpass, 1.0); }

GaussianPrior default_t2i_prior(Shape shape) { return make_gp_prior(shape, 0.0, SpectrumKind::broadband, 1.0); }

LatentVideo sample_prior(const GaussianPrior& prior, RandomStream& rng) {
    prior.validate();
    const Shape& sh = prior.shape;
    LatentVideo x = rng.normal_like(sh);

    const FftPlan fft = FftPlan::two_d(sh.height, sh.width);
    std::vector<Complex> buf(sh.plane_size());
    for (std::size_t f = 0; f < sh.frames; ++f) {
        for (std::size_t c = 0; c < sh.channels; ++c) {
            double* plane = x.frame(f).data() + c * sh.plane_size();
            for (std::size_t p = 0; p < buf.size(); ++p) buf[p] = plane[p];
            fft.forward(buf);
            for (std::size_t p = 0; p < buf.size(); ++p) buf[p] *= std::sqrt(prior.spatial_spectrum[p]);
            fft.inverse(buf);
            for (std::size_t p = 0; p < buf.size(); ++p) plane[p] = buf[p].real();
        }
    }

    const double rho = prior.temporal_rho;
    const double innovation = std::sqrt(1.0 - rho * rho);
    for (std::size_t f = 1; f < sh.frames; ++f) {
        auto prev = x.frame(f - 1);
        auto cur = x.frame(f);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            cur[i] = rho * prev[i] + innovation * cur[i];
        }
    }

    const double scale = std::sqrt(prior.variance_scale);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = prior.mean[i] + scale * x[i];
    }
    return x;
}

}  // namespace elevator
