// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#include "elevator/metrics.hpp"

#include <cmath>
#include <numeric>

#include "elevator/error.hpp"
#include "elevator/spectral.hpp"

namespace elevator {

double frame_consistency(const LatentVideo& v) {
    const std::size_t frames = v.shape().frames;
    require(frames >= 2, ErrorCode::too_few_frames, "frame consistency needs at least two frames");
    std::vector<double> norms(frames);
    for (std::size_t f = 0; f < frames; ++f) {
        const auto fr = v.frame(f);
        norms[f] = std::sqrt(std::inner_product(fr.begin(), fr.end(), fr.begin(), 0.0));
        require(norms[f] > 0.0, ErrorCode::zero_frame, "frame " + std::to_string(f) + " has zero norm");
    }
    double acc = 0.0;
    for (std::size_t f = 0; f + 1 < frames; ++f) {
        const auto a = v.frame(f);
        const auto b = v.frame(f + 1);
        acc += std::inner_product(a.begin(), a.end(), b.begin(), 0.0) / (norms[f] * norms[f + 1]);
    }
    return acc / static_cast<double>(frames - 1);
}

double flicker_energy(const LatentVideo& v, double cutoff) {
    const Shape& sh = v.shape();
    require(sh.frames >= 2, ErrorCode::too_few_frames, "flicker energy needs at least two frames");
    const FftPlan fft = FftPlan::one_d(sh.frames);
    std::vector<Complex> series(sh.frames);
    const std::size_t stride = sh.frame_size();
    double acc = 0.0;
    std::size_t counted = 0;
    for (std::size_t p = 0; p < stride; ++p) {
        for (std::size_t f = 0; f < sh.frames; ++f) series[f] = v[f * stride + p];
        fft.forward(series);
        double total = 0.0;
        double high = 0.0;
        for (std::size_t k = 0; k < sh.frames; ++k) {
            const double e = std::norm(series[k]);
            total += e;
            if (std::abs(normalized_frequency(k, sh.frames)) > cutoff) high += e;
        }
        if (total > 0.0) {
            acc += high / total;
            ++counted;
        }
    }
    require(counted > 0, ErrorCode::degenerate_input, "flicker energy of an all-zero video");
    return acc / static_cast<double>(counted);
}

namespace {

// Energy per spatial bin, summed over channels, for one frame.
std::vector<double> frame_energy(const LatentVideo& v, std::size_t f, const FftPlan& fft) {
    const Shape& sh = v.shape();
    std::vector<double> energy(sh.plane_size(), 0.0);
    std::vector<Complex> plane(sh.plane_size());
    for (std::size_t c = 0; c < sh.channels; ++c) {
        const double* px = v.frame(f).data() + c * sh.plane_size();
        for (std::size_t p = 0; p < plane.size(); ++p) plane[p] = px[p];
        fft.forward(plane);
        for (std::size_t p = 0; p < plane.size(); ++p) energy[p] += std::norm(plane[p]);
    }
    return energy;
}

}  // namespace

double spatial_detail(const LatentVideo& v, double band) {
    const Shape& sh = v.shape();
    require(sh.height >= 2 && sh.width >= 2, ErrorCode::degenerate_input, "spatial detail needs H, W >= 2");
    const FftPlan fft = FftPlan::two_d(sh.height, sh.width);
    double acc = 0.0;
    std::size_t counted = 0;
    for (std::size_t f = 0; f < sh.frames; ++f) {
        const auto energy = frame_energy(v, f, fft);
        double total = 0.0;
        double high = 0.0;
        for (std::size_t kh = 0; kh < sh.height; ++kh) {
            for (std::size_t kw = 0; kw < sh.width; ++kw) {
                const double e = energy[kh * sh.width + kw];
                total += e;
                if (radial_frequency(kh, kw, sh.height, sh.width) > band) high += e;
            }
        }
        if (total > 0.0) {
            acc += high / total;
            ++counted;
        }
    }
    require(counted > 0, ErrorCode::degenerate_input, "spatial detail of an all-zero video");
    return acc / static_cast<double>(counted);
}

std::vector<double> mean_spatial_energy(const LatentVideo& v) {
    const Shape& sh = v.shape();
    const FftPlan fft = FftPlan::two_d(sh.height, sh.width);
    std::vector<double> acc(sh.plane_size(), 0.0);
    for (std::size_t f = 0; f < sh.frames; ++f) {
        const auto energy = frame_energy(v, f, fft);
        for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += energy[p];
    }
    const double denom = static_cast<double>(sh.frames * sh.channels);
    for (double& e : acc) e /= denom;
    return acc;
}

double spectrum_distance(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), ErrorCode::shape_mismatch, "spectra differ in length");
    const double sa = std::accumulate(a.begin(), a.end(), 0.0);
    const double sb = std::accumulate(b.begin(), b.end(), 0.0);
    require(sa > 0.0 && sb > 0.0, ErrorCode::degenerate_input, "spectrum with zero total energy");
    double dist = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dist += std::abs(a[i] / sa - b[i] / sb);
    }
    return dist;
}

double spectrum_distance(const LatentVideo& v, const GaussianPrior& prior) {
    require(v.shape().height == prior.shape.height && v.shape().width == prior.shape.width,
            ErrorCode::shape_mismatch, "video and prior spatial sizes differ");
    const auto energy = mean_spatial_energy(v);
    return spectrum_distance(energy, prior.spatial_spectrum);
}

MetricReport evaluate(const LatentVideo& v, const GaussianPrior& t2i_prior, const GaussianPrior& t2v_prior) {
    MetricReport r;
    r.frame_consistency = frame_consistency(v);
    r.flicker_energy = flicker_energy(v);
    r.spatial_detail = spatial_detail(v);
    r.spectrum_distance_t2i = spectrum_distance(v, t2i_prior);
    r.spectrum_distance_t2v = spectrum_distance(v, t2v_prior);
    return r;
}

}  // namespace elevator
