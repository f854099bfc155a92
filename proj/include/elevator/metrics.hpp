// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "elevator/denoiser.hpp"
#include "elevator/latent.hpp"

namespace elevator {

// Latent-space analogs of frame consistency, flicker, frame detail and
// domain similarity. Nothing here attempts prompt or aesthetic scores.
struct MetricReport {
    double frame_consistency = 0.0;
    double flicker_energy = 0.0;
    double spatial_detail = 0.0;
    double spectrum_distance_t2i = 0.0;
    double spectrum_distance_t2v = 0.0;
};

inline constexpr double kDefaultFlickerCutoff = 0.25;
inline constexpr double kDefaultDetailBand = 0.25;

// Mean cosine similarity of flattened adjacent frames.
double frame_consistency(const LatentVideo& v);

// Fraction of temporal-DFT energy in bins with |f| > cutoff, averaged over
// (channel, pixel) series that carry energy.
double flicker_energy(const LatentVideo& v, double cutoff = kDefaultFlickerCutoff);

// Fraction of per-frame spatial-DFT energy at radial frequency > band,
// averaged over frames that carry energy.
double spatial_detail(const LatentVideo& v, double band = kDefaultDetailBand);

// Per-bin spatial DFT energy averaged over frames and channels.
std::vector<double> mean_spatial_energy(const LatentVideo& v);

// L1 distance between two spectra after normalizing each to unit sum.
double spectrum_distance(std::span<const double> a, std::span<const double> b);
double spectrum_distance(const LatentVideo& v, const GaussianPrior& prior);

MetricReport evaluate(const LatentVideo& v, const GaussianPrior& t2i_prior, const GaussianPrior& t2v_prior);

}  // namespace elevator
