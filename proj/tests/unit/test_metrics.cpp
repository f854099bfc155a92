// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "elevator/error.hpp"
#include "elevator/metrics.hpp"
#include "elevator/synth.hpp"
#include "oracles.hpp"

using namespace elevator;

namespace {

LatentVideo repeat_frame(const LatentVideo& frame, std::size_t frames) {
    Shape sh = frame.shape();
    sh.frames = frames;
    LatentVideo v(sh);
    for (std::size_t f = 0; f < frames; ++f) std::copy(frame.data().begin(), frame.data().end(), v.frame(f).begin());
    return v;
}

}  // namespace

TEST_CASE("frame consistency") {
    const auto f0 = oracle::random_video(Shape{1, 2, 3, 3}, 1);
    CHECK(frame_consistency(repeat_frame(f0, 4)) == doctest::Approx(1.0));
    LatentVideo alt = repeat_frame(f0, 4);
    for (double& x : alt.frame(1)) x = -x;
    for (double& x : alt.frame(3)) x = -x;
    CHECK(frame_consistency(alt) == doctest::Approx(-1.0));

    // Hand-built three frames of width 2.
    LatentVideo v(Shape{3, 1, 1, 2}, std::vector<double>{1, 0, 1, 1, 0, 2});
    const double want = 0.5 * (1.0 / std::sqrt(2.0) + 2.0 / (std::sqrt(2.0) * 2.0));
    CHECK(frame_consistency(v) == doctest::Approx(want).epsilon(1e-9));

    const auto r = oracle::random_video(Shape{5, 2, 4, 4}, 2);
    LatentVideo rescaled = r;
    for (std::size_t f = 0; f < 5; ++f)
        for (double& x : rescaled.frame(f)) x *= 0.5 + f;
    CHECK(frame_consistency(rescaled) == doctest::Approx(frame_consistency(r)).epsilon(1e-12));

    CHECK_THROWS_AS(frame_consistency(LatentVideo(Shape{1, 1, 2, 2}, 1.0)), Error);
    LatentVideo zero_frame = r;
    for (double& x : zero_frame.frame(2)) x = 0;
    CHECK_THROWS_AS(frame_consistency(zero_frame), Error);
}

TEST_CASE("flicker energy") {
    const auto f0 = oracle::random_video(Shape{1, 2, 3, 3}, 3);
    CHECK(flicker_energy(repeat_frame(f0, 8)) == doctest::Approx(0.0).epsilon(1e-12));
    LatentVideo alt = repeat_frame(f0, 8);
    for (std::size_t f = 1; f < 8; f += 2)
        for (double& x : alt.frame(f)) x = -x;
    CHECK(flicker_energy(alt, 0.25) == doctest::Approx(1.0));
    CHECK(flicker_energy(alt, 0.49) == doctest::Approx(1.0));

    // White in time: expected fraction = share of bins with |f| > cutoff.
    const std::size_t F = 16;
    double bins = 0;
    for (std::size_t k = 0; k < F; ++k) bins += std::abs(oracle::signed_freq(k, F)) > 0.25;
    std::vector<double> got;
    for (std::uint64_t seed = 0; seed < 100; ++seed) got.push_back(flicker_energy(oracle::random_video(Shape{F, 1, 4, 4}, seed)));
    double m = 0;
    for (double g : got) m += g;
    CHECK(m / got.size() == doctest::Approx(bins / F).epsilon(0.1));
    CHECK_THROWS_AS(flicker_energy(LatentVideo(Shape{4, 1, 2, 2})), Error);
}

TEST_CASE("spatial detail") {
    CHECK(spatial_detail(LatentVideo(Shape{2, 1, 4, 4}, 3.0)) == doctest::Approx(0.0).epsilon(1e-12));
    LatentVideo checker(Shape{2, 1, 4, 4});
    for (std::size_t f = 0; f < 2; ++f)
        for (std::size_t h = 0; h < 4; ++h)
            for (std::size_t w = 0; w < 4; ++w) checker.at(f, 0, h, w) = ((h + w) % 2) ? 1.0 : -1.0;
    CHECK(spatial_detail(checker, 0.4) == doctest::Approx(1.0));
    CHECK_THROWS_AS(spatial_detail(LatentVideo(Shape{2, 1, 4, 4})), Error);

    const Shape sh{4, 2, 16, 16};
    RandomStream rng(1);
    std::vector<double> lo, hi;
    for (int i = 0; i < 100; ++i) {
        lo.push_back(spatial_detail(sample_prior(make_gp_prior(sh, 0.0, SpectrumKind::lowpass, 1.0), rng)));
        hi.push_back(spatial_detail(sample_prior(make_gp_prior(sh, 0.0, SpectrumKind::broadband, 1.0), rng)));
    }
    CHECK(oracle::median(lo) < oracle::median(hi));
}

TEST_CASE("spectrum distance") {
    const std::vector<double> a{1, 2, 3, 4};
    CHECK(spectrum_distance(a, a) == 0.0);
    const std::vector<double> b{2, 4, 6, 8};
    CHECK(spectrum_distance(a, b) == doctest::Approx(0.0));
    const std::vector<double> c{4, 3, 2, 1};
    CHECK(spectrum_distance(a, c) == doctest::Approx((3 + 1 + 1 + 3) / 10.0));

    const Shape sh{4, 2, 16, 16};
    const auto pi = default_t2i_prior(sh), pv = default_t2v_prior(sh);
    RandomStream rng(2);
    std::vector<double> own, other;
    for (int i = 0; i < 100; ++i) {
        const auto x = sample_prior(pi, rng);
        own.push_back(spectrum_distance(x, pi));
        other.push_back(spectrum_distance(x, pv));
    }
    // Each periodogram bin averages F*C complex coefficients, so its ratio to
    // the prior is Gamma(a, 1/a) with a = F*C = 8, whose mean absolute deviation
    // from 1 is 2 a^(a-1) e^-a / (a-1)!.
    const double dof = 8.0;
    const double mad = 2.0 * std::pow(dof, dof - 1) * std::exp(-dof) / std::tgamma(dof);
    CHECK(oracle::median(own) == doctest::Approx(mad).epsilon(0.1));
    CHECK(oracle::median(other) > oracle::median(own));
    CHECK_THROWS_AS(spectrum_distance(LatentVideo(Shape{4, 2, 8, 8}, 1.0), pi), Error);
    CHECK_THROWS_AS(spectrum_distance(std::vector<double>{1, 2}, a), Error);
}

TEST_CASE("evaluate bundles the metrics") {
    const Shape sh{4, 2, 8, 8};
    const auto pi = default_t2i_prior(sh), pv = default_t2v_prior(sh);
    const auto x = oracle::random_video(sh, 4);
    const auto r = evaluate(x, pi, pv);
    CHECK(r.frame_consistency == frame_consistency(x));
    CHECK(r.flicker_energy == flicker_energy(x));
    CHECK(r.spatial_detail == spatial_detail(x));
    CHECK(r.spectrum_distance_t2i == spectrum_distance(x, pi));
    CHECK(r.spectrum_distance_t2v == spectrum_distance(x, pv));
    CHECK(evaluate(x, pi, pv).frame_consistency == r.frame_consistency);
}
