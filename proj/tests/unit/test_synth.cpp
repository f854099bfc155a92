// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "elevator/metrics.hpp"
#include "elevator/spectral.hpp"
#include "elevator/synth.hpp"
#include "oracles.hpp"

using namespace elevator;

namespace {

double high_band_fraction(const std::vector<double>& spec, std::size_t h, std::size_t w) {
    double hi = 0, all = 0;
    for (std::size_t a = 0; a < h; ++a)
        for (std::size_t b = 0; b < w; ++b) {
            all += spec[a * w + b];
            if (std::hypot(oracle::signed_freq(a, h), oracle::signed_freq(b, w)) > 0.25) hi += spec[a * w + b];
        }
    return hi / all;
}

double frame_correlation(const LatentVideo& v, std::size_t f, std::size_t g) {
    double xy = 0, xx = 0, yy = 0;
    auto a = v.frame(f), b = v.frame(g);
    for (std::size_t i = 0; i < a.size(); ++i) {
        xy += a[i] * b[i];
        xx += a[i] * a[i];
        yy += b[i] * b[i];
    }
    return xy / std::sqrt(xx * yy);
}

}  // namespace

TEST_CASE("spectrum kinds") {
    const auto lp = make_spectrum(SpectrumKind::lowpass, 16, 16);
    const auto bb = make_spectrum(SpectrumKind::broadband, 16, 16);
    const auto fl = make_spectrum(SpectrumKind::flat, 16, 16);
    double m = 0;
    for (double x : lp) m += x;
    CHECK(m / 256.0 == doctest::Approx(1.0));
    CHECK(high_band_fraction(bb, 16, 16) > high_band_fraction(lp, 16, 16));
    for (double x : fl) CHECK(x == doctest::Approx(1.0));
    // Shape of the lowpass law, independent of normalization.
    const double f1 = 0.0625, f2 = 0.125;
    const double ratio = (1.0 / (1.0 + std::pow(f2 / 0.1, 4))) / (1.0 / (1.0 + std::pow(f1 / 0.1, 4)));
    CHECK(lp[2] / lp[1] == doctest::Approx(ratio).epsilon(1e-12));
    CHECK(spectrum_kind_from_string("broadband") == SpectrumKind::broadband);
}

TEST_CASE("flat prior pixel variance equals the variance scale") {
    const Shape sh{2, 2, 8, 8};
    const auto p = make_gp_prior(sh, 0.0, SpectrumKind::flat, 2.5);
    RandomStream rng(5);
    double acc = 0;
    std::size_t n = 0;
    for (int i = 0; i < 500; ++i) {
        const auto v = sample_prior(p, rng);
        for (double x : v.data()) acc += x * x;
        n += v.size();
    }
    CHECK(acc / n == doctest::Approx(2.5).epsilon(0.05));
}

TEST_CASE("AR(1) frame correlation") {
    for (double rho : {0.9, 0.99}) {
        const Shape sh{2, 1, 8, 8};
        const auto p = make_gp_prior(sh, rho, SpectrumKind::broadband, 1.0);
        RandomStream rng(7);
        double xy = 0, xx = 0, yy = 0;
        for (int i = 0; i < 1000; ++i) {
            const auto v = sample_prior(p, rng);
            auto a = v.frame(0), b = v.frame(1);
            for (std::size_t k = 0; k < a.size(); ++k) {
                xy += a[k] * b[k];
                xx += a[k] * a[k];
                yy += b[k] * b[k];
            }
        }
        const double r = xy / std::sqrt(xx * yy);
        if (rho == 0.99) {
            CHECK(r >= 0.97);
            CHECK(r <= 1.0);
        } else {
            CHECK(r == doctest::Approx(0.9).epsilon(0.02));
        }
    }
    RandomStream rng(1);
    const auto indep = sample_prior(make_gp_prior(Shape{2, 4, 16, 16}, 0.0, SpectrumKind::flat, 1.0), rng);
    CHECK(std::abs(frame_correlation(indep, 0, 1)) < 0.1);
}

TEST_CASE("empirical covariance matches the dense oracle") {
    const Shape sh{2, 1, 2, 2};
    const auto p = make_gp_prior(sh, 0.6, SpectrumKind::lowpass, 1.0);
    const auto cov = oracle::prior_covariance(sh, 0.6, p.spatial_spectrum, 1.0);
    Eigen::MatrixXd emp = Eigen::MatrixXd::Zero(8, 8);
    RandomStream rng(8);
    const int n = 5000;
    for (int i = 0; i < n; ++i) {
        const auto x = oracle::as_vector(sample_prior(p, rng));
        emp += x * x.transpose();
    }
    emp /= n;
    CHECK((emp - cov).norm() / cov.norm() < 0.1);
}

TEST_CASE("per-bin energy follows the spectrum") {
    const Shape sh{1, 1, 8, 8};
    const auto p = make_gp_prior(sh, 0.0, SpectrumKind::broadband, 1.0);
    RandomStream rng(9);
    std::vector<double> energy(64, 0.0);
    for (int i = 0; i < 1000; ++i) {
        const auto e = mean_spatial_energy(sample_prior(p, rng));
        for (std::size_t k = 0; k < 64; ++k) energy[k] += e[k];
    }
    double tot = 0, spec_tot = 0;
    for (std::size_t k = 0; k < 64; ++k) {
        tot += energy[k];
        spec_tot += p.spatial_spectrum[k];
    }
    for (std::size_t k = 0; k < 64; ++k)
        CHECK(energy[k] / tot == doctest::Approx(p.spatial_spectrum[k] / spec_tot).epsilon(0.1));
}

TEST_CASE("sampling edge cases") {
    const Shape sh{3, 2, 4, 4};
    auto p = make_gp_prior(sh, 0.5, SpectrumKind::lowpass, 0.0);
    p.mean = oracle::random_video(sh, 4);
    RandomStream rng(1);
    CHECK(sample_prior(p, rng) == p.mean);
    const auto q = default_t2v_prior(sh);
    RandomStream a(42), b(42);
    CHECK(sample_prior(q, a) == sample_prior(q, b));
    // A single-frame prior is just the image prior.
    const auto img = make_gp_prior(Shape{1, 2, 4, 4}, 0.9, SpectrumKind::broadband, 1.0);
    const auto img0 = make_gp_prior(Shape{1, 2, 4, 4}, 0.0, SpectrumKind::broadband, 1.0);
    RandomStream c(3), d(3);
    CHECK(max_abs_diff(sample_prior(img, c), sample_prior(img0, d)) < 1e-12);
    CHECK_THROWS(make_gp_prior(sh, 1.0, SpectrumKind::flat, 1.0));
    CHECK_THROWS(make_gp_prior(sh, -0.1, SpectrumKind::flat, 1.0));
}

TEST_CASE("T2I prior samples carry more high-band energy than T2V samples") {
    const Shape sh{4, 2, 16, 16};
    RandomStream rng(12);
    std::vector<double> v_hi, i_hi;
    const auto pv = default_t2v_prior(sh), pi = default_t2i_prior(sh);
    for (int i = 0; i < 200; ++i) {
        v_hi.push_back(spatial_detail(sample_prior(pv, rng)));
        i_hi.push_back(spatial_detail(sample_prior(pi, rng)));
    }
    CHECK(oracle::median(i_hi) > oracle::median(v_hi));
}
