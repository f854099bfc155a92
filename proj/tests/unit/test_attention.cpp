// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "doctest.h"
#include "elevator/attention.hpp"
#include "elevator/error.hpp"
#include "elevator/synth.hpp"
#include "oracles.hpp"

using namespace elevator;

namespace {

Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> n;
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = n(gen);
    return m;
}

double mean_adjacent_distance(const LatentVideo& v) {
    double acc = 0;
    for (std::size_t f = 0; f + 1 < v.shape().frames; ++f) {
        auto a = v.frame(f), b = v.frame(f + 1);
        double d = 0;
        for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
        acc += std::sqrt(d);
    }
    return acc / static_cast<double>(v.shape().frames - 1);
}

}  // namespace

TEST_CASE("attention matches the double-loop oracle") {
    const Matrix q = random_matrix(3, 4, 1), k = random_matrix(5, 4, 2), v = random_matrix(5, 4, 3);
    CHECK((attention(q, k, v) - oracle::attention(q, k, v)).cwiseAbs().maxCoeff() < 1e-6);
    const Matrix q3 = random_matrix(3, 4, 4), k3 = random_matrix(3, 4, 5), v3 = random_matrix(3, 4, 6);
    CHECK((attention(q3, k3, v3) - oracle::attention(q3, k3, v3)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("attention limits and symmetries") {
    const Matrix q = random_matrix(4, 3, 7);
    const Matrix k1 = random_matrix(1, 3, 8), v1 = random_matrix(1, 3, 9);
    const Matrix one = attention(q, k1, v1);
    for (Eigen::Index i = 0; i < 4; ++i) CHECK((one.row(i) - v1.row(0)).norm() < 1e-12);

    // Saturated softmax picks the matching value row.
    Matrix k = Matrix::Identity(3, 3) * 40.0;
    Matrix qs = Matrix::Identity(3, 3) * 40.0 / std::sqrt(3.0);
    const Matrix v = random_matrix(3, 3, 10);
    CHECK((attention(qs, k, v) - v).cwiseAbs().maxCoeff() < 1e-3);

    // Joint permutation of key/value rows leaves the output unchanged.
    const Matrix kk = random_matrix(6, 3, 11), vv = random_matrix(6, 3, 12);
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(6);
    perm.indices() << 3, 0, 5, 1, 4, 2;
    CHECK((attention(q, perm * kk, perm * vv) - attention(q, kk, vv)).cwiseAbs().maxCoeff() < 1e-12);

    // Rows of the weight matrix sum to one: attending to a ones column gives ones.
    const Matrix ones = Matrix::Ones(6, 1);
    CHECK((attention(q, kk, ones) - Matrix::Ones(4, 1)).cwiseAbs().maxCoeff() < 1e-9);
    CHECK_THROWS_AS(attention(q, random_matrix(2, 4, 1), random_matrix(2, 4, 1)), Error);
}

TEST_CASE("first-only cross-frame attention") {
    const auto p = AttentionParams::random_orthonormal(4, 3);
    CHECK((p.w_q.transpose() * p.w_q - Matrix::Identity(4, 4)).norm() < 1e-12);
    std::vector<Matrix> frames{random_matrix(6, 4, 1), random_matrix(6, 4, 2), random_matrix(6, 4, 3)};
    const auto out = first_only_cross_frame(frames, p);
    const Matrix k0 = frames[0] * p.w_k, v0 = frames[0] * p.w_v;
    for (std::size_t i = 0; i < 3; ++i)
        CHECK((out[i] - oracle::attention(frames[i] * p.w_q, k0, v0)).cwiseAbs().maxCoeff() < 1e-6);
    CHECK((out[0] - self_attention(frames[0], p)).cwiseAbs().maxCoeff() < 1e-12);

    const auto single = first_only_cross_frame({frames[1]}, p);
    CHECK((single[0] - self_attention(frames[1], p)).cwiseAbs().maxCoeff() < 1e-6);

    const auto same = first_only_cross_frame({frames[2], frames[2], frames[2]}, p);
    CHECK((same[1] - same[0]).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((same[2] - same[0]).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(first_only_cross_frame({frames[0], random_matrix(5, 4, 9)}, p), Error);
}

TEST_CASE("token layout round trip") {
    const Shape sh{3, 4, 2, 5};
    const auto v = oracle::random_video(sh, 3);
    const auto tokens = to_tokens(v);
    REQUIRE(tokens.size() == 3);
    CHECK(tokens[1].rows() == 10);
    CHECK(tokens[1].cols() == 4);
    CHECK(tokens[2](7, 3) == v.at(2, 3, 1, 2));
    CHECK(from_tokens(tokens, sh) == v);
}

TEST_CASE("cross-frame wrapper") {
    const Shape sh{4, 4, 4, 4};
    auto base = std::make_shared<AnalyticDenoiser>(default_t2i_prior(sh));
    const auto params = AttentionParams::random_orthonormal(4, 7);
    const auto s = default_t2i_schedule();

    const auto off = wrap_crossframe(base, params, 0.0);
    const auto z = oracle::random_video(sh, 1);
    CHECK(off->predict_eps(z, 500, Condition::null(), s) == base->predict_eps(z, 500, Condition::null(), s));

    const auto full = wrap_crossframe(base, params, 1.0);
    LatentVideo same(sh);
    const auto f0 = oracle::random_video(Shape{1, 4, 4, 4}, 2);
    for (std::size_t f = 0; f < 4; ++f) std::copy(f0.data().begin(), f0.data().end(), same.frame(f).begin());
    const auto eps = full->predict_eps(same, 500, Condition::null(), s);
    for (std::size_t f = 1; f < 4; ++f)
        for (std::size_t i = 0; i < sh.frame_size(); ++i) REQUIRE(eps.frame(f)[i] == doctest::Approx(eps.frame(0)[i]));
    CHECK(full->predict_eps(z, 500, Condition::null(), s) == full->predict_eps(z, 500, Condition::null(), s));

    std::vector<double> reduced;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto x = oracle::random_video(sh, 100 + seed);
        const double d0 = mean_adjacent_distance(off->predict_eps(x, 300, Condition::null(), s));
        const double d1 = mean_adjacent_distance(full->predict_eps(x, 300, Condition::null(), s));
        reduced.push_back(d1 - d0);
    }
    CHECK(oracle::median(reduced) < 0.0);

    CHECK_THROWS_AS(wrap_crossframe(base, AttentionParams::random_orthonormal(3, 1), 0.5), Error);
    CHECK_THROWS_AS(wrap_crossframe(base, params, 1.5), Error);
}
