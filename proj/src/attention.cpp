// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#include "elevator/attention.hpp"

#include <cmath>

#include "elevator/error.hpp"
#include "elevator/rng.hpp"

namespace elevator {

void AttentionParams::validate() const {
    require(w_q.rows() > 0 && w_q.cols() > 0, ErrorCode::invalid_params, "empty attention projection");
    require(w_k.rows() == w_q.rows() && w_v.rows() == w_q.rows(), ErrorCode::invalid_params,
            "projections disagree on input width");
    require(w_k.cols() == w_q.cols() && w_v.cols() == w_q.cols(), ErrorCode::invalid_params,
            "projections disagree on head dimension");
    require(w_q.allFinite() && w_k.allFinite() && w_v.allFinite(), ErrorCode::invalid_params,
            "projection matrices must be finite");
}

AttentionParams AttentionParams::random_orthonormal(std::size_t width, std::uint64_t seed) {
    RandomStream rng(seed);
    const auto n = static_cast<Eigen::Index>(width);
    auto orthonormal = [&] {
        Matrix g(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) g(i, j) = rng.normal();
        }
        Eigen::HouseholderQR<Matrix> qr(g);
        Matrix q = qr.householderQ() * Matrix::Identity(n, n);
        // fix signs so the factorization is unique
        const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (Eigen::Index j = 0; j < n; ++j) {
            if (r(j, j) < 0) q.col(j) *= -1.0;
        }
        return q;
    };
    AttentionParams p;
    p.w_q = orthonormal();
    p.w_k = orthonormal();
    p.w_v = orthonormal();
    return p;
}

Matrix attention(const Matrix& q, const Matrix& k, const Matrix& v) {
    require(k.rows() >= 1, ErrorCode::shape_mismatch, "attention needs at least one key");
    require(q.cols() == k.cols(), ErrorCode::shape_mismatch, "query and key widths differ");
    require(k.rows() == v.rows(), ErrorCode::shape_mismatch, "key and value counts differ");
    const double scale = 1.0 / std::sqrt(static_cast<double>(q.cols()));
    Matrix logits = (q * k.transpose()) * scale;
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
        const double peak = logits.row(i).maxCoeff();
        logits.row(i) = (logits.row(i).array() - peak).exp();
        logits.row(i) /= logits.row(i).sum();
    }
    return logits * v;
}

Matrix self_attention(const Matrix& tokens, const AttentionParams& params) {
    return attention(tokens * params.w_q, tokens * params.w_k, tokens * params.w_v);
}

std::vector<Matrix> first_only_cross_frame(const std::vector<Matrix>& frames, const AttentionParams& params) {
    require(!frames.empty(), ErrorCode::ragged_frames, "no frames");
    params.validate();
    const Matrix& anchor = frames.front();
    for (const Matrix& f : frames) {
        require(f.rows() == anchor.rows() && f.cols() == anchor.cols(), ErrorCode::ragged_frames,
                "frames differ in token count or width");
    }
    require(static_cast<std::size_t>(anchor.cols()) == params.input_width(), ErrorCode::shape_mismatch,
            "token width differs from projection input width");
    const Matrix k = anchor * params.w_k;
    const Matrix v = anchor * params.w_v;
    std::vector<Matrix> out;
    out.reserve(frames.size());
    for (const Matrix& f : frames) {
        out.push_back(attention(f * params.w_q, k, v));
    }
    return out;
}

std::vector<Matrix> to_tokens(const LatentVideo& v) {
    const Shape& sh = v.shape();
    const auto n_tok = static_cast<Eigen::Index>(sh.plane_size());
    const auto width = static_cast<Eigen::Index>(sh.channels);
    std::vector<Matrix> frames;
    frames.reserve(sh.frames);
    for (std::size_t f = 0; f < sh.frames; ++f) {
        Matrix tok(n_tok, width);
        const auto src = v.frame(f);
        for (Eigen::Index c = 0; c < width; ++c) {
            for (Eigen::Index p = 0; p < n_tok; ++p) {
                tok(p, c) = src[static_cast<std::size_t>(c * n_tok + p)];
            }
        }
        frames.push_back(std::move(tok));
    }
    return frames;
}

LatentVideo from_tokens(const std::vector<Matrix>& frames, const Shape& shape) {
    require(frames.size() == shape.frames, ErrorCode::incompatible_shape, "frame count mismatch");
    LatentVideo out(shape);
    const auto n_tok = static_cast<Eigen::Index>(shape.plane_size());
    const auto width = static_cast<Eigen::Index>(shape.channels);
    for (std::size_t f = 0; f < shape.frames; ++f) {
        require(frames[f].rows() == n_tok && frames[f].cols() == width, ErrorCode::incompatible_shape,
                "token matrix does not match latent layout");
        auto dst = out.frame(f);
        for (Eigen::Index c = 0; c < width; ++c) {
            for (Eigen::Index p = 0; p < n_tok; ++p) {
                dst[static_cast<std::size_t>(c * n_tok + p)] = frames[f](p, c);
            }
        }
    }
    return out;
}

CrossFrameDenoiser::CrossFrameDenoiser(std::shared_ptr<const Denoiser> base, AttentionParams params, double mix)
    : base_(std::move(base)), params_(std::move(params)), mix_(mix) {
    require(base_ != nullptr, ErrorCode::invalid_params, "null base denoiser");
    require(mix_ >= 0.0 && mix_ <= 1.0, ErrorCode::invalid_params, "mix must lie in [0, 1]");
    params_.validate();
    const std::size_t channels = base_->shape().channels;
    require(params_.input_width() == channels && params_.head_dim() == channels, ErrorCode::incompatible_shape,
            "attention projections must map C channels to C channels");
}

LatentVideo CrossFrameDenoiser::predict_eps(const LatentVideo& z, int t, const Condition& cond,
                                            const NoiseSchedule& s) const {
    LatentVideo eps = base_->predict_eps(z, t, cond, s);
    if (mix_ == 0.0) {
        return eps;
    }
    const LatentVideo shared = from_tokens(first_only_cross_frame(to_tokens(eps), params_), eps.shape());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        eps[i] = (1.0 - mix_) * eps[i] + mix_ * shared[i];
    }
    return eps;
}

std::shared_ptr<CrossFrameDenoiser> wrap_crossframe(std::shared_ptr<const Denoiser> base, AttentionParams params,
                                                    double mix) {
    return std::make_shared<CrossFrameDenoiser>(std::move(base), std::move(params), mix);
}

}  // namespace elevator
