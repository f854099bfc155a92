// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "elevator/denoiser.hpp"

namespace elevator {

using Matrix = Eigen::MatrixXd;

/// Token projections; tokens are rows, so Q = X * w_q.
struct AttentionParams {
    Matrix w_q;
    Matrix w_k;
    Matrix w_v;

    std::size_t input_width() const { return static_cast<std::size_t>(w_q.rows()); }
    std::size_t head_dim() const { return static_cast<std::size_t>(w_q.cols()); }
    void validate() const;

    // Independent seeded random orthonormal width x width projections.
    static AttentionParams random_orthonormal(std::size_t width, std::uint64_t seed);
};

// softmax(Q K^T / sqrt(d)) V, row-wise softmax.
Matrix attention(const Matrix& q, const Matrix& k, const Matrix& v);

Matrix self_attention(const Matrix& tokens, const AttentionParams& params);

// Frame i attends with its own queries to frame 0's keys and values.
std::vector<Matrix> first_only_cross_frame(const std::vector<Matrix>& frames, const AttentionParams& params);

// Frame f of a latent as an (H*W) x C token matrix, and back.
std::vector<Matrix> to_tokens(const LatentVideo& v);
LatentVideo from_tokens(const std::vector<Matrix>& frames, const Shape& shape);

/// Inflated denoiser: eps = (1 - mix) eps_base + mix * cross_frame(eps_base).
class CrossFrameDenoiser final : public Denoiser {
public:
    CrossFrameDenoiser(std::shared_ptr<const Denoiser> base, AttentionParams params, double mix);

    Shape shape() const override { return base_->shape(); }
    LatentVideo predict_eps(const LatentVideo& z, int t, const Condition& cond,
                            const NoiseSchedule& s) const override;

    const Denoiser& base() const { return *base_; }
    double mix() const { return mix_; }

private:
    std::shared_ptr<const Denoiser> base_;
    AttentionParams params_;
    double mix_;
};

std::shared_ptr<CrossFrameDenoiser> wrap_crossframe(std::shared_ptr<const Denoiser> base, AttentionParams params,
                                                    double mix);

}  // namespace elevator
