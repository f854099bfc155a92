// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace elevator {

enum class ErrorCode {
    invalid_params,
    shape_mismatch,
    timestep_out_of_range,
    degenerate_alpha,
    k_out_of_range,
    timestep_order,
    target_not_on_grid,
    t_not_on_grid,
    n_steps_out_of_range,
    invalid_eta,
    invalid_prior,
    invalid_d0,
    mask_shape_mismatch,
    ragged_frames,
    incompatible_shape,
    too_few_frames,
    zero_frame,
    degenerate_input,
    step_not_refinable,
    plan_invalid,
    io_error,
    bad_magic,
    shape_overflow,
    unsupported_channels,
    invalid_config,
    check_failed,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Throws Error(code, message) when cond is false.
inline void require(bool cond, ErrorCode code, const std::string& message) {
    if (!cond) {
        throw Error(code, message);
    }
}

}  // namespace elevator
