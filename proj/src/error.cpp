// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#include "elevator/error.hpp"

namespace elevator {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_params: return "invalid-params";
    case ErrorCode::shape_mismatch: return "shape-mismatch";
    case ErrorCode::timestep_out_of_range: return "timestep-out-of-range";
    case ErrorCode::degenerate_alpha: return "degenerate-alpha";
    case ErrorCode::k_out_of_range: return "k-out-of-range";
    case ErrorCode::timestep_order: return "timestep-order";
    case ErrorCode::target_not_on_grid: return "target-not-on-grid";
    case ErrorCode::t_not_on_grid: return "t-not-on-grid";
    case ErrorCode::n_steps_out_of_range: return "n-steps-out-of-range";
    case ErrorCode::invalid_eta: return "invalid-eta";
    case ErrorCode::invalid_prior: return "invalid-prior";
    case ErrorCode::invalid_d0: return "invalid-d0";
    case ErrorCode::mask_shape_mismatch: return "mask-shape-mismatch";
    case ErrorCode::ragged_frames: return "ragged-frames";
    case ErrorCode::incompatible_shape: return "incompatible-shape";
    case ErrorCode::too_few_frames: return "too-few-frames";
    case ErrorCode::zero_frame: return "zero-frame";
    case ErrorCode::degenerate_input: return "degenerate-input";
    case ErrorCode::step_not_refinable: return "step-not-refinable";
    case ErrorCode::plan_invalid: return "plan-invalid";
    case ErrorCode::io_error: return "io-error";
    case ErrorCode::bad_magic: return "bad-magic";
    case ErrorCode::shape_overflow: return "shape-overflow";
    case ErrorCode::unsupported_channels: return "unsupported-channels";
    case ErrorCode::invalid_config: return "invalid-config";
    case ErrorCode::check_failed: return "check-failed";
    }
    return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace elevator
