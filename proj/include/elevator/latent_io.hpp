// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "elevator/latent.hpp"

namespace elevator {

// ELVT layout, little-endian:
//   0  "ELVT"
//   4  u16 version
//   6  u32 F, C, H, W
//   22 zero padding up to byte 32
//   32 F*C*H*W float32, frame-major
inline constexpr std::uint16_t kLatentFormatVersion = 1;
inline constexpr std::size_t kLatentHeaderBytes = 32;

std::vector<std::uint8_t> encode_latent(const LatentVideo& v);
LatentVideo decode_latent(const std::vector<std::uint8_t>& bytes);

void save_latent(const LatentVideo& v, const std::filesystem::path& path);
LatentVideo load_latent(const std::filesystem::path& path);

// Lowercase hex SHA-256.
std::string sha256_hex(const std::vector<std::uint8_t>& bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace elevator
