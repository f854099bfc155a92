// Copyright (C) 2026 The elevator authors
// SPDX-License-Identifier: Apache-2.0

#include "elevator/latent_io.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "elevator/error.hpp"

namespace elevator {

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint32_t checked_dim(std::size_t d) {
    require(d <= std::numeric_limits<std::uint32_t>::max(), ErrorCode::shape_overflow, "dimension exceeds u32");
    return static_cast<std::uint32_t>(d);
}

}  // namespace

std::vector<std::uint8_t> encode_latent(const LatentVideo& v) {
    const Shape& sh = v.shape();
    std::vector<std::uint8_t> out;
    out.reserve(kLatentHeaderBytes + 4 * v.size());
    out.insert(out.end(), {'E', 'L', 'V', 'T'});
    put_u16(out, kLatentFormatVersion);
    put_u32(out, checked_dim(sh.frames));
    put_u32(out, checked_dim(sh.channels));
    put_u32(out, checked_dim(sh.height));
    put_u32(out, checked_dim(sh.width));
    out.resize(kLatentHeaderBytes, 0);
    for (double x : v.data()) {
        put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(x)));
    }
    return out;
}

LatentVideo decode_latent(const std::vector<std::uint8_t>& bytes) {
    require(bytes.size() >= kLatentHeaderBytes && std::memcmp(bytes.data(), "ELVT", 4) == 0, ErrorCode::bad_magic,
            "missing ELVT header");
    const std::uint16_t version = static_cast<std::uint16_t>(bytes[4] | (bytes[5] << 8));
    require(version == kLatentFormatVersion, ErrorCode::bad_magic, "unsupported ELVT version");
    Shape sh{get_u32(&bytes[6]), get_u32(&bytes[10]), get_u32(&bytes[14]), get_u32(&bytes[18])};

    std::size_t count = 1;
    for (std::size_t d : {sh.frames, sh.channels, sh.height, sh.width}) {
        require(d == 0 || count <= std::numeric_limits<std::size_t>::max() / 4 / d, ErrorCode::shape_overflow,
                "element count overflows");
        count *= d;
    }
    require(count > 0, ErrorCode::shape_overflow, "zero-sized dimension");
    require(bytes.size() - kLatentHeaderBytes == 4 * count, ErrorCode::io_error,
            "payload size does not match header dimensions");

    std::vector<double> data(count);
    const std::uint8_t* p = bytes.data() + kLatentHeaderBytes;
    for (std::size_t i = 0; i < count; ++i, p += 4) {
        data[i] = static_cast<double>(std::bit_cast<float>(get_u32(p)));
    }
    return LatentVideo(sh, std::move(data));
}

void save_latent(const LatentVideo& v, const std::filesystem::path& path) {
    const auto bytes = encode_latent(v);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(os), ErrorCode::io_error, "cannot open " + path.string() + " for writing");
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    require(static_cast<bool>(os), ErrorCode::io_error, "short write to " + path.string());
}

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    require(static_cast<bool>(is), ErrorCode::io_error, "cannot open " + path.string());
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

}  // namespace

LatentVideo load_latent(const std::filesystem::path& path) { return decode_latent(read_file(path)); }

std::string sha256_hex(const std::vector<std::uint8_t>& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    require(EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) == 1, ErrorCode::io_error,
            "sha256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

}  // namespace elevator
