#pragma once

#include "frameprov/crypto.hpp"

#include <cstdint>
#include <vector>

namespace frameprov {

/// Minimum width so row 0 can hold a 32-byte digest (3*11 = 33 bytes).
inline constexpr std::uint32_t kMinChainWidth = 11;
/// Row 0 is reserved for the hash band; at least one content row must exist.
inline constexpr std::uint32_t kMinChainHeight = 2;
inline constexpr std::size_t kDigestBytes = 32;

/// A W x H RGB24 pixel array, row-major, channel order R,G,B.
struct Frame {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint8_t> pixels; // length 3*width*height

    Frame() = default;
    Frame(std::uint32_t w, std::uint32_t h)
        : width(w), height(h), pixels(static_cast<std::size_t>(3) * w * h, 0) {}
    Frame(std::uint32_t w, std::uint32_t h, std::vector<std::uint8_t> px);

    std::size_t byteSize() const { return static_cast<std::size_t>(3) * width * height; }
    bool operator==(const Frame&) const = default;
};

/// SHA-256 over the frame's full pixel bytes, including row 0.
Digest frameDigest(const Frame& frame);

/// Lays a 32-byte digest into the first 32 bytes of a 3*width row; the rest is zero.
std::vector<std::uint8_t> encodeHashRow(const Digest& digest, std::uint32_t width);

/// Reads the digest back out of a frame's row 0.
Digest decodeHashRow(const Frame& frame);

/// Returns a copy of `raw` with row 0 replaced by encodeHashRow(digest).
Frame withHashRow(const Frame& raw, const Digest& digest);

} // namespace frameprov
