#include "frameprov/frame.hpp"

#include "frameprov/errors.hpp"

#include <algorithm>

namespace frameprov {

Frame::Frame(std::uint32_t w, std::uint32_t h, std::vector<std::uint8_t> px)
    : width(w), height(h), pixels(std::move(px)) {
    require(pixels.size() == byteSize(), Errc::Structural,
            "frame pixel buffer length does not match 3*width*height");
}

Digest frameDigest(const Frame& frame) {
    require(frame.pixels.size() == frame.byteSize(), Errc::Structural,
            "frame pixel buffer length does not match 3*width*height");
    return sha256(frame.pixels);
}

std::vector<std::uint8_t> encodeHashRow(const Digest& digest, std::uint32_t width) {
    require(width >= kMinChainWidth, Errc::Dimension, "width must be at least 11 to hold the hash band");
    std::vector<std::uint8_t> row(static_cast<std::size_t>(3) * width, 0);
    std::copy(digest.begin(), digest.end(), row.begin());
    return row;
}

Digest decodeHashRow(const Frame& frame) {
    require(frame.width >= kMinChainWidth, Errc::Dimension, "frame too narrow to carry a hash band");
    require(frame.pixels.size() >= kDigestBytes, Errc::Structural, "frame too small");
    Digest d;
    std::copy_n(frame.pixels.begin(), kDigestBytes, d.begin());
    return d;
}

Frame withHashRow(const Frame& raw, const Digest& digest) {
    Frame out = raw;
    auto row = encodeHashRow(digest, raw.width);
    std::copy(row.begin(), row.end(), out.pixels.begin());
    return out;
}

} // namespace frameprov
