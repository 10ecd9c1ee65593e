#include "frameprov/chain.hpp"

#include "frameprov/bytes.hpp"
#include "frameprov/errors.hpp"

#include <algorithm>

namespace frameprov {

namespace {

Frame padToFrame(std::vector<std::uint8_t> payload, std::uint32_t width, std::uint32_t height,
                 const char* what) {
    Frame frame(width, height);
    require(payload.size() <= frame.byteSize(), Errc::Capacity,
            std::string(what) + " payload does not fit in one frame");
    std::copy(payload.begin(), payload.end(), frame.pixels.begin());
    return frame;
}

void requireZeroPadding(std::span<const std::uint8_t> padding, const char* what) {
    for (std::uint8_t b : padding)
        require(b == 0, Errc::NonzeroPadding, std::string(what) + " has nonzero padding");
}

} // namespace

std::vector<std::uint8_t> serializeGenesis(const GenesisMetadata& meta) {
    require(meta.sensorId.size() <= kMaxSensorIdBytes, Errc::Capacity, "sensorId exceeds 1024 bytes");
    ByteWriter w;
    w.magic("FPGN");
    w.u8(meta.version);
    w.bytes(meta.devicePublicKey);
    w.u64(meta.timestamp);
    w.u64(meta.sequenceNumber);
    w.u8(meta.anchorHash ? 1 : 0);
    if (meta.anchorHash) w.bytes(*meta.anchorHash);
    w.u16(static_cast<std::uint16_t>(meta.sensorId.size()));
    w.bytes(std::span(reinterpret_cast<const std::uint8_t*>(meta.sensorId.data()),
                      meta.sensorId.size()));
    return w.take();
}

Frame buildGenesis(const GenesisMetadata& meta, std::uint32_t width, std::uint32_t height) {
    return padToFrame(serializeGenesis(meta), width, height, "genesis");
}

GenesisMetadata parseGenesis(const Frame& frame) {
    ByteReader r(frame.pixels);
    require(r.expectMagic("FPGN"), Errc::BadMagic, "genesis frame has bad magic");
    GenesisMetadata meta;
    meta.version = r.u8();
    require(meta.version == kGenesisVersion, Errc::BadVersion, "unsupported genesis version");
    auto key = r.bytes(32);
    std::copy(key.begin(), key.end(), meta.devicePublicKey.begin());
    meta.timestamp = r.u64();
    meta.sequenceNumber = r.u64();
    std::uint8_t flag = r.u8();
    require(flag <= 1, Errc::Parse, "genesis anchor flag must be 0 or 1");
    if (flag) {
        Digest anchor;
        auto a = r.bytes(32);
        std::copy(a.begin(), a.end(), anchor.begin());
        meta.anchorHash = anchor;
    }
    std::uint16_t idLen = r.u16();
    require(idLen <= kMaxSensorIdBytes, Errc::Parse, "sensorId length exceeds 1024 bytes");
    auto id = r.bytes(idLen);
    meta.sensorId.assign(id.begin(), id.end());
    requireZeroPadding(r.rest(), "genesis frame");
    return meta;
}

std::vector<std::uint8_t> serializeTrailer(const TrailerMetadata& meta) {
    require(meta.fpsDen >= 1, Errc::Structural, "fpsDen must be at least 1");
    require(meta.snippets.size() <= 0xffff, Errc::Capacity, "too many snippet signatures");
    std::uint64_t prev = 0;
    bool first = true;
    for (const auto& s : meta.snippets) {
        require(first || s.frameIndex > prev, Errc::Structural,
                "snippet frame indices must be strictly increasing");
        require(s.frameIndex < meta.contentCount, Errc::Structural,
                "snippet frame index beyond contentCount");
        prev = s.frameIndex;
        first = false;
    }
    ByteWriter w;
    w.magic("FPSG");
    w.u8(meta.version);
    w.u64(meta.contentCount);
    w.u32(meta.fpsNum);
    w.u32(meta.fpsDen);
    w.u16(static_cast<std::uint16_t>(meta.snippets.size()));
    for (const auto& s : meta.snippets) {
        w.u64(s.frameIndex);
        w.bytes(s.signature);
    }
    w.bytes(meta.finalSignature);
    return w.take();
}

Frame buildTrailer(const TrailerMetadata& meta, std::uint32_t width, std::uint32_t height) {
    return padToFrame(serializeTrailer(meta), width, height, "trailer");
}

TrailerMetadata parseTrailer(const Frame& frame) {
    ByteReader r(frame.pixels);
    require(r.expectMagic("FPSG"), Errc::BadMagic, "trailer frame has bad magic");
    TrailerMetadata meta;
    meta.version = r.u8();
    require(meta.version == kTrailerVersion, Errc::BadVersion, "unsupported trailer version");
    meta.contentCount = r.u64();
    meta.fpsNum = r.u32();
    meta.fpsDen = r.u32();
    require(meta.fpsDen >= 1, Errc::Parse, "trailer fpsDen must be at least 1");
    std::uint16_t count = r.u16();
    meta.snippets.reserve(count);
    std::uint64_t prev = 0;
    for (std::uint16_t i = 0; i < count; ++i) {
        SnippetSignature s;
        s.frameIndex = r.u64();
        auto sig = r.bytes(64);
        std::copy(sig.begin(), sig.end(), s.signature.begin());
        require(i == 0 || s.frameIndex > prev, Errc::Structural,
                "snippet frame indices must be strictly increasing");
        require(s.frameIndex < meta.contentCount, Errc::Structural,
                "snippet frame index beyond contentCount");
        prev = s.frameIndex;
        meta.snippets.push_back(s);
    }
    auto sig = r.bytes(64);
    std::copy(sig.begin(), sig.end(), meta.finalSignature.begin());
    requireZeroPadding(r.rest(), "trailer frame");
    return meta;
}

std::vector<std::uint8_t> finalMessage(const Digest& lastContentDigest, std::uint64_t contentCount,
                                       std::uint32_t fpsNum, std::uint32_t fpsDen) {
    ByteWriter w;
    w.magic("FPFN");
    w.bytes(lastContentDigest);
    w.u64(contentCount);
    w.u32(fpsNum);
    w.u32(fpsDen);
    return w.take();
}

std::vector<std::uint8_t> snippetMessage(const Digest& contentDigest, std::uint64_t frameIndex) {
    ByteWriter w;
    w.magic("FPSN");
    w.bytes(contentDigest);
    w.u64(frameIndex);
    return w.take();
}

std::vector<std::uint8_t> writeFchain(const FrameChain& chain) {
    require(chain.arrays.size() >= 3, Errc::Structural,
            "a chain needs a genesis, at least one content frame and a trailer");
    require(chain.width >= kMinChainWidth && chain.height >= kMinChainHeight, Errc::Dimension,
            "chain dimensions below the 11x2 minimum");
    require(chain.fpsDen >= 1, Errc::Structural, "fpsDen must be at least 1");
    ByteWriter w;
    w.magic("FCHN");
    w.u16(kContainerVersion);
    w.u32(chain.width);
    w.u32(chain.height);
    w.u64(chain.arrays.size());
    w.u32(chain.fpsNum);
    w.u32(chain.fpsDen);
    for (const auto& f : chain.arrays) {
        require(f.width == chain.width && f.height == chain.height, Errc::Dimension,
                "frame dimensions differ from container header");
        require(f.pixels.size() == f.byteSize(), Errc::Structural, "malformed frame");
        w.bytes(f.pixels);
    }
    return w.take();
}

FrameChain readFchain(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    require(r.expectMagic("FCHN"), Errc::BadMagic, "not a .fchain file");
    std::uint16_t version = r.u16();
    require(version == kContainerVersion, Errc::BadVersion, "unsupported .fchain version");
    FrameChain chain;
    chain.width = r.u32();
    chain.height = r.u32();
    std::uint64_t n = r.u64();
    chain.fpsNum = r.u32();
    chain.fpsDen = r.u32();
    require(chain.width >= kMinChainWidth && chain.height >= kMinChainHeight, Errc::Dimension,
            "chain dimensions below the 11x2 minimum");
    require(chain.fpsDen >= 1, Errc::Structural, "fpsDen must be at least 1");
    require(n >= 3, Errc::Structural, "frame_count must be at least 3");
    std::size_t frameBytes = static_cast<std::size_t>(3) * chain.width * chain.height;
    require(r.remaining() == n * frameBytes, Errc::LengthMismatch,
            "file length does not match header frame count");
    chain.arrays.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        auto px = r.bytes(frameBytes);
        chain.arrays.emplace_back(chain.width, chain.height,
                                  std::vector<std::uint8_t>(px.begin(), px.end()));
    }
    return chain;
}

} // namespace frameprov
