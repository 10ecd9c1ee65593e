#pragma once

#include "frameprov/crypto.hpp"
#include "frameprov/frame.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace frameprov {

inline constexpr std::uint8_t kGenesisVersion = 1;
inline constexpr std::uint8_t kTrailerVersion = 1;
inline constexpr std::uint16_t kContainerVersion = 1;
inline constexpr std::size_t kMaxSensorIdBytes = 1024;

/// Payload of the first array: device identity and recording context.
struct GenesisMetadata {
    std::uint8_t version = kGenesisVersion;
    PublicKey devicePublicKey{};
    std::uint64_t timestamp = 0;      // seconds since Unix epoch
    std::uint64_t sequenceNumber = 0; // per-device recording counter
    std::optional<Digest> anchorHash; // opaque external anchor, e.g. a blockchain block hash
    std::string sensorId;

    bool operator==(const GenesisMetadata&) const = default;
};

/// Attests the chain prefix ending at a given content frame.
struct SnippetSignature {
    std::uint64_t frameIndex = 0; // 0-based content-frame index
    Signature signature{};

    bool operator==(const SnippetSignature&) const = default;
};

/// Payload of the last array: counts, framerate and signatures.
struct TrailerMetadata {
    std::uint8_t version = kTrailerVersion;
    std::uint64_t contentCount = 0;
    std::uint32_t fpsNum = 0;
    std::uint32_t fpsDen = 1;
    std::vector<SnippetSignature> snippets;
    Signature finalSignature{};

    bool operator==(const TrailerMetadata&) const = default;
};

/// Genesis frame, hash-chained content frames, signed trailer frame.
struct FrameChain {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint32_t fpsNum = 0;
    std::uint32_t fpsDen = 1;
    std::vector<Frame> arrays; // [genesis, content..., trailer], size >= 3

    std::uint64_t contentCount() const { return arrays.size() >= 2 ? arrays.size() - 2 : 0; }
    const Frame& genesisFrame() const { return arrays.front(); }
    const Frame& trailerFrame() const { return arrays.back(); }
    const Frame& contentFrame(std::uint64_t index) const { return arrays[index + 1]; }

    bool operator==(const FrameChain&) const = default;
};

// Payload serialization (little-endian, fixed field order, zero padding to frame size).
std::vector<std::uint8_t> serializeGenesis(const GenesisMetadata& meta);
Frame buildGenesis(const GenesisMetadata& meta, std::uint32_t width, std::uint32_t height);
GenesisMetadata parseGenesis(const Frame& frame);

std::vector<std::uint8_t> serializeTrailer(const TrailerMetadata& meta);
Frame buildTrailer(const TrailerMetadata& meta, std::uint32_t width, std::uint32_t height);
TrailerMetadata parseTrailer(const Frame& frame);

// Domain-separated signed messages.
std::vector<std::uint8_t> finalMessage(const Digest& lastContentDigest, std::uint64_t contentCount,
                                       std::uint32_t fpsNum, std::uint32_t fpsDen);
std::vector<std::uint8_t> snippetMessage(const Digest& contentDigest, std::uint64_t frameIndex);

// .fchain container (bit-exact; two writes of the same chain are byte-identical).
std::vector<std::uint8_t> writeFchain(const FrameChain& chain);
FrameChain readFchain(std::span<const std::uint8_t> bytes);

} // namespace frameprov
