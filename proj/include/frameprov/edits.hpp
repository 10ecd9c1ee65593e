#pragma once

#include "frameprov/chain.hpp"
#include "frameprov/vesl.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace frameprov {

/// Content frames of a chain (genesis and trailer excluded), plus framerate.
struct VideoBuffer {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint32_t fpsNum = 0;
    std::uint32_t fpsDen = 1;
    std::vector<Frame> frames;

    bool operator==(const VideoBuffer&) const = default;
};

// Filter/codec registry. "Replayable" names have bit-exact semantics here;
// "recognized" additionally covers external names that parse and validate
// but cannot be replayed (real encoders are not deterministic across builds).
bool isReplayableFilter(const std::string& filterType);
bool isRecognizedFilter(const std::string& filterType);
bool isReplayableCodec(const std::string& algorithm);
bool isRecognizedCodec(const std::string& algorithm);

/// Checks the filter name and its typeParams (ranges are checked elsewhere).
/// Recognized external filters pass with their params unchecked.
void validateFilterSpec(const FilterSpec& filter);
/// Same for compression algorithms; quant8 requires q in {2,4,8,16,32,64}.
void validateCompressionSpec(const std::string& algorithm,
                             const std::map<std::string, std::string>& params);

/// Row-0 hash bands pass through verbatim; they are part of the content.
VideoBuffer extractContent(const FrameChain& chain);

VideoBuffer applyRangeDeletion(const VideoBuffer& buf, std::uint64_t fromFrame,
                               std::uint64_t toFrame);

/// Resamples [fromFrame, toFrame] to ceil(L*factorDen/factorNum) frames;
/// output region frame j is a byte-copy of input region frame
/// floor(j*factorNum/factorDen).
VideoBuffer applySpeedChange(const VideoBuffer& buf, std::uint64_t factorNum,
                             std::uint64_t factorDen, std::uint64_t fromFrame,
                             std::uint64_t toFrame);

/// Integer-exact per-pixel filters: grayscale, brightness, blackout, boxblur.
VideoBuffer applyFilter(const VideoBuffer& buf, const FilterSpec& filter);

/// Deterministic internal codecs: "none" (identity) and "quant8"
/// (v -> min(255, q*floor(v/q) + floor(q/2)), q in {2,4,8,16,32,64}).
VideoBuffer applyCompression(const VideoBuffer& buf, const std::string& algorithm,
                             const std::map<std::string, std::string>& params);

/// Applies edits in order, each interpreting indices against the current
/// buffer. Throws Error with the failing edit index attached.
VideoBuffer applyEdits(const VideoBuffer& buf, const EditList& list);
VideoBuffer applyEdits(const FrameChain& chain, const EditList& list);

// .fvid edited-video container. The "video hash" used by delayed verification
// is SHA-256 over the entire file bytes.
std::vector<std::uint8_t> writeFvid(const VideoBuffer& buf);
VideoBuffer readFvid(std::span<const std::uint8_t> bytes);

} // namespace frameprov
