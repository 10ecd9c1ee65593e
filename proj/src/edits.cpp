#include "frameprov/edits.hpp"

#include "frameprov/bytes.hpp"
#include "frameprov/errors.hpp"
#include "frameprov/numeric.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace frameprov {

namespace {

const std::set<std::string> kReplayableFilters = {"grayscale", "brightness", "blackout", "boxblur"};
// External filter names parse and validate but have no bit-exact semantics here.
const std::set<std::string> kExternalFilters = {"alpha", "atadenoise"};
const std::set<std::string> kReplayableCodecs = {"none", "quant8"};
const std::set<std::string> kExternalCodecs = {"H.264", "H.265", "VP9", "AV1"};
const std::set<std::uint64_t> kQuantSteps = {2, 4, 8, 16, 32, 64};

void requireRange(const VideoBuffer& buf, std::uint64_t fromFrame, std::uint64_t toFrame,
                  const char* what) {
    require(fromFrame <= toFrame, Errc::Range, std::string(what) + ": fromFrame exceeds toFrame");
    require(toFrame < buf.frames.size(), Errc::Range,
            std::string(what) + ": range beyond the last frame");
}

std::uint64_t requiredU64Param(const std::map<std::string, std::string>& params,
                               const std::string& key, const std::string& what) {
    auto it = params.find(key);
    require(it != params.end(), Errc::BadParameter, what + " requires parameter \"" + key + "\"");
    auto v = parseU64(it->second);
    require(v.has_value(), Errc::BadParameter,
            what + " parameter \"" + key + "\" is not a nonnegative integer");
    return *v;
}

void rejectExtraParams(const std::map<std::string, std::string>& params,
                       std::initializer_list<const char*> allowed, const std::string& what) {
    for (const auto& [k, v] : params) {
        bool ok = std::any_of(allowed.begin(), allowed.end(),
                              [&](const char* a) { return k == a; });
        require(ok, Errc::BadParameter, what + " has unexpected parameter \"" + k + "\"");
    }
}

inline std::uint8_t clampByte(std::int64_t v) {
    return static_cast<std::uint8_t>(std::clamp<std::int64_t>(v, 0, 255));
}

Frame grayscaleFrame(const Frame& in) {
    Frame out = in;
    for (std::size_t p = 0; p < in.pixels.size(); p += 3) {
        std::uint32_t y = (77u * in.pixels[p] + 150u * in.pixels[p + 1] + 29u * in.pixels[p + 2]) >> 8;
        out.pixels[p] = out.pixels[p + 1] = out.pixels[p + 2] = static_cast<std::uint8_t>(y);
    }
    return out;
}

Frame brightnessFrame(const Frame& in, std::int64_t offset) {
    Frame out = in;
    for (auto& b : out.pixels) b = clampByte(static_cast<std::int64_t>(b) + offset);
    return out;
}

Frame blackoutFrame(const Frame& in, std::uint64_t x, std::uint64_t y, std::uint64_t w,
                    std::uint64_t h) {
    Frame out = in;
    for (std::uint64_t row = y; row < y + h; ++row) {
        auto begin = out.pixels.begin() + static_cast<std::ptrdiff_t>(3 * (row * in.width + x));
        std::fill(begin, begin + static_cast<std::ptrdiff_t>(3 * w), std::uint8_t{0});
    }
    return out;
}

// Coordinates clamp to the frame edge, so the window always holds (2r+1)^2
// samples (border pixels repeat).
Frame boxblurFrame(const Frame& in, std::uint64_t radius) {
    Frame out = in;
    auto r = static_cast<std::int64_t>(radius);
    auto w = static_cast<std::int64_t>(in.width);
    auto h = static_cast<std::int64_t>(in.height);
    std::uint64_t count = static_cast<std::uint64_t>(2 * r + 1) * static_cast<std::uint64_t>(2 * r + 1);
    for (std::int64_t y = 0; y < h; ++y) {
        for (std::int64_t x = 0; x < w; ++x) {
            std::uint64_t sum[3] = {0, 0, 0};
            for (std::int64_t dy = -r; dy <= r; ++dy) {
                std::int64_t sy = std::clamp<std::int64_t>(y + dy, 0, h - 1);
                for (std::int64_t dx = -r; dx <= r; ++dx) {
                    std::int64_t sx = std::clamp<std::int64_t>(x + dx, 0, w - 1);
                    std::size_t p = static_cast<std::size_t>(3 * (sy * w + sx));
                    sum[0] += in.pixels[p];
                    sum[1] += in.pixels[p + 1];
                    sum[2] += in.pixels[p + 2];
                }
            }
            std::size_t p = static_cast<std::size_t>(3 * (y * w + x));
            out.pixels[p] = static_cast<std::uint8_t>(sum[0] / count);
            out.pixels[p + 1] = static_cast<std::uint8_t>(sum[1] / count);
            out.pixels[p + 2] = static_cast<std::uint8_t>(sum[2] / count);
        }
    }
    return out;
}

} // namespace

bool isReplayableFilter(const std::string& filterType) {
    return kReplayableFilters.count(filterType) > 0;
}

bool isRecognizedFilter(const std::string& filterType) {
    return isReplayableFilter(filterType) || kExternalFilters.count(filterType) > 0;
}

bool isReplayableCodec(const std::string& algorithm) {
    return kReplayableCodecs.count(algorithm) > 0;
}

bool isRecognizedCodec(const std::string& algorithm) {
    return isReplayableCodec(algorithm) || kExternalCodecs.count(algorithm) > 0;
}

void validateFilterSpec(const FilterSpec& filter) {
    const std::string& t = filter.filterType;
    require(isRecognizedFilter(t), Errc::UnsupportedFilter, "unknown filter \"" + t + "\"");
    if (!isReplayableFilter(t)) return; // external filter, params pass through
    if (t == "grayscale") {
        rejectExtraParams(filter.typeParams, {}, "grayscale");
    } else if (t == "brightness") {
        rejectExtraParams(filter.typeParams, {"offset"}, "brightness");
        auto it = filter.typeParams.find("offset");
        require(it != filter.typeParams.end(), Errc::BadParameter,
                "brightness requires parameter \"offset\"");
        auto v = parseI64(it->second);
        require(v && *v >= -255 && *v <= 255, Errc::BadParameter,
                "brightness offset must be an integer in [-255, 255]");
    } else if (t == "blackout") {
        rejectExtraParams(filter.typeParams, {"x", "y", "w", "h"}, "blackout");
        requiredU64Param(filter.typeParams, "x", "blackout");
        requiredU64Param(filter.typeParams, "y", "blackout");
        require(requiredU64Param(filter.typeParams, "w", "blackout") >= 1, Errc::BadParameter,
                "blackout width must be at least 1");
        require(requiredU64Param(filter.typeParams, "h", "blackout") >= 1, Errc::BadParameter,
                "blackout height must be at least 1");
    } else if (t == "boxblur") {
        rejectExtraParams(filter.typeParams, {"radius"}, "boxblur");
        require(requiredU64Param(filter.typeParams, "radius", "boxblur") >= 1, Errc::BadParameter,
                "boxblur radius must be at least 1");
    }
}

void validateCompressionSpec(const std::string& algorithm,
                             const std::map<std::string, std::string>& params) {
    require(isRecognizedCodec(algorithm), Errc::UnsupportedCodec,
            "unknown compression algorithm \"" + algorithm + "\"");
    if (algorithm == "none") {
        rejectExtraParams(params, {}, "compression \"none\"");
    } else if (algorithm == "quant8") {
        rejectExtraParams(params, {"q"}, "quant8");
        std::uint64_t q = requiredU64Param(params, "q", "quant8");
        require(kQuantSteps.count(q) > 0, Errc::BadParameter,
                "quant8 step q must be one of 2, 4, 8, 16, 32, 64");
    }
    // External codecs: params pass through unchecked.
}

VideoBuffer extractContent(const FrameChain& chain) {
    require(chain.arrays.size() >= 3, Errc::Structural, "chain has no content frames");
    VideoBuffer buf;
    buf.width = chain.width;
    buf.height = chain.height;
    buf.fpsNum = chain.fpsNum;
    buf.fpsDen = chain.fpsDen;
    buf.frames.assign(chain.arrays.begin() + 1, chain.arrays.end() - 1);
    return buf;
}

VideoBuffer applyRangeDeletion(const VideoBuffer& buf, std::uint64_t fromFrame,
                               std::uint64_t toFrame) {
    requireRange(buf, fromFrame, toFrame, "rangeDeletion");
    require(toFrame - fromFrame + 1 < buf.frames.size(), Errc::EmptyResult,
            "rangeDeletion would delete every frame");
    VideoBuffer out = buf;
    out.frames.erase(out.frames.begin() + static_cast<std::ptrdiff_t>(fromFrame),
                     out.frames.begin() + static_cast<std::ptrdiff_t>(toFrame) + 1);
    return out;
}

VideoBuffer applySpeedChange(const VideoBuffer& buf, std::uint64_t factorNum,
                             std::uint64_t factorDen, std::uint64_t fromFrame,
                             std::uint64_t toFrame) {
    require(factorNum >= 1 && factorDen >= 1, Errc::BadParameter,
            "playback speed factor must be positive");
    requireRange(buf, fromFrame, toFrame, "playbackSpeed");
    std::uint64_t len = toFrame - fromFrame + 1;
    std::uint64_t outLen = (len * factorDen + factorNum - 1) / factorNum; // ceil
    VideoBuffer out;
    out.width = buf.width;
    out.height = buf.height;
    out.fpsNum = buf.fpsNum;
    out.fpsDen = buf.fpsDen;
    out.frames.reserve(buf.frames.size() - len + outLen);
    out.frames.insert(out.frames.end(), buf.frames.begin(),
                      buf.frames.begin() + static_cast<std::ptrdiff_t>(fromFrame));
    for (std::uint64_t j = 0; j < outLen; ++j) {
        std::uint64_t src = fromFrame + j * factorNum / factorDen;
        out.frames.push_back(buf.frames[src]);
    }
    out.frames.insert(out.frames.end(),
                      buf.frames.begin() + static_cast<std::ptrdiff_t>(toFrame) + 1,
                      buf.frames.end());
    return out;
}

VideoBuffer applyFilter(const VideoBuffer& buf, const FilterSpec& filter) {
    validateFilterSpec(filter);
    require(isReplayableFilter(filter.filterType), Errc::UnsupportedFilter,
            "filter \"" + filter.filterType + "\" is recognized but cannot be replayed");
    require(!buf.frames.empty(), Errc::Range, "filter on an empty buffer");
    std::uint64_t from = filter.fromFrame.value_or(0);
    std::uint64_t to = filter.toFrame.value_or(buf.frames.size() - 1);
    requireRange(buf, from, to, "videoFilter");

    const auto& params = filter.typeParams;
    VideoBuffer out = buf;
    for (std::uint64_t i = from; i <= to; ++i) {
        const Frame& in = buf.frames[i];
        if (filter.filterType == "grayscale") {
            out.frames[i] = grayscaleFrame(in);
        } else if (filter.filterType == "brightness") {
            out.frames[i] = brightnessFrame(in, *parseI64(params.at("offset")));
        } else if (filter.filterType == "blackout") {
            std::uint64_t x = *parseU64(params.at("x"));
            std::uint64_t y = *parseU64(params.at("y"));
            std::uint64_t w = *parseU64(params.at("w"));
            std::uint64_t h = *parseU64(params.at("h"));
            require(x + w <= in.width && y + h <= in.height, Errc::BadParameter,
                    "blackout rectangle lies outside the frame");
            out.frames[i] = blackoutFrame(in, x, y, w, h);
        } else {
            out.frames[i] = boxblurFrame(in, *parseU64(params.at("radius")));
        }
    }
    return out;
}

VideoBuffer applyCompression(const VideoBuffer& buf, const std::string& algorithm,
                             const std::map<std::string, std::string>& params) {
    validateCompressionSpec(algorithm, params);
    require(isReplayableCodec(algorithm), Errc::UnsupportedCodec,
            "codec \"" + algorithm + "\" is recognized but cannot be replayed");
    if (algorithm == "none") return buf;
    std::uint64_t q = *parseU64(params.at("q"));
    VideoBuffer out = buf;
    std::array<std::uint8_t, 256> table{};
    for (unsigned v = 0; v < 256; ++v)
        table[v] = static_cast<std::uint8_t>(std::min<std::uint64_t>(255, q * (v / q) + q / 2));
    for (auto& frame : out.frames)
        for (auto& b : frame.pixels) b = table[b];
    return out;
}

VideoBuffer applyEdits(const VideoBuffer& buf, const EditList& list) {
    VideoBuffer cur = buf;
    for (std::size_t i = 0; i < list.edits.size(); ++i) {
        try {
            std::visit(
                [&](const auto& op) {
                    using T = std::decay_t<decltype(op)>;
                    if constexpr (std::is_same_v<T, RangeDeletion>) {
                        cur = applyRangeDeletion(cur, op.fromFrame, op.toFrame);
                    } else if constexpr (std::is_same_v<T, PlaybackSpeed>) {
                        cur = applySpeedChange(cur, op.factorNum, op.factorDen, op.fromFrame,
                                               op.toFrame);
                    } else if constexpr (std::is_same_v<T, VideoFilter>) {
                        for (const auto& f : op.filters) cur = applyFilter(cur, f);
                    } else {
                        cur = applyCompression(cur, op.algorithm, op.algorithmParams);
                    }
                },
                list.edits[i]);
        } catch (const Error& e) {
            throw Error(e.code(), "edit " + std::to_string(i) + ": " + e.what());
        }
    }
    return cur;
}

VideoBuffer applyEdits(const FrameChain& chain, const EditList& list) {
    return applyEdits(extractContent(chain), list);
}

std::vector<std::uint8_t> writeFvid(const VideoBuffer& buf) {
    require(!buf.frames.empty(), Errc::Structural, "refusing to write an empty video");
    require(buf.fpsDen >= 1, Errc::Structural, "fpsDen must be at least 1");
    ByteWriter w;
    w.magic("FVID");
    w.u16(kContainerVersion);
    w.u32(buf.width);
    w.u32(buf.height);
    w.u64(buf.frames.size());
    w.u32(buf.fpsNum);
    w.u32(buf.fpsDen);
    for (const auto& f : buf.frames) {
        require(f.width == buf.width && f.height == buf.height, Errc::Dimension,
                "frame dimensions differ from container header");
        w.bytes(f.pixels);
    }
    return w.take();
}

VideoBuffer readFvid(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    require(r.expectMagic("FVID"), Errc::BadMagic, "not a .fvid file");
    std::uint16_t version = r.u16();
    require(version == kContainerVersion, Errc::BadVersion, "unsupported .fvid version");
    VideoBuffer buf;
    buf.width = r.u32();
    buf.height = r.u32();
    std::uint64_t n = r.u64();
    buf.fpsNum = r.u32();
    buf.fpsDen = r.u32();
    require(buf.width >= 1 && buf.height >= 1, Errc::Dimension, "zero-sized frames");
    require(buf.fpsDen >= 1, Errc::Structural, "fpsDen must be at least 1");
    require(n >= 1, Errc::Structural, "frame_count must be at least 1");
    std::size_t frameBytes = static_cast<std::size_t>(3) * buf.width * buf.height;
    require(r.remaining() == n * frameBytes, Errc::LengthMismatch,
            "file length does not match header frame count");
    buf.frames.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        auto px = r.bytes(frameBytes);
        buf.frames.emplace_back(buf.width, buf.height,
                                std::vector<std::uint8_t>(px.begin(), px.end()));
    }
    return buf;
}

} // namespace frameprov
