#include "frameprov/edits.hpp"
#include "frameprov/errors.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

using namespace frameprov;
using namespace frameprov::testing;

namespace {

VideoBuffer numberedBuffer(std::size_t count, std::uint32_t w = 12, std::uint32_t h = 4) {
    VideoBuffer buf;
    buf.width = w;
    buf.height = h;
    buf.fpsNum = 30;
    buf.fpsDen = 1;
    for (std::size_t i = 0; i < count; ++i) {
        Frame f(w, h);
        std::fill(f.pixels.begin(), f.pixels.end(), static_cast<std::uint8_t>(i));
        buf.frames.push_back(std::move(f));
    }
    return buf;
}

std::uint8_t frameTag(const Frame& f) { return f.pixels[f.pixels.size() - 1]; }

// Independent oracle for the resampling index map: enumerates output indices
// directly from the definition L' = ceil(L*den/num), src = floor(j*num/den).
std::vector<std::size_t> speedOracle(std::size_t len, std::uint64_t num, std::uint64_t den) {
    std::size_t outLen = static_cast<std::size_t>((len * den + num - 1) / num);
    std::vector<std::size_t> map(outLen);
    for (std::size_t j = 0; j < outLen; ++j) map[j] = static_cast<std::size_t>(j * num / den);
    return map;
}

// Independent oracle for the quantizing codec, evaluated per byte value.
std::uint8_t quantOracle(std::uint8_t v, std::uint64_t q) {
    std::uint64_t out = q * (v / q) + q / 2;
    return static_cast<std::uint8_t>(std::min<std::uint64_t>(255, out));
}

} // namespace

TEST_CASE("extract_content keeps content frames verbatim") {
    auto fx = recordChain(16, 11, 3);
    VideoBuffer buf = extractContent(fx.chain);
    REQUIRE(buf.frames.size() == 3);
    CHECK(buf.frames[0] == fx.chain.arrays[1]);
    CHECK(decodeHashRow(buf.frames[0]) == frameDigest(fx.chain.genesisFrame()));
    CHECK(buf.frames.size() == parseTrailer(fx.chain.trailerFrame()).contentCount);
}

TEST_CASE("range deletion") {
    SUBCASE("large-range arithmetic: 3000 minus [1250,1500] leaves 2749") {
        auto buf = numberedBuffer(3000, 11, 2);
        auto out = applyRangeDeletion(buf, 1250, 1500);
        CHECK(out.frames.size() == 2749);
    }
    SUBCASE("delete first of two frames") {
        auto buf = numberedBuffer(2);
        auto out = applyRangeDeletion(buf, 0, 0);
        REQUIRE(out.frames.size() == 1);
        CHECK(frameTag(out.frames[0]) == 1);
    }
    SUBCASE("deleting everything is rejected") {
        auto buf = numberedBuffer(4);
        CHECK_THROWS_AS(applyRangeDeletion(buf, 0, 3), Error);
    }
    SUBCASE("out of bounds rejected") {
        auto buf = numberedBuffer(4);
        CHECK_THROWS_AS(applyRangeDeletion(buf, 2, 4), Error);
    }
}

TEST_CASE("speed change matches the index-map oracle") {
    SUBCASE("factor 1/1 is the identity") {
        auto buf = numberedBuffer(6);
        CHECK(applySpeedChange(buf, 1, 1, 0, 5) == buf);
    }
    SUBCASE("2x over 10 frames keeps 0,2,4,6,8") {
        auto buf = numberedBuffer(10);
        auto out = applySpeedChange(buf, 2, 1, 0, 9);
        REQUIRE(out.frames.size() == 5);
        for (std::size_t j = 0; j < 5; ++j) CHECK(frameTag(out.frames[j]) == 2 * j);
    }
    SUBCASE("half speed over 5 frames duplicates each frame") {
        auto buf = numberedBuffer(5);
        auto out = applySpeedChange(buf, 1, 2, 0, 4);
        auto oracle = speedOracle(5, 1, 2);
        REQUIRE(out.frames.size() == oracle.size());
        std::vector<std::uint8_t> expected = {0, 0, 1, 1, 2, 2, 3, 3, 4, 4};
        for (std::size_t j = 0; j < out.frames.size(); ++j) {
            CHECK(frameTag(out.frames[j]) == expected[j]);
            CHECK(frameTag(out.frames[j]) == oracle[j]);
        }
    }
    SUBCASE("oracle agreement across factors, lengths and sub-ranges") {
        for (std::uint64_t num : {1, 2, 3, 5}) {
            for (std::uint64_t den : {1, 2, 3, 4}) {
                auto buf = numberedBuffer(9);
                auto out = applySpeedChange(buf, num, den, 2, 7);
                auto oracle = speedOracle(6, num, den);
                REQUIRE(out.frames.size() == 3 + oracle.size());
                CHECK(frameTag(out.frames[0]) == 0);
                CHECK(frameTag(out.frames[1]) == 1);
                for (std::size_t j = 0; j < oracle.size(); ++j)
                    CHECK(frameTag(out.frames[2 + j]) == 2 + oracle[j]);
                CHECK(frameTag(out.frames.back()) == 8);
            }
        }
    }
}

TEST_CASE("filters") {
    auto buf = numberedBuffer(3, 12, 4);

    SUBCASE("brightness offset 0 is the identity") {
        FilterSpec f{"brightness", 0, 2, {{"offset", "0"}}};
        CHECK(applyFilter(buf, f) == buf);
    }
    SUBCASE("brightness clamps at both ends") {
        FilterSpec up{"brightness", 0, 0, {{"offset", "255"}}};
        auto out = applyFilter(buf, up);
        CHECK(out.frames[0].pixels[0] == 255);
        FilterSpec down{"brightness", 0, 0, {{"offset", "-255"}}};
        out = applyFilter(buf, down);
        CHECK(out.frames[0].pixels[0] == 0);
    }
    SUBCASE("grayscale integer formula on pure colors") {
        Frame f(11, 2);
        // pixel 0: white, pixel 1: red, pixel 2: green, pixel 3: blue
        f.pixels[0] = f.pixels[1] = f.pixels[2] = 255;
        f.pixels[3] = 255;
        f.pixels[9] = 0; f.pixels[10] = 255;
        f.pixels[14] = 255;
        VideoBuffer b{11, 2, 30, 1, {f}};
        FilterSpec g{"grayscale", std::nullopt, std::nullopt, {}};
        auto out = applyFilter(b, g);
        CHECK(out.frames[0].pixels[0] == 255); // (77+150+29)*255 >> 8
        CHECK(out.frames[0].pixels[3] == 76);  // 77*255 >> 8
        CHECK(out.frames[0].pixels[9] == 149); // 150*255 >> 8
        CHECK(out.frames[0].pixels[12] == 28); // 29*255 >> 8
    }
    SUBCASE("blackout full frame zeroes the range and nothing else") {
        FilterSpec f{"blackout", 1, 1, {{"x", "0"}, {"y", "0"}, {"w", "12"}, {"h", "4"}}};
        auto out = applyFilter(buf, f);
        CHECK(std::all_of(out.frames[1].pixels.begin(), out.frames[1].pixels.end(),
                          [](std::uint8_t b) { return b == 0; }));
        CHECK(out.frames[0] == buf.frames[0]);
        CHECK(out.frames[2] == buf.frames[2]);
    }
    SUBCASE("blackout rectangle out of frame rejected") {
        FilterSpec f{"blackout", 0, 0, {{"x", "10"}, {"y", "0"}, {"w", "5"}, {"h", "2"}}};
        CHECK_THROWS_AS(applyFilter(buf, f), Error);
    }
    SUBCASE("boxblur of a constant frame is the same frame") {
        FilterSpec f{"boxblur", 0, 0, {{"radius", "1"}}};
        auto out = applyFilter(buf, f);
        CHECK(out.frames[0] == buf.frames[0]);
    }
    SUBCASE("boxblur hand-computed 3x1 window with edge clamping") {
        // width 11, height 1 would be unusual; use height 2, radius 1: window
        // spans x-1..x+1 clamped and y-1..y+1 clamped (rows identical here).
        Frame f(11, 2);
        for (std::uint32_t x = 0; x < 11; ++x) {
            f.pixels[3 * x] = static_cast<std::uint8_t>(x * 10);
            f.pixels[3 * (11 + x)] = static_cast<std::uint8_t>(x * 10);
        }
        VideoBuffer b{11, 2, 30, 1, {f}};
        FilterSpec g{"boxblur", std::nullopt, std::nullopt, {{"radius", "1"}}};
        auto out = applyFilter(b, g);
        // x=0: samples R at x in {0,0,1} per row, three rows clamped identical:
        // sum = 3*(0+0+10) = 30, count 9 -> floor(30/9) = 3
        CHECK(out.frames[0].pixels[0] == 3);
        // x=5: sum = 3*(40+50+60) = 450 -> 50
        CHECK(out.frames[0].pixels[15] == 50);
    }
    SUBCASE("external filter is recognized but not replayable") {
        FilterSpec f{"atadenoise", 0, 0, {{"0b", "1.6"}}};
        CHECK_THROWS_WITH_AS(applyFilter(buf, f), doctest::Contains("cannot be replayed"), Error);
    }
    SUBCASE("unknown filter rejected") {
        FilterSpec f{"sepia", 0, 0, {}};
        CHECK_THROWS_AS(applyFilter(buf, f), Error);
    }
}

TEST_CASE("quant8 matches the brute-force oracle for all byte values") {
    for (std::uint64_t q : {2, 4, 8, 16, 32, 64}) {
        Frame f(11, 8); // 264 bytes, enough to hold all 256 values
        for (int v = 0; v < 256; ++v) f.pixels[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(v);
        VideoBuffer buf{11, 8, 30, 1, {f}};
        auto out = applyCompression(buf, "quant8", {{"q", std::to_string(q)}});
        for (int v = 0; v < 256; ++v)
            CHECK(out.frames[0].pixels[static_cast<std::size_t>(v)] ==
                  quantOracle(static_cast<std::uint8_t>(v), q));
    }
}

TEST_CASE("quant8 spot values for q=4") {
    VideoBuffer buf = numberedBuffer(1, 11, 2);
    buf.frames[0].pixels[0] = 0;
    buf.frames[0].pixels[1] = 255;
    buf.frames[0].pixels[2] = 100;
    auto out = applyCompression(buf, "quant8", {{"q", "4"}});
    CHECK(out.frames[0].pixels[0] == 2);
    CHECK(out.frames[0].pixels[1] == 254);
    CHECK(out.frames[0].pixels[2] == 102);
}

TEST_CASE("quant8 is idempotent for a fixed q") {
    for (std::uint64_t q : {2, 4, 8, 16, 32, 64}) {
        Frame f(11, 8);
        for (int v = 0; v < 256; ++v) f.pixels[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(v);
        VideoBuffer buf{11, 8, 30, 1, {f}};
        auto once = applyCompression(buf, "quant8", {{"q", std::to_string(q)}});
        auto twice = applyCompression(once, "quant8", {{"q", std::to_string(q)}});
        CHECK(once == twice);
    }
}

TEST_CASE("compression none is the identity; external codecs refuse to replay") {
    auto buf = numberedBuffer(3);
    CHECK(applyCompression(buf, "none", {}) == buf);
    CHECK_THROWS_WITH_AS(applyCompression(buf, "H.264", {{"CRF", "27"}}),
                         doctest::Contains("cannot be replayed"), Error);
    CHECK_THROWS_AS(applyCompression(buf, "madeup", {}), Error);
}

TEST_CASE("apply_edits pipeline") {
    auto fx = recordChain(16, 11, 10);
    Digest src = sha256(writeFchain(fx.chain));

    SUBCASE("single Compression none equals extract_content") {
        EditList list = parseVesl(
            R"({"edits":[{"editType":"compression","compressionParams":{"algorithm":"none"}}]})");
        CHECK(applyEdits(fx.chain, list) == extractContent(fx.chain));
    }
    SUBCASE("deterministic: repeated runs give byte-identical output") {
        EditList list = parseVesl(
            R"({"edits":[{"editType":"rangeDeletion","rangeDeletionParams":{"fromFrame":"2","toFrame":"4"}},)"
            R"({"editType":"videoFilter","videoFilterParams":[{"filterType":"grayscale","fromFrame":"0","toFrame":"3","typeParams":{}}]},)"
            R"({"editType":"compression","compressionParams":{"algorithm":"quant8","algorithmParams":{"q":"4"}}}]})");
        auto a = writeFvid(applyEdits(fx.chain, list));
        auto b = writeFvid(applyEdits(fx.chain, list));
        CHECK(a == b);
    }
    SUBCASE("permuting non-commuting edits changes the output hash") {
        EditList ab = parseVesl(
            R"({"edits":[{"editType":"rangeDeletion","rangeDeletionParams":{"fromFrame":"0","toFrame":"1"}},)"
            R"({"editType":"playbackSpeed","playbackSpeedParams":{"factorNum":"2","factorDen":"1","fromFrame":"0","toFrame":"5"}}]})");
        EditList ba = parseVesl(
            R"({"edits":[{"editType":"playbackSpeed","playbackSpeedParams":{"factorNum":"2","factorDen":"1","fromFrame":"0","toFrame":"5"}},)"
            R"({"editType":"rangeDeletion","rangeDeletionParams":{"fromFrame":"0","toFrame":"1"}}]})");
        auto ha = sha256(writeFvid(applyEdits(fx.chain, ab)));
        auto hb = sha256(writeFvid(applyEdits(fx.chain, ba)));
        CHECK(ha != hb);
    }
    SUBCASE("per-edit errors carry the edit index") {
        EditList list = parseVesl(
            R"({"edits":[{"editType":"rangeDeletion","rangeDeletionParams":{"fromFrame":"0","toFrame":"1"}},)"
            R"({"editType":"rangeDeletion","rangeDeletionParams":{"fromFrame":"8","toFrame":"9"}}]})");
        CHECK_THROWS_WITH_AS(applyEdits(fx.chain, list), doctest::Contains("edit 1"), Error);
    }
    (void)src;
}

TEST_CASE("reduction property: pure-selection pipelines only copy source frames") {
    auto fx = recordChain(16, 11, 8);
    EditList list = parseVesl(
        R"({"edits":[{"editType":"rangeDeletion","rangeDeletionParams":{"fromFrame":"1","toFrame":"2"}},)"
        R"({"editType":"playbackSpeed","playbackSpeedParams":{"factorNum":"1","factorDen":"2","fromFrame":"0","toFrame":"3"}}]})");
    VideoBuffer source = extractContent(fx.chain);
    VideoBuffer out = applyEdits(source, list);
    std::set<std::vector<std::uint8_t>> sourcePixels;
    for (const auto& f : source.frames) sourcePixels.insert(f.pixels);
    for (const auto& f : out.frames) CHECK(sourcePixels.count(f.pixels) == 1);
}

TEST_CASE("fvid container round-trip") {
    auto buf = numberedBuffer(3);
    auto bytes = writeFvid(buf);
    CHECK(readFvid(bytes) == buf);
    CHECK(writeFvid(readFvid(bytes)) == bytes);
    auto cut = bytes;
    cut.pop_back();
    CHECK_THROWS_AS(readFvid(cut), Error);
}
