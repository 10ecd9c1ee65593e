#include "frameprov/edits.hpp"
#include "frameprov/errors.hpp"
#include "frameprov/verify.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <random>

using namespace frameprov;
using namespace frameprov::testing;

namespace {

VerificationReport streamVerify(const FrameChain& chain, const Keystore& store) {
    StreamVerifier sv(chain.genesisFrame());
    for (std::size_t i = 0; i < chain.contentCount(); ++i) sv.feed(chain.contentFrame(i));
    return sv.finalize(chain.trailerFrame(), store);
}

} // namespace

TEST_CASE("valid chain: batch report is fully green") {
    auto fx = recordChain(16, 11, 6, 7, 2);
    Keystore store = storeWith(fx.key);
    VerificationReport r = verifyChain(fx.chain, store);
    CHECK(r.verdict == Verdict::Valid);
    CHECK(r.linksChecked == 6);
    CHECK_FALSE(r.firstBrokenLink.has_value());
    CHECK(r.contentCountStatus == "ok");
    CHECK(r.deviceKeyStatus == "registered");
    CHECK(r.finalSignatureStatus == "ok");
    REQUIRE(r.snippets.size() == 3);
    for (const auto& s : r.snippets) CHECK(s.status == SnippetStatus::Ok);
}

TEST_CASE("streaming and batch reports are byte-identical") {
    SUBCASE("on a valid chain") {
        auto fx = recordChain(16, 11, 6, 7, 2);
        Keystore store = storeWith(fx.key);
        CHECK(serializeReport(streamVerify(fx.chain, store)) ==
              serializeReport(verifyChain(fx.chain, store)));
    }
    SUBCASE("on mutated chains") {
        auto fx = recordChain(16, 11, 4, 9, 2);
        Keystore store = storeWith(fx.key);
        std::mt19937 rng(11);
        auto bytes = writeFchain(fx.chain);
        for (int trial = 0; trial < 40; ++trial) {
            auto mutated = bytes;
            std::size_t pos = rng() % mutated.size();
            mutated[pos] ^= static_cast<std::uint8_t>(1 + rng() % 255);
            FrameChain chain;
            try {
                chain = readFchain(mutated);
            } catch (const Error&) {
                continue; // container-level damage has no chain to compare on
            }
            CHECK(serializeReport(streamVerify(chain, store)) ==
                  serializeReport(verifyChain(chain, store)));
        }
    }
}

TEST_CASE("mutation localization") {
    auto fx = recordChain(16, 11, 5);
    Keystore store = storeWith(fx.key);

    SUBCASE("hash band damage in content frame k breaks link k") {
        FrameChain chain = fx.chain;
        chain.arrays[3].pixels[0] ^= 0x01; // content frame 2, row 0
        VerificationReport r = verifyChain(chain, store);
        CHECK(r.verdict == Verdict::Invalid);
        REQUIRE(r.firstBrokenLink.has_value());
        CHECK(*r.firstBrokenLink == 2);
    }
    SUBCASE("pixel damage outside row 0 of frame k breaks link k+1") {
        FrameChain chain = fx.chain;
        std::size_t rowBytes = 3ull * 16;
        chain.arrays[3].pixels[rowBytes + 5] ^= 0x01; // content frame 2, row 1
        VerificationReport r = verifyChain(chain, store);
        CHECK(r.verdict == Verdict::Invalid);
        REQUIRE(r.firstBrokenLink.has_value());
        CHECK(*r.firstBrokenLink == 3);
    }
    SUBCASE("damage to the last content frame body breaks the final signature") {
        FrameChain chain = fx.chain;
        std::size_t rowBytes = 3ull * 16;
        chain.arrays[5].pixels[rowBytes + 1] ^= 0x01;
        VerificationReport r = verifyChain(chain, store);
        CHECK(r.verdict == Verdict::Invalid);
        CHECK_FALSE(r.firstBrokenLink.has_value());
        CHECK(r.finalSignatureStatus == "failed");
    }
    SUBCASE("swapping two content frames breaks the chain") {
        FrameChain chain = fx.chain;
        std::swap(chain.arrays[2], chain.arrays[3]);
        VerificationReport r = verifyChain(chain, store);
        CHECK(r.verdict == Verdict::Invalid);
        REQUIRE(r.firstBrokenLink.has_value());
        CHECK(*r.firstBrokenLink == 1);
    }
    SUBCASE("dropping a content frame is caught by count and links") {
        FrameChain chain = fx.chain;
        chain.arrays.erase(chain.arrays.begin() + 3);
        VerificationReport r = verifyChain(chain, store);
        CHECK(r.verdict == Verdict::Invalid);
    }
}

TEST_CASE("unknown device key downgrades to partially-valid") {
    auto fx = recordChain(16, 11, 3);
    Keystore empty;
    VerificationReport r = verifyChain(fx.chain, empty);
    CHECK(r.verdict == Verdict::PartiallyValid);
    CHECK(r.deviceKeyStatus == "unknown");
    CHECK(r.finalSignatureStatus == "ok"); // signature still checks under the claimed key
}

TEST_CASE("unknown device key never masks a hard failure") {
    auto fx = recordChain(16, 11, 3);
    FrameChain chain = fx.chain;
    chain.arrays[2].pixels[0] ^= 0x01;
    Keystore empty;
    CHECK(verifyChain(chain, empty).verdict == Verdict::Invalid);
}

TEST_CASE("stream verifier") {
    auto fx = recordChain(16, 11, 4);
    Keystore store = storeWith(fx.key);

    SUBCASE("feed reports per-link results") {
        StreamVerifier sv(fx.chain.genesisFrame());
        CHECK(sv.feed(fx.chain.contentFrame(0)));
        Frame bad = fx.chain.contentFrame(1);
        bad.pixels[0] ^= 0x01;
        CHECK_FALSE(sv.feed(bad));
        REQUIRE(sv.firstBrokenLink().has_value());
        CHECK(*sv.firstBrokenLink() == 1);
    }
    SUBCASE("feed after finalize throws") {
        StreamVerifier sv(fx.chain.genesisFrame());
        for (std::size_t i = 0; i < 4; ++i) sv.feed(fx.chain.contentFrame(i));
        sv.finalize(fx.chain.trailerFrame(), store);
        CHECK_THROWS_AS(sv.feed(fx.chain.contentFrame(0)), Error);
    }
    SUBCASE("garbage genesis frame is a status, not an exception") {
        Frame junk(16, 11);
        StreamVerifier sv(junk);
        sv.feed(fx.chain.contentFrame(0));
        VerificationReport r = sv.finalize(fx.chain.trailerFrame(), store);
        CHECK(r.verdict == Verdict::Invalid);
        CHECK_FALSE(r.genesisError.empty());
    }
}

TEST_CASE("snippet verification") {
    auto fx = recordChain(16, 11, 10, 7, 2);
    Keystore store = storeWith(fx.key);
    TrailerMetadata trailer = parseTrailer(fx.chain.trailerFrame());
    REQUIRE(trailer.snippets.size() == 5); // indices 1,3,5,7,9
    GenesisMetadata genesis = parseGenesis(fx.chain.genesisFrame());

    SUBCASE("all snippets verify on an intact chain") {
        for (const auto& s : trailer.snippets)
            CHECK(verifySnippet(fx.chain.arrays, s, genesis.devicePublicKey) == SnippetStatus::Ok);
    }
    SUBCASE("corrupting content frame 7 splits the snippet set") {
        FrameChain chain = fx.chain;
        chain.arrays[8].pixels[50] ^= 0x01; // content frame 7
        VerificationReport r = verifyChain(chain, store);
        CHECK(r.verdict == Verdict::Invalid);
        REQUIRE(r.snippets.size() == 5);
        CHECK(r.snippets[0].status == SnippetStatus::Ok);          // 1
        CHECK(r.snippets[1].status == SnippetStatus::Ok);          // 3
        CHECK(r.snippets[2].status == SnippetStatus::Ok);          // 5
        CHECK(r.snippets[3].status == SnippetStatus::BadSignature); // 7: its own digest changed
        CHECK(r.snippets[4].status == SnippetStatus::BrokenPrefix); // 9: prefix link broken
    }
    SUBCASE("snippet index beyond the supplied arrays is out of range") {
        SnippetSignature s{42, Signature{}};
        CHECK(verifySnippet(fx.chain.arrays, s, genesis.devicePublicKey) ==
              SnippetStatus::OutOfRange);
    }
    SUBCASE("forged snippet signature") {
        SnippetSignature s = trailer.snippets[0];
        s.signature[10] ^= 0x01;
        CHECK(verifySnippet(fx.chain.arrays, s, genesis.devicePublicKey) ==
              SnippetStatus::BadSignature);
    }
}

TEST_CASE("report serialization") {
    auto fx = recordChain(16, 11, 3);
    Keystore store = storeWith(fx.key);
    VerificationReport r = verifyChain(fx.chain, store);
    std::string json = serializeReport(r);
    CHECK(json == serializeReport(r));
    CHECK(json.find("\"verdict\":\"valid\"") != std::string::npos);
    CHECK_FALSE(renderReportText(r).empty());
}

namespace {

struct Pipeline {
    ChainFixture fx;
    Keystore store;
    KeyPair editorKey;
    std::vector<std::uint8_t> fchainBytes;
    std::vector<EditStage> stages;
    std::vector<std::uint8_t> fvidBytes;
};

EditStage makeStage(const std::string& editsJson, const Digest& sourceHash, const KeyPair& editor) {
    EditList list = parseVesl(R"({"edits":)" + editsJson + "}");
    list.sourceHash = sourceHash;
    std::string text = canonicalize(list);
    std::vector<std::uint8_t> bytes(text.begin(), text.end());
    return {bytes, signVesl(bytes, editor)};
}

Pipeline honestPipeline() {
    Pipeline p{recordChain(16, 11, 8), {}, fixedKey(0x33), {}, {}, {}};
    p.store.registerKey(p.fx.key.publicKey, KeyRole::Device, "Camera", 1700000000);
    p.store.registerKey(p.editorKey.publicKey, KeyRole::Editor, "Studio", 1700000000);
    p.fchainBytes = writeFchain(p.fx.chain);

    p.stages.push_back(makeStage(
        R"([{"editType":"rangeDeletion","rangeDeletionParams":{"fromFrame":"2","toFrame":"3"}}])",
        sha256(p.fchainBytes), p.editorKey));
    VideoBuffer v1 = applyEdits(p.fx.chain, parseVesl(std::string(p.stages[0].veslBytes.begin(),
                                                                  p.stages[0].veslBytes.end())));
    auto v1Bytes = writeFvid(v1);

    p.stages.push_back(makeStage(
        R"([{"editType":"videoFilter","videoFilterParams":[{"filterType":"grayscale"}]}])",
        sha256(v1Bytes), p.editorKey));
    VideoBuffer v2 = applyEdits(v1, parseVesl(std::string(p.stages[1].veslBytes.begin(),
                                                          p.stages[1].veslBytes.end())));
    p.fvidBytes = writeFvid(v2);
    return p;
}

} // namespace

TEST_CASE("delayed verification") {
    Pipeline p = honestPipeline();

    SUBCASE("honest multi-stage pipeline is valid") {
        VerificationReport r = delayedVerify(p.fchainBytes, p.stages, p.fvidBytes, p.store);
        CHECK(r.verdict == Verdict::Valid);
        REQUIRE(r.stages.size() == 2);
        for (const auto& s : r.stages) {
            CHECK(s.signatureStatus == "ok");
            CHECK(s.sourceHashStatus == "ok");
            CHECK(s.replayStatus == "ok");
            REQUIRE(s.editor.has_value());
            CHECK(s.editor->owner == "Studio");
        }
        CHECK(r.videoHashStatus == "ok");
    }
    SUBCASE("one flipped byte in the downloaded video fails the hash compare") {
        auto tampered = p.fvidBytes;
        tampered[tampered.size() / 2] ^= 0x01;
        VerificationReport r = delayedVerify(p.fchainBytes, p.stages, tampered, p.store);
        CHECK(r.verdict == Verdict::Invalid);
        CHECK(r.videoHashStatus == "mismatch");
    }
    SUBCASE("an undeclared extra edit fails the hash compare") {
        VideoBuffer sneaky = readFvid(p.fvidBytes);
        FilterSpec extra{"brightness", std::nullopt, std::nullopt, {{"offset", "10"}}};
        VerificationReport r = delayedVerify(p.fchainBytes, p.stages,
                                             writeFvid(applyFilter(sneaky, extra)), p.store);
        CHECK(r.verdict == Verdict::Invalid);
        CHECK(r.videoHashStatus == "mismatch");
    }
    SUBCASE("stages out of order break the source hash binding") {
        std::swap(p.stages[0], p.stages[1]);
        VerificationReport r = delayedVerify(p.fchainBytes, p.stages, p.fvidBytes, p.store);
        CHECK(r.verdict == Verdict::Invalid);
        CHECK(r.stages[0].sourceHashStatus == "mismatch");
    }
    SUBCASE("tampered VESL bytes fail the stage signature") {
        p.stages[0].veslBytes[5] ^= 0x01;
        VerificationReport r = delayedVerify(p.fchainBytes, p.stages, p.fvidBytes, p.store);
        CHECK(r.verdict == Verdict::Invalid);
        CHECK(r.stages[0].signatureStatus == "failed");
    }
    SUBCASE("unregistered editor downgrades an otherwise honest pipeline") {
        Keystore deviceOnly = storeWith(p.fx.key);
        VerificationReport r = delayedVerify(p.fchainBytes, p.stages, p.fvidBytes, deviceOnly);
        CHECK(r.verdict == Verdict::PartiallyValid);
        CHECK(r.stages[0].signatureStatus == "unidentified");
        CHECK(r.videoHashStatus == "ok");
    }
    SUBCASE("corrupt source chain is invalid before any stage replay") {
        auto bad = p.fchainBytes;
        bad[bad.size() - 100] ^= 0x01;
        VerificationReport r = delayedVerify(bad, p.stages, p.fvidBytes, p.store);
        CHECK(r.verdict == Verdict::Invalid);
    }
    SUBCASE("unparseable chain bytes are a structural error, not an exception") {
        std::vector<std::uint8_t> junk = {1, 2, 3};
        VerificationReport r = delayedVerify(junk, p.stages, p.fvidBytes, p.store);
        CHECK(r.verdict == Verdict::Invalid);
        CHECK_FALSE(r.structuralError.empty());
    }
}
