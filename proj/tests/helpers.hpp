#pragma once

#include "frameprov/chain.hpp"
#include "frameprov/crypto.hpp"
#include "frameprov/keystore.hpp"
#include "frameprov/tee.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace frameprov::testing {

inline Seed seedBytes(std::uint8_t fill) {
    Seed s{};
    s.fill(fill);
    return s;
}

inline KeyPair fixedKey(std::uint8_t fill = 0x42) {
    return KeyPair::fromSeed(seedBytes(fill));
}

inline Frame randomFrame(std::uint32_t w, std::uint32_t h, std::mt19937& rng) {
    Frame f(w, h);
    std::uniform_int_distribution<int> dist(0, 255);
    for (auto& b : f.pixels) b = static_cast<std::uint8_t>(dist(rng));
    return f;
}

struct ChainFixture {
    KeyPair key;
    FrameChain chain;
};

/// Deterministic recorded chain: `count` random content frames at w x h,
/// optional snippet marks every `snippetEvery` feeds.
inline ChainFixture recordChain(std::uint32_t w, std::uint32_t h, std::uint64_t count,
                                std::uint32_t rngSeed = 7, std::uint64_t snippetEvery = 0,
                                std::uint32_t fpsNum = 30, std::uint32_t fpsDen = 1) {
    ChainFixture fx{fixedKey(), {}};
    std::mt19937 rng(rngSeed);
    RecordingSession session(fx.key, "test-sensor", 1700000000, 1, std::nullopt, w, h);
    for (std::uint64_t i = 0; i < count; ++i) {
        session.feed(randomFrame(w, h, rng));
        if (snippetEvery > 0 && (i + 1) % snippetEvery == 0) session.markSnippet();
    }
    fx.chain = session.stop(fpsNum, fpsDen);
    return fx;
}

inline Keystore storeWith(const KeyPair& key, KeyRole role = KeyRole::Device,
                          const std::string& owner = "Test Owner") {
    Keystore store;
    store.registerKey(key.publicKey, role, owner, 1700000000);
    return store;
}

} // namespace frameprov::testing
