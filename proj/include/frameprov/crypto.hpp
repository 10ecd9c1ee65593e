#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace frameprov {

using Digest = std::array<std::uint8_t, 32>;
using PublicKey = std::array<std::uint8_t, 32>;
using Seed = std::array<std::uint8_t, 32>;
using Signature = std::array<std::uint8_t, 64>;

Digest sha256(std::span<const std::uint8_t> data);

/// Ed25519 key pair. The 64-byte secret key is the libsodium expanded form.
struct KeyPair {
    Seed seed{};
    PublicKey publicKey{};
    std::array<std::uint8_t, 64> secretKey{};

    static KeyPair fromSeed(const Seed& seed);
    static KeyPair generate();
};

Signature sign(std::span<const std::uint8_t> message, const KeyPair& key);
bool verifySignature(std::span<const std::uint8_t> message, const Signature& sig,
                     const PublicKey& key);

/// keyId = lowercase hex of SHA-256(publicKey).
std::string keyIdOf(const PublicKey& key);

std::string toHex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> fromHex(const std::string& hex);

// Private key file: "FPSK" magic + 32-byte seed.
std::vector<std::uint8_t> writeKeyFile(const KeyPair& key);
KeyPair readKeyFile(std::span<const std::uint8_t> bytes);

} // namespace frameprov
