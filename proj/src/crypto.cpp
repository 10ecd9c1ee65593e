#include "frameprov/crypto.hpp"

#include "frameprov/errors.hpp"

#include <sodium.h>

#include <algorithm>
#include <mutex>

namespace frameprov {

namespace {

void ensureSodium() {
    static std::once_flag once;
    std::call_once(once, [] {
        if (sodium_init() < 0) throw Error(Errc::Io, "libsodium initialization failed");
    });
}

} // namespace

Digest sha256(std::span<const std::uint8_t> data) {
    ensureSodium();
    Digest out{};
    crypto_hash_sha256(out.data(), data.data(), data.size());
    return out;
}

KeyPair KeyPair::fromSeed(const Seed& seed) {
    ensureSodium();
    KeyPair kp;
    kp.seed = seed;
    crypto_sign_seed_keypair(kp.publicKey.data(), kp.secretKey.data(), seed.data());
    return kp;
}

KeyPair KeyPair::generate() {
    ensureSodium();
    Seed seed;
    randombytes_buf(seed.data(), seed.size());
    return fromSeed(seed);
}

Signature sign(std::span<const std::uint8_t> message, const KeyPair& key) {
    ensureSodium();
    Signature sig{};
    crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(),
                         key.secretKey.data());
    return sig;
}

bool verifySignature(std::span<const std::uint8_t> message, const Signature& sig,
                     const PublicKey& key) {
    ensureSodium();
    return crypto_sign_verify_detached(sig.data(), message.data(), message.size(),
                                       key.data()) == 0;
}

std::string keyIdOf(const PublicKey& key) {
    return toHex(sha256(key));
}

std::string toHex(std::span<const std::uint8_t> bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

std::vector<std::uint8_t> fromHex(const std::string& hex) {
    require(hex.size() % 2 == 0, Errc::Parse, "hex string has odd length");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    std::vector<std::uint8_t> out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = nibble(hex[2 * i]);
        int lo = nibble(hex[2 * i + 1]);
        require(hi >= 0 && lo >= 0, Errc::Parse, "invalid hex digit");
        out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return out;
}

std::vector<std::uint8_t> writeKeyFile(const KeyPair& key) {
    std::vector<std::uint8_t> out = {'F', 'P', 'S', 'K'};
    out.insert(out.end(), key.seed.begin(), key.seed.end());
    return out;
}

KeyPair readKeyFile(std::span<const std::uint8_t> bytes) {
    require(bytes.size() == 36, Errc::LengthMismatch, "key file must be 36 bytes");
    require(bytes[0] == 'F' && bytes[1] == 'P' && bytes[2] == 'S' && bytes[3] == 'K',
            Errc::BadMagic, "not a private key file");
    Seed seed;
    std::copy(bytes.begin() + 4, bytes.end(), seed.begin());
    return KeyPair::fromSeed(seed);
}

} // namespace frameprov
