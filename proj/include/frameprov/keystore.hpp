#pragma once

#include "frameprov/crypto.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace frameprov {

enum class KeyRole { Device, Editor };

std::string roleName(KeyRole role);
KeyRole roleFromName(const std::string& name);

/// A published public key with its genesis timestamp and owner.
struct KeyRecord {
    std::string keyId; // lowercase hex of SHA-256(publicKey)
    PublicKey publicKey{};
    KeyRole role = KeyRole::Device;
    std::string owner;
    std::uint64_t registeredAt = 0;

    bool operator==(const KeyRecord&) const = default;
};

/// Append-only public key registry. Records are never mutated or deleted;
/// mutation produces a new snapshot that save() persists atomically.
class Keystore {
public:
    Keystore() = default;

    const KeyRecord& registerKey(const PublicKey& publicKey, KeyRole role, std::string owner,
                                 std::uint64_t registeredAt);
    std::optional<KeyRecord> lookup(const std::string& keyId) const;
    std::vector<KeyRecord> list(std::optional<KeyRole> role = std::nullopt) const;
    std::size_t size() const { return records_.size(); }

    std::string serialize() const;
    static Keystore deserialize(const std::string& text);

    /// Loads the registry file; a missing file yields an empty store.
    static Keystore load(const std::filesystem::path& path);
    /// Write-then-rename so readers never see a partial file.
    void save(const std::filesystem::path& path) const;

private:
    std::vector<KeyRecord> records_;
};

} // namespace frameprov
