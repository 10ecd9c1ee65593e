#include "frameprov/keystore.hpp"

#include "frameprov/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>

namespace frameprov {

using nlohmann::json;

std::string roleName(KeyRole role) {
    return role == KeyRole::Device ? "device" : "editor";
}

KeyRole roleFromName(const std::string& name) {
    if (name == "device") return KeyRole::Device;
    if (name == "editor") return KeyRole::Editor;
    throw Error(Errc::Parse, "unknown key role: " + name);
}

const KeyRecord& Keystore::registerKey(const PublicKey& publicKey, KeyRole role,
                                       std::string owner, std::uint64_t registeredAt) {
    KeyRecord record;
    record.keyId = keyIdOf(publicKey);
    record.publicKey = publicKey;
    record.role = role;
    record.owner = std::move(owner);
    record.registeredAt = registeredAt;
    if (lookup(record.keyId))
        throw Error(Errc::Duplicate, "key already registered: " + record.keyId);
    records_.push_back(std::move(record));
    return records_.back();
}

std::optional<KeyRecord> Keystore::lookup(const std::string& keyId) const {
    auto it = std::find_if(records_.begin(), records_.end(),
                           [&](const KeyRecord& r) { return r.keyId == keyId; });
    if (it == records_.end()) return std::nullopt;
    return *it;
}

std::vector<KeyRecord> Keystore::list(std::optional<KeyRole> role) const {
    std::vector<KeyRecord> out;
    for (const auto& r : records_)
        if (!role || r.role == *role) out.push_back(r);
    return out;
}

std::string Keystore::serialize() const {
    json arr = json::array();
    for (const auto& r : records_) {
        arr.push_back({{"keyId", r.keyId},
                       {"owner", r.owner},
                       {"publicKey", toHex(r.publicKey)},
                       {"registeredAt", r.registeredAt},
                       {"role", roleName(r.role)}});
    }
    return arr.dump(2) + "\n";
}

Keystore Keystore::deserialize(const std::string& text) {
    json arr = json::parse(text, nullptr, false);
    require(!arr.is_discarded() && arr.is_array(), Errc::Parse,
            "registry file is not a JSON array");
    Keystore store;
    for (const auto& item : arr) {
        require(item.is_object(), Errc::Parse, "registry entry is not an object");
        KeyRecord r;
        try {
            r.keyId = item.at("keyId").get<std::string>();
            auto keyBytes = fromHex(item.at("publicKey").get<std::string>());
            require(keyBytes.size() == 32, Errc::Parse, "publicKey must be 32 bytes");
            std::copy(keyBytes.begin(), keyBytes.end(), r.publicKey.begin());
            r.role = roleFromName(item.at("role").get<std::string>());
            r.owner = item.at("owner").get<std::string>();
            r.registeredAt = item.at("registeredAt").get<std::uint64_t>();
        } catch (const json::exception& e) {
            throw Error(Errc::Parse, std::string("malformed registry entry: ") + e.what());
        }
        require(r.keyId == keyIdOf(r.publicKey), Errc::Integrity,
                "keyId does not match SHA-256 of publicKey: " + r.keyId);
        require(!store.lookup(r.keyId), Errc::Duplicate, "duplicate keyId in registry: " + r.keyId);
        store.records_.push_back(std::move(r));
    }
    return store;
}

Keystore Keystore::load(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) return Keystore{};
    std::ifstream in(path, std::ios::binary);
    require(in.good(), Errc::Io, "cannot open registry file: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize(text);
}

void Keystore::save(const std::filesystem::path& path) const {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        require(out.good(), Errc::Io, "cannot write registry file: " + tmp.string());
        out << serialize();
        require(out.good(), Errc::Io, "write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace frameprov
