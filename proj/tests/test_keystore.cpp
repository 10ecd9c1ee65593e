#include "frameprov/errors.hpp"
#include "frameprov/keystore.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace frameprov;
using namespace frameprov::testing;

namespace fs = std::filesystem;

// Computed with an independent SHA-256 implementation over 32 zero bytes.
static const char* kZeroKeyId =
    "66687aadf862bd776c8fc18b8e9f8e20089714856ee233b3902a591d0d5f2925";

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / fs::path("fp-keystore-test")) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("register and lookup round-trip") {
    KeyPair key = fixedKey(0x07);
    Keystore store;
    const KeyRecord& rec = store.registerKey(key.publicKey, KeyRole::Device, "Alice", 1700000000);
    CHECK(rec.keyId == keyIdOf(key.publicKey));
    auto found = store.lookup(rec.keyId);
    REQUIRE(found.has_value());
    CHECK(found->owner == "Alice");
    CHECK(found->publicKey == key.publicKey);
    CHECK(found->role == KeyRole::Device);
    CHECK(found->registeredAt == 1700000000);
    CHECK_FALSE(store.lookup(kZeroKeyId).has_value());
}

TEST_CASE("key id of the all-zero public key matches the frozen constant") {
    CHECK(keyIdOf(PublicKey{}) == kZeroKeyId);
}

TEST_CASE("duplicate registration rejected") {
    KeyPair key = fixedKey(0x07);
    Keystore store;
    store.registerKey(key.publicKey, KeyRole::Device, "Alice", 1);
    CHECK_THROWS_AS(store.registerKey(key.publicKey, KeyRole::Editor, "Bob", 2), Error);
    CHECK(store.size() == 1);
}

TEST_CASE("listing filters by role and preserves insertion order") {
    Keystore store;
    store.registerKey(fixedKey(0x01).publicKey, KeyRole::Device, "Cam A", 1);
    store.registerKey(fixedKey(0x02).publicKey, KeyRole::Editor, "Studio", 2);
    store.registerKey(fixedKey(0x03).publicKey, KeyRole::Device, "Cam B", 3);

    auto all = store.list();
    REQUIRE(all.size() == 3);
    CHECK(all[0].owner == "Cam A");
    CHECK(all[1].owner == "Studio");
    CHECK(all[2].owner == "Cam B");

    auto devices = store.list(KeyRole::Device);
    REQUIRE(devices.size() == 2);
    CHECK(devices[0].owner == "Cam A");
    CHECK(devices[1].owner == "Cam B");
    CHECK(store.list(KeyRole::Editor).size() == 1);
}

TEST_CASE("serialize/deserialize round-trip is byte-identical") {
    Keystore store;
    store.registerKey(fixedKey(0x01).publicKey, KeyRole::Device, "Cam A", 1700000001);
    store.registerKey(fixedKey(0x02).publicKey, KeyRole::Editor, "Studio", 1700000002);
    std::string text = store.serialize();
    Keystore back = Keystore::deserialize(text);
    CHECK(back.serialize() == text);
    CHECK(back.list() == store.list());
}

TEST_CASE("deserialize rejects a tampered key id") {
    Keystore store;
    store.registerKey(fixedKey(0x01).publicKey, KeyRole::Device, "Cam A", 1);
    std::string text = store.serialize();
    std::string id = keyIdOf(fixedKey(0x01).publicKey);
    auto pos = text.find(id);
    REQUIRE(pos != std::string::npos);
    text[pos] = (text[pos] == '0') ? '1' : '0';
    CHECK_THROWS_WITH_AS(Keystore::deserialize(text), doctest::Contains("keyId"), Error);
}

TEST_CASE("file persistence") {
    TempDir tmp;
    fs::path file = tmp.path / "keys.json";

    SUBCASE("missing file loads as an empty store") {
        Keystore store = Keystore::load(file);
        CHECK(store.size() == 0);
    }
    SUBCASE("save then load round-trips") {
        Keystore store;
        store.registerKey(fixedKey(0x01).publicKey, KeyRole::Device, "Cam A", 1);
        store.save(file);
        CHECK(Keystore::load(file).serialize() == store.serialize());
    }
    SUBCASE("save leaves no temporary file behind") {
        Keystore store;
        store.registerKey(fixedKey(0x01).publicKey, KeyRole::Device, "Cam A", 1);
        store.save(file);
        std::size_t entries = 0;
        for (const auto& e : fs::directory_iterator(tmp.path)) {
            ++entries;
            CHECK(e.path() == file);
        }
        CHECK(entries == 1);
    }
    SUBCASE("corrupt file is an error, not an empty store") {
        std::ofstream(file) << "not json";
        CHECK_THROWS_AS(Keystore::load(file), Error);
    }
}

TEST_CASE("role names round-trip") {
    CHECK(roleName(KeyRole::Device) == "device");
    CHECK(roleName(KeyRole::Editor) == "editor");
    CHECK(roleFromName("device") == KeyRole::Device);
    CHECK(roleFromName("editor") == KeyRole::Editor);
    CHECK_THROWS_AS(roleFromName("admin"), Error);
}
