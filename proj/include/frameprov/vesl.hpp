#pragma once

#include "frameprov/crypto.hpp"
#include "frameprov/keystore.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace frameprov {

struct RangeDeletion {
    std::uint64_t fromFrame = 0;
    std::uint64_t toFrame = 0;
    bool operator==(const RangeDeletion&) const = default;
};

struct PlaybackSpeed {
    std::uint64_t factorNum = 1;
    std::uint64_t factorDen = 1;
    std::uint64_t fromFrame = 0;
    std::uint64_t toFrame = 0;
    bool operator==(const PlaybackSpeed&) const = default;
};

/// One filter application. An absent range means the whole stream.
struct FilterSpec {
    std::string filterType;
    std::optional<std::uint64_t> fromFrame;
    std::optional<std::uint64_t> toFrame;
    std::map<std::string, std::string> typeParams;
    bool operator==(const FilterSpec&) const = default;
};

struct VideoFilter {
    std::vector<FilterSpec> filters;
    bool operator==(const VideoFilter&) const = default;
};

struct Compression {
    std::string algorithm;
    std::map<std::string, std::string> algorithmParams;
    bool operator==(const Compression&) const = default;
};

using Edit = std::variant<RangeDeletion, PlaybackSpeed, VideoFilter, Compression>;

/// An ordered, signed declaration of edits bound to a source artifact.
struct EditList {
    std::string veslVersion = "1.0";
    std::optional<Digest> sourceHash; // SHA-256 of the artifact this stage edits
    std::vector<Edit> edits;
    bool operator==(const EditList&) const = default;
};

/// Detached signature over the exact bytes of a VESL file.
struct EditSignature {
    std::string editorKeyId; // lowercase hex of SHA-256(publicKey)
    Signature signature{};
    bool operator==(const EditSignature&) const = default;
};

/// Parses a VESL document. Accepts the canonical form (ordered "edits" array)
/// and the lenient legacy style (repeated "editType" keys at top level, taken
/// in document order; missing commas tolerated).
EditList parseVesl(const std::string& text);

/// Deterministic serialization: sorted keys, no whitespace, decimal integer
/// strings, lowercase hex. Equal EditLists canonicalize identically.
std::string canonicalize(const EditList& list);

/// Checks the list against the artifact it claims to edit. Frame indices are
/// interpreted against the stream as already transformed by preceding edits.
/// Throws Error with the offending edit index on the first violation.
void validateAgainstSource(const EditList& list, std::uint64_t contentCount,
                           const Digest& sourceDigest);

EditSignature signVesl(std::span<const std::uint8_t> fileBytes, const KeyPair& editorKey);

enum class SigStatus { Ok, BadSignature, UnidentifiedEditor };

struct SigVerifyResult {
    SigStatus status = SigStatus::UnidentifiedEditor;
    std::optional<KeyRecord> editor; // present iff the key id is registered
};

/// Unregistered key ids verify as UnidentifiedEditor, not as a hard failure.
SigVerifyResult verifyVeslSignature(std::span<const std::uint8_t> fileBytes,
                                    const EditSignature& sig, const Keystore& keystore);

// Detached signature file: "FPSV" magic, version u8, keyId (32 raw), signature (64).
std::vector<std::uint8_t> writeSigFile(const EditSignature& sig);
EditSignature readSigFile(std::span<const std::uint8_t> bytes);

} // namespace frameprov
