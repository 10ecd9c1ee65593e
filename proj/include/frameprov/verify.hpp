#pragma once

#include "frameprov/chain.hpp"
#include "frameprov/edits.hpp"
#include "frameprov/keystore.hpp"
#include "frameprov/vesl.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace frameprov {

enum class Verdict { Valid, Invalid, PartiallyValid };
std::string verdictName(Verdict v);

enum class SnippetStatus { Ok, BadSignature, BrokenPrefix, OutOfRange, Unchecked };
std::string snippetStatusName(SnippetStatus s);

struct SnippetReport {
    std::uint64_t frameIndex = 0;
    SnippetStatus status = SnippetStatus::Unchecked;
    bool operator==(const SnippetReport&) const = default;
};

/// Per-edit-stage result of delayed verification.
struct StageReport {
    std::optional<KeyRecord> editor;  // absent => unidentified
    std::string signatureStatus;      // ok | failed | unidentified
    std::string sourceHashStatus;     // ok | mismatch | missing | skipped
    std::string replayStatus;         // ok | skipped | <error message>
    bool operator==(const StageReport&) const = default;
};

/// Structured verdict. Verification never throws on bad data; every failure
/// is a field here, with the first failure localized.
struct VerificationReport {
    Verdict verdict = Verdict::Invalid;
    std::string structuralError;                 // set when the input could not be parsed at all
    std::uint64_t linksChecked = 0;              // number of hash links examined
    std::optional<std::uint64_t> firstBrokenLink; // 0-based content index of the first bad link
    std::optional<GenesisMetadata> genesis;
    std::string genesisError;
    std::optional<TrailerMetadata> trailer;
    std::string trailerError;
    std::string contentCountStatus;              // ok | mismatch | unchecked
    std::optional<KeyRecord> deviceKey;          // present iff registered
    std::string deviceKeyStatus;                 // registered | unknown | unchecked
    std::string finalSignatureStatus;            // ok | failed | unchecked
    std::vector<SnippetReport> snippets;
    std::vector<StageReport> stages;             // delayed verification only
    std::optional<Digest> videoHash;             // replayed video hash
    std::string videoHashStatus;                 // ok | mismatch | skipped | "" (not applicable)

    bool operator==(const VerificationReport&) const = default;
};

/// Canonical JSON rendering (sorted keys, no whitespace). Two equal reports
/// serialize byte-identically.
std::string serializeReport(const VerificationReport& report);
/// Human-readable rendering for the CLI.
std::string renderReportText(const VerificationReport& report);

/// Batch verification: every hash link in order, genesis and trailer decode,
/// final and snippet signatures, device key lookup.
VerificationReport verifyChain(const FrameChain& chain, const Keystore& keystore);

/// Incremental verifier for streamed chains. Feeding after finalize throws;
/// all verification failures are statuses. The finalize report equals the
/// batch report on the same arrays.
class StreamVerifier {
public:
    explicit StreamVerifier(const Frame& genesisFrame);

    /// Checks the frame's hash band against the running digest; returns link ok.
    bool feed(const Frame& frame);
    VerificationReport finalize(const Frame& trailerFrame, const Keystore& keystore);

    std::uint64_t framesFed() const { return contentDigests_.size(); }
    std::optional<std::uint64_t> firstBrokenLink() const { return firstBrokenLink_; }

private:
    bool finalized_ = false;
    std::uint32_t width_ = 0;
    std::uint32_t height_ = 0;
    std::optional<GenesisMetadata> genesis_;
    std::string genesisError_;
    Digest runningDigest_{};
    std::vector<Digest> contentDigests_;
    std::optional<std::uint64_t> firstBrokenLink_;
};

/// Verifies the prefix links up to the snippet's frame and its signature.
/// `arrays` is [genesis, content 0, content 1, ...], at least through the
/// snippet's content index.
SnippetStatus verifySnippet(std::span<const Frame> arrays, const SnippetSignature& snippet,
                            const PublicKey& genesisKey);

/// One signed edit stage of a delayed-verification pipeline.
struct EditStage {
    std::vector<std::uint8_t> veslBytes; // exact file bytes (what the signature covers)
    EditSignature signature;
};

/// Replays the declared edits stage by stage and compares the hash of the
/// replayed video with the hash of the downloaded one. Stage 0 binds to the
/// SHA-256 of the .fchain file bytes; stage i>0 to the previous stage's
/// replayed .fvid bytes.
VerificationReport delayedVerify(std::span<const std::uint8_t> fchainBytes,
                                 const std::vector<EditStage>& stages,
                                 std::span<const std::uint8_t> fvidBytes,
                                 const Keystore& keystore);

} // namespace frameprov
