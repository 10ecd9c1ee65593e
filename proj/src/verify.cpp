#include "frameprov/verify.hpp"

#include "frameprov/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace frameprov {

using nlohmann::json;

std::string verdictName(Verdict v) {
    switch (v) {
    case Verdict::Valid: return "valid";
    case Verdict::Invalid: return "invalid";
    default: return "partially-valid";
    }
}

std::string snippetStatusName(SnippetStatus s) {
    switch (s) {
    case SnippetStatus::Ok: return "ok";
    case SnippetStatus::BadSignature: return "bad-signature";
    case SnippetStatus::BrokenPrefix: return "broken-prefix";
    case SnippetStatus::OutOfRange: return "out-of-range";
    default: return "unchecked";
    }
}

namespace {

/// Everything the link-walk phase produces; batch and streaming both fill one
/// of these, and report assembly is shared.
struct ChainScan {
    std::optional<GenesisMetadata> genesis;
    std::string genesisError;
    std::vector<Digest> contentDigests;
    std::optional<std::uint64_t> firstBrokenLink;
};

void computeVerdict(VerificationReport& r) {
    bool hard = !r.structuralError.empty() || r.firstBrokenLink.has_value() ||
                !r.genesisError.empty() || !r.trailerError.empty() ||
                r.contentCountStatus == "mismatch" || r.finalSignatureStatus == "failed" ||
                r.finalSignatureStatus == "unchecked" || r.videoHashStatus == "mismatch" ||
                r.videoHashStatus == "skipped";
    for (const auto& s : r.snippets)
        if (s.status != SnippetStatus::Ok) hard = true;
    bool soft = r.deviceKeyStatus == "unknown";
    for (const auto& s : r.stages) {
        if (s.signatureStatus == "failed" || s.sourceHashStatus != "ok" || s.replayStatus != "ok")
            hard = true;
        if (s.signatureStatus == "unidentified") soft = true;
    }
    r.verdict = hard ? Verdict::Invalid : (soft ? Verdict::PartiallyValid : Verdict::Valid);
}

VerificationReport assembleChainReport(const ChainScan& scan, const Frame& trailerFrame,
                                       const Keystore& keystore) {
    VerificationReport r;
    r.genesis = scan.genesis;
    r.genesisError = scan.genesisError;
    r.linksChecked = scan.contentDigests.size();
    r.firstBrokenLink = scan.firstBrokenLink;

    try {
        r.trailer = parseTrailer(trailerFrame);
        r.trailerError.clear();
    } catch (const Error& e) {
        r.trailerError = e.what();
    }

    if (r.trailer) {
        r.contentCountStatus =
            (r.trailer->contentCount == scan.contentDigests.size()) ? "ok" : "mismatch";
    } else {
        r.contentCountStatus = "unchecked";
    }

    if (r.genesis) {
        auto record = keystore.lookup(keyIdOf(r.genesis->devicePublicKey));
        if (record) {
            r.deviceKey = record;
            r.deviceKeyStatus = "registered";
        } else {
            r.deviceKeyStatus = "unknown";
        }
    } else {
        r.deviceKeyStatus = "unchecked";
    }

    if (r.genesis && r.trailer && !scan.contentDigests.empty()) {
        auto msg = finalMessage(scan.contentDigests.back(), r.trailer->contentCount,
                                r.trailer->fpsNum, r.trailer->fpsDen);
        r.finalSignatureStatus =
            verifySignature(msg, r.trailer->finalSignature, r.genesis->devicePublicKey) ? "ok"
                                                                                        : "failed";
    } else {
        r.finalSignatureStatus = "unchecked";
    }

    if (r.trailer) {
        for (const auto& snippet : r.trailer->snippets) {
            SnippetReport sr;
            sr.frameIndex = snippet.frameIndex;
            if (snippet.frameIndex >= scan.contentDigests.size()) {
                sr.status = SnippetStatus::OutOfRange;
            } else if (scan.firstBrokenLink && *scan.firstBrokenLink <= snippet.frameIndex) {
                sr.status = SnippetStatus::BrokenPrefix;
            } else if (!r.genesis) {
                sr.status = SnippetStatus::Unchecked;
            } else {
                auto msg = snippetMessage(scan.contentDigests[snippet.frameIndex],
                                          snippet.frameIndex);
                sr.status = verifySignature(msg, snippet.signature, r.genesis->devicePublicKey)
                                ? SnippetStatus::Ok
                                : SnippetStatus::BadSignature;
            }
            r.snippets.push_back(sr);
        }
    }

    computeVerdict(r);
    return r;
}

json genesisJson(const GenesisMetadata& g) {
    json j;
    j["anchorHash"] = g.anchorHash ? json(toHex(*g.anchorHash)) : json(nullptr);
    j["devicePublicKey"] = toHex(g.devicePublicKey);
    j["sensorId"] = g.sensorId;
    j["sequenceNumber"] = g.sequenceNumber;
    j["timestamp"] = g.timestamp;
    j["version"] = g.version;
    return j;
}

json keyRecordJson(const KeyRecord& k) {
    json j;
    j["keyId"] = k.keyId;
    j["owner"] = k.owner;
    j["publicKey"] = toHex(k.publicKey);
    j["registeredAt"] = k.registeredAt;
    j["role"] = roleName(k.role);
    return j;
}

} // namespace

std::string serializeReport(const VerificationReport& r) {
    json j;
    j["verdict"] = verdictName(r.verdict);
    j["structuralError"] = r.structuralError.empty() ? json(nullptr) : json(r.structuralError);
    json chain;
    chain["linksChecked"] = r.linksChecked;
    chain["firstBrokenLink"] = r.firstBrokenLink ? json(*r.firstBrokenLink) : json(nullptr);
    j["chain"] = std::move(chain);
    j["genesis"] = r.genesis ? genesisJson(*r.genesis) : json(nullptr);
    j["genesisError"] = r.genesisError.empty() ? json(nullptr) : json(r.genesisError);
    if (r.trailer) {
        json t;
        t["contentCount"] = r.trailer->contentCount;
        t["fpsDen"] = r.trailer->fpsDen;
        t["fpsNum"] = r.trailer->fpsNum;
        t["snippetCount"] = r.trailer->snippets.size();
        j["trailer"] = std::move(t);
    } else {
        j["trailer"] = nullptr;
    }
    j["trailerError"] = r.trailerError.empty() ? json(nullptr) : json(r.trailerError);
    j["contentCountStatus"] = r.contentCountStatus;
    j["deviceKey"] = r.deviceKey ? keyRecordJson(*r.deviceKey) : json(nullptr);
    j["deviceKeyStatus"] = r.deviceKeyStatus;
    j["finalSignature"] = r.finalSignatureStatus;
    json snippets = json::array();
    for (const auto& s : r.snippets)
        snippets.push_back({{"frameIndex", s.frameIndex}, {"status", snippetStatusName(s.status)}});
    j["snippets"] = std::move(snippets);
    json stages = json::array();
    for (const auto& s : r.stages) {
        json sj;
        sj["editor"] = s.editor ? keyRecordJson(*s.editor) : json("unidentified");
        sj["replay"] = s.replayStatus;
        sj["signature"] = s.signatureStatus;
        sj["sourceHash"] = s.sourceHashStatus;
        stages.push_back(std::move(sj));
    }
    j["stages"] = std::move(stages);
    j["videoHash"] = r.videoHash ? json(toHex(*r.videoHash)) : json(nullptr);
    j["videoHashStatus"] = r.videoHashStatus.empty() ? json(nullptr) : json(r.videoHashStatus);
    // sensorId comes from raw frame bytes and need not be UTF-8; replace
    // invalid sequences instead of throwing so serialization stays total.
    return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::string renderReportText(const VerificationReport& r) {
    std::ostringstream out;
    out << "verdict: " << verdictName(r.verdict) << "\n";
    if (!r.structuralError.empty()) out << "structural error: " << r.structuralError << "\n";
    out << "hash links: " << r.linksChecked << " checked, ";
    if (r.firstBrokenLink)
        out << "first broken at content frame " << *r.firstBrokenLink << "\n";
    else
        out << "all intact\n";
    if (r.genesis) {
        out << "device key: " << keyIdOf(r.genesis->devicePublicKey) << " (" << r.deviceKeyStatus;
        if (r.deviceKey) out << ", owner \"" << r.deviceKey->owner << "\"";
        out << ")\n";
        out << "recorded: timestamp " << r.genesis->timestamp << ", sequence "
            << r.genesis->sequenceNumber << ", sensor \"" << r.genesis->sensorId << "\"\n";
    } else if (!r.genesisError.empty()) {
        out << "genesis: " << r.genesisError << "\n";
    }
    if (r.trailer) {
        out << "trailer: " << r.trailer->contentCount << " frames at " << r.trailer->fpsNum << "/"
            << r.trailer->fpsDen << " fps (count " << r.contentCountStatus << ")\n";
    } else if (!r.trailerError.empty()) {
        out << "trailer: " << r.trailerError << "\n";
    }
    out << "final signature: " << r.finalSignatureStatus << "\n";
    for (const auto& s : r.snippets)
        out << "snippet @" << s.frameIndex << ": " << snippetStatusName(s.status) << "\n";
    for (std::size_t i = 0; i < r.stages.size(); ++i) {
        const auto& s = r.stages[i];
        out << "stage " << i << ": signature " << s.signatureStatus;
        if (s.editor) out << " (editor \"" << s.editor->owner << "\")";
        out << ", sourceHash " << s.sourceHashStatus << ", replay " << s.replayStatus << "\n";
    }
    if (r.videoHash) out << "replayed video hash: " << toHex(*r.videoHash) << "\n";
    if (!r.videoHashStatus.empty()) out << "video hash comparison: " << r.videoHashStatus << "\n";
    return out.str();
}

VerificationReport verifyChain(const FrameChain& chain, const Keystore& keystore) {
    ChainScan scan;
    try {
        scan.genesis = parseGenesis(chain.genesisFrame());
    } catch (const Error& e) {
        scan.genesisError = e.what();
    }
    Digest prev = frameDigest(chain.genesisFrame());
    for (std::uint64_t k = 0; k < chain.contentCount(); ++k) {
        const Frame& frame = chain.contentFrame(k);
        if (decodeHashRow(frame) != prev && !scan.firstBrokenLink) scan.firstBrokenLink = k;
        prev = frameDigest(frame);
        scan.contentDigests.push_back(prev);
    }
    return assembleChainReport(scan, chain.trailerFrame(), keystore);
}

StreamVerifier::StreamVerifier(const Frame& genesisFrame)
    : width_(genesisFrame.width), height_(genesisFrame.height) {
    try {
        genesis_ = parseGenesis(genesisFrame);
    } catch (const Error& e) {
        genesisError_ = e.what();
    }
    runningDigest_ = frameDigest(genesisFrame);
}

bool StreamVerifier::feed(const Frame& frame) {
    require(!finalized_, Errc::State, "feed after finalize");
    bool ok = frame.width == width_ && frame.height == height_ &&
              frame.width >= kMinChainWidth && decodeHashRow(frame) == runningDigest_;
    if (!ok && !firstBrokenLink_) firstBrokenLink_ = contentDigests_.size();
    runningDigest_ = frameDigest(frame);
    contentDigests_.push_back(runningDigest_);
    return ok;
}

VerificationReport StreamVerifier::finalize(const Frame& trailerFrame, const Keystore& keystore) {
    require(!finalized_, Errc::State, "finalize after finalize");
    finalized_ = true;
    ChainScan scan;
    scan.genesis = genesis_;
    scan.genesisError = genesisError_;
    scan.contentDigests = contentDigests_;
    scan.firstBrokenLink = firstBrokenLink_;
    return assembleChainReport(scan, trailerFrame, keystore);
}

SnippetStatus verifySnippet(std::span<const Frame> arrays, const SnippetSignature& snippet,
                            const PublicKey& genesisKey) {
    if (arrays.size() < snippet.frameIndex + 2) return SnippetStatus::OutOfRange;
    Digest prev = frameDigest(arrays[0]);
    for (std::uint64_t k = 0; k <= snippet.frameIndex; ++k) {
        const Frame& frame = arrays[k + 1];
        if (frame.width < kMinChainWidth || decodeHashRow(frame) != prev)
            return SnippetStatus::BrokenPrefix;
        prev = frameDigest(frame);
    }
    auto msg = snippetMessage(prev, snippet.frameIndex);
    return verifySignature(msg, snippet.signature, genesisKey) ? SnippetStatus::Ok
                                                               : SnippetStatus::BadSignature;
}

VerificationReport delayedVerify(std::span<const std::uint8_t> fchainBytes,
                                 const std::vector<EditStage>& stages,
                                 std::span<const std::uint8_t> fvidBytes,
                                 const Keystore& keystore) {
    VerificationReport r;
    FrameChain chain;
    try {
        chain = readFchain(fchainBytes);
    } catch (const Error& e) {
        r.structuralError = std::string("source chain: ") + e.what();
        r.contentCountStatus = "unchecked";
        r.deviceKeyStatus = "unchecked";
        r.finalSignatureStatus = "unchecked";
        r.videoHashStatus = "skipped";
        for (std::size_t i = 0; i < stages.size(); ++i)
            r.stages.push_back({std::nullopt, "unidentified", "skipped", "skipped"});
        computeVerdict(r);
        return r;
    }

    r = verifyChain(chain, keystore);

    Digest boundHash = sha256(fchainBytes);
    VideoBuffer buffer = extractContent(chain);
    bool pipelineAlive = true;

    for (const auto& stage : stages) {
        StageReport sr;
        auto sig = verifyVeslSignature(stage.veslBytes, stage.signature, keystore);
        switch (sig.status) {
        case SigStatus::Ok: sr.signatureStatus = "ok"; break;
        case SigStatus::BadSignature: sr.signatureStatus = "failed"; break;
        default: sr.signatureStatus = "unidentified"; break;
        }
        sr.editor = sig.editor;

        if (!pipelineAlive) {
            sr.sourceHashStatus = "skipped";
            sr.replayStatus = "skipped";
            r.stages.push_back(std::move(sr));
            continue;
        }

        std::optional<EditList> list;
        try {
            list = parseVesl(std::string(stage.veslBytes.begin(), stage.veslBytes.end()));
        } catch (const Error& e) {
            sr.sourceHashStatus = "skipped";
            sr.replayStatus = std::string("parse error: ") + e.what();
            pipelineAlive = false;
            r.stages.push_back(std::move(sr));
            continue;
        }

        if (!list->sourceHash) {
            sr.sourceHashStatus = "missing";
        } else if (*list->sourceHash != boundHash) {
            sr.sourceHashStatus = "mismatch";
        } else {
            sr.sourceHashStatus = "ok";
        }
        if (sr.sourceHashStatus != "ok") {
            sr.replayStatus = "skipped";
            pipelineAlive = false;
            r.stages.push_back(std::move(sr));
            continue;
        }

        try {
            validateAgainstSource(*list, buffer.frames.size(), boundHash);
            buffer = applyEdits(buffer, *list);
            auto fvid = writeFvid(buffer);
            boundHash = sha256(fvid);
            sr.replayStatus = "ok";
        } catch (const Error& e) {
            sr.replayStatus = e.what();
            pipelineAlive = false;
        }
        r.stages.push_back(std::move(sr));
    }

    if (pipelineAlive && !stages.empty()) {
        r.videoHash = boundHash;
        r.videoHashStatus = (boundHash == sha256(fvidBytes)) ? "ok" : "mismatch";
    } else {
        r.videoHashStatus = "skipped";
    }

    computeVerdict(r);
    return r;
}

} // namespace frameprov
