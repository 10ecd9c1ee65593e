#include "frameprov/chain.hpp"
#include "frameprov/crypto.hpp"
#include "frameprov/edits.hpp"
#include "frameprov/errors.hpp"
#include "frameprov/io.hpp"
#include "frameprov/keystore.hpp"
#include "frameprov/numeric.hpp"
#include "frameprov/tee.hpp"
#include "frameprov/verify.hpp"
#include "frameprov/vesl.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace frameprov;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitUsage = 2;

std::filesystem::path keystorePath(const std::string& flagValue) {
    if (!flagValue.empty()) return flagValue;
    if (const char* env = std::getenv("FRAMEPROV_KEYSTORE"); env && *env) return env;
    return "frameprov-keys.json";
}

std::uint64_t nowOr(std::optional<std::uint64_t> injected) {
    if (injected) return *injected;
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
}

std::pair<std::uint32_t, std::uint32_t> parseFps(const std::string& text) {
    auto slash = text.find('/');
    std::string num = slash == std::string::npos ? text : text.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
    auto n = parseU64(num);
    auto d = parseU64(den);
    require(n && d && *n >= 1 && *d >= 1 && *n <= 0xffffffffull && *d <= 0xffffffffull, Errc::Parse,
            "--fps must be N or N/D with positive integers");
    return {static_cast<std::uint32_t>(*n), static_cast<std::uint32_t>(*d)};
}

Digest digestFromHex(const std::string& hex) {
    auto bytes = fromHex(hex);
    require(bytes.size() == 32, Errc::Parse, "expected 64 hex digits");
    Digest d;
    std::copy(bytes.begin(), bytes.end(), d.begin());
    return d;
}

int verdictExitCode(Verdict v) {
    return v == Verdict::Valid ? kExitOk : kExitVerificationFailed;
}

void printReport(const VerificationReport& report, bool asJson) {
    if (asJson)
        std::cout << serializeReport(report) << "\n";
    else
        std::cout << renderReportText(report);
}

bool isValidationError(Errc code) {
    switch (code) {
    case Errc::SourceMismatch:
    case Errc::Range:
    case Errc::EmptyResult:
    case Errc::UnsupportedCodec:
    case Errc::UnsupportedFilter:
    case Errc::BadParameter:
    case Errc::Parse:
        return true;
    default:
        return false;
    }
}

struct KeygenOptions {
    std::string role;
    std::string owner;
    std::string outPath;
    std::string keystoreFlag;
    std::string seedHex;
    std::optional<std::uint64_t> timestamp;
    bool asJson = false;
};

int cmdKeygen(const KeygenOptions& opt) {
    KeyPair key;
    if (!opt.seedHex.empty()) {
        auto bytes = fromHex(opt.seedHex);
        require(bytes.size() == 32, Errc::Parse, "--seed must be 64 hex digits");
        Seed seed;
        std::copy(bytes.begin(), bytes.end(), seed.begin());
        key = KeyPair::fromSeed(seed);
    } else {
        key = KeyPair::generate();
    }
    auto path = keystorePath(opt.keystoreFlag);
    Keystore store = Keystore::load(path);
    const KeyRecord& record =
        store.registerKey(key.publicKey, roleFromName(opt.role), opt.owner, nowOr(opt.timestamp));
    store.save(path);
    writeFile(opt.outPath, writeKeyFile(key));
    if (opt.asJson) {
        json j;
        j["keyFile"] = opt.outPath;
        j["keyId"] = record.keyId;
        j["owner"] = record.owner;
        j["registeredAt"] = record.registeredAt;
        j["role"] = roleName(record.role);
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "keyId: " << record.keyId << "\n";
        std::cout << "private key written to " << opt.outPath << "\n";
    }
    return kExitOk;
}

struct RecordOptions {
    std::string keyPath;
    std::string inPath;
    std::string fps = "30/1";
    std::string outPath;
    std::string anchorHex;
    std::string sensorId;
    std::uint64_t snippetEvery = 0;
    std::uint64_t sequenceNumber = 0;
    std::optional<std::uint64_t> timestamp;
    std::uint32_t rawWidth = 0;
    std::uint32_t rawHeight = 0;
    bool asJson = false;
};

int cmdRecord(const RecordOptions& opt) {
    KeyPair key = readKeyFile(readFile(opt.keyPath));
    auto [fpsNum, fpsDen] = parseFps(opt.fps);

    std::vector<Frame> frames;
    if (std::filesystem::is_directory(opt.inPath)) {
        frames = loadPpmDirectory(opt.inPath);
    } else {
        require(opt.rawWidth > 0 && opt.rawHeight > 0, Errc::Parse,
                "--width and --height are required for raw RGB input");
        frames = splitRawRgb(readFile(opt.inPath), opt.rawWidth, opt.rawHeight);
    }
    require(!frames.empty(), Errc::Structural, "no input frames found");

    std::optional<Digest> anchor;
    if (!opt.anchorHex.empty()) anchor = digestFromHex(opt.anchorHex);

    RecordingSession session(key, opt.sensorId, nowOr(opt.timestamp), opt.sequenceNumber, anchor,
                             frames.front().width, frames.front().height);
    std::uint64_t fed = 0;
    for (const auto& frame : frames) {
        session.feed(frame);
        ++fed;
        if (opt.snippetEvery > 0 && fed % opt.snippetEvery == 0) session.markSnippet();
    }
    FrameChain chain = session.stop(fpsNum, fpsDen);
    writeFile(opt.outPath, writeFchain(chain));

    std::string keyId = keyIdOf(key.publicKey);
    if (opt.asJson) {
        json j;
        j["contentCount"] = chain.contentCount();
        j["keyId"] = keyId;
        j["out"] = opt.outPath;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "recorded " << chain.contentCount() << " frames to " << opt.outPath << "\n";
        std::cout << "keyId: " << keyId << "\n";
    }
    return kExitOk;
}

int cmdVerify(const std::string& chainPath, const std::string& keystoreFlag, bool asJson) {
    FrameChain chain = readFchain(readFile(chainPath));
    Keystore store = Keystore::load(keystorePath(keystoreFlag));
    VerificationReport report = verifyChain(chain, store);
    printReport(report, asJson);
    return verdictExitCode(report.verdict);
}

struct EditOptions {
    std::string inPath;
    std::string veslPath;
    std::string signKeyPath;
    std::string outPath;
    std::string sigOutPath;
    bool asJson = false;
};

int cmdEdit(const EditOptions& opt) {
    auto fchainBytes = readFile(opt.inPath);
    auto veslBytes = readFile(opt.veslPath);
    FrameChain chain = readFchain(fchainBytes);
    KeyPair editorKey = readKeyFile(readFile(opt.signKeyPath));

    EditList list;
    VideoBuffer output;
    try {
        list = parseVesl(std::string(veslBytes.begin(), veslBytes.end()));
        validateAgainstSource(list, chain.contentCount(), sha256(fchainBytes));
        output = applyEdits(chain, list);
    } catch (const Error& e) {
        if (isValidationError(e.code())) {
            std::cerr << "edit rejected: " << e.what() << "\n";
            return kExitVerificationFailed;
        }
        throw;
    }

    auto fvidBytes = writeFvid(output);
    writeFile(opt.outPath, fvidBytes);
    EditSignature sig = signVesl(veslBytes, editorKey);
    std::string sigPath = opt.sigOutPath.empty() ? opt.veslPath + ".sig" : opt.sigOutPath;
    writeFile(sigPath, writeSigFile(sig));

    Digest videoHash = sha256(fvidBytes);
    if (opt.asJson) {
        json j;
        j["frameCount"] = output.frames.size();
        j["out"] = opt.outPath;
        j["signature"] = sigPath;
        j["videoHash"] = toHex(videoHash);
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "wrote " << output.frames.size() << " frames to " << opt.outPath << "\n";
        std::cout << "signature: " << sigPath << "\n";
        std::cout << "video hash: " << toHex(videoHash) << "\n";
    }
    return kExitOk;
}

int cmdDelayedVerify(const std::string& sourcePath, const std::vector<std::string>& stageSpecs,
                     const std::string& videoPath, const std::string& keystoreFlag, bool asJson) {
    auto fchainBytes = readFile(sourcePath);
    auto fvidBytes = readFile(videoPath);
    std::vector<EditStage> stages;
    for (const auto& spec : stageSpecs) {
        auto colon = spec.find(':');
        require(colon != std::string::npos, Errc::Parse,
                "--stage expects VESLFILE:SIGFILE, got \"" + spec + "\"");
        EditStage stage;
        stage.veslBytes = readFile(spec.substr(0, colon));
        stage.signature = readSigFile(readFile(spec.substr(colon + 1)));
        stages.push_back(std::move(stage));
    }
    require(!stages.empty(), Errc::Parse, "at least one --stage is required");
    Keystore store = Keystore::load(keystorePath(keystoreFlag));
    VerificationReport report = delayedVerify(fchainBytes, stages, fvidBytes, store);
    printReport(report, asJson);
    return verdictExitCode(report.verdict);
}

void summarizeEdits(const EditList& list, json& out) {
    json edits = json::array();
    for (const auto& edit : list.edits) {
        std::visit(
            [&](const auto& op) {
                using T = std::decay_t<decltype(op)>;
                json e;
                if constexpr (std::is_same_v<T, RangeDeletion>) {
                    e["editType"] = "rangeDeletion";
                    e["fromFrame"] = op.fromFrame;
                    e["toFrame"] = op.toFrame;
                } else if constexpr (std::is_same_v<T, PlaybackSpeed>) {
                    e["editType"] = "playbackSpeed";
                    e["factor"] = std::to_string(op.factorNum) + "/" + std::to_string(op.factorDen);
                    e["fromFrame"] = op.fromFrame;
                    e["toFrame"] = op.toFrame;
                } else if constexpr (std::is_same_v<T, VideoFilter>) {
                    e["editType"] = "videoFilter";
                    json filters = json::array();
                    for (const auto& f : op.filters) {
                        json fj;
                        fj["filterType"] = f.filterType;
                        if (f.fromFrame) fj["fromFrame"] = *f.fromFrame;
                        if (f.toFrame) fj["toFrame"] = *f.toFrame;
                        fj["typeParams"] = json(f.typeParams);
                        filters.push_back(std::move(fj));
                    }
                    e["filters"] = std::move(filters);
                } else {
                    e["editType"] = "compression";
                    e["algorithm"] = op.algorithm;
                    e["algorithmParams"] = json(op.algorithmParams);
                }
                edits.push_back(std::move(e));
            },
            edit);
    }
    out["edits"] = std::move(edits);
}

int cmdInspect(const std::string& path, bool asJson) {
    auto bytes = readFile(path);
    json j;
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), "FCHN", 4) == 0) {
        FrameChain chain = readFchain(bytes);
        j["format"] = "fchain";
        j["width"] = chain.width;
        j["height"] = chain.height;
        j["fps"] = std::to_string(chain.fpsNum) + "/" + std::to_string(chain.fpsDen);
        j["arrays"] = chain.arrays.size();
        j["contentCount"] = chain.contentCount();
        try {
            GenesisMetadata g = parseGenesis(chain.genesisFrame());
            json gj;
            gj["devicePublicKey"] = toHex(g.devicePublicKey);
            gj["keyId"] = keyIdOf(g.devicePublicKey);
            gj["timestamp"] = g.timestamp;
            gj["sequenceNumber"] = g.sequenceNumber;
            gj["anchorHash"] = g.anchorHash ? json(toHex(*g.anchorHash)) : json(nullptr);
            gj["sensorId"] = g.sensorId;
            j["genesis"] = std::move(gj);
        } catch (const Error& e) {
            j["genesis"] = json{{"error", e.what()}};
        }
        try {
            TrailerMetadata t = parseTrailer(chain.trailerFrame());
            json tj;
            tj["contentCount"] = t.contentCount;
            tj["fps"] = std::to_string(t.fpsNum) + "/" + std::to_string(t.fpsDen);
            json snippets = json::array();
            for (const auto& s : t.snippets) snippets.push_back(s.frameIndex);
            tj["snippetIndices"] = std::move(snippets);
            j["trailer"] = std::move(tj);
        } catch (const Error& e) {
            j["trailer"] = json{{"error", e.what()}};
        }
    } else if (bytes.size() >= 4 && std::memcmp(bytes.data(), "FVID", 4) == 0) {
        VideoBuffer buf = readFvid(bytes);
        j["format"] = "fvid";
        j["width"] = buf.width;
        j["height"] = buf.height;
        j["fps"] = std::to_string(buf.fpsNum) + "/" + std::to_string(buf.fpsDen);
        j["frameCount"] = buf.frames.size();
        j["fileHash"] = toHex(sha256(bytes));
    } else {
        EditList list;
        try {
            list = parseVesl(std::string(bytes.begin(), bytes.end()));
        } catch (const Error&) {
            std::cerr << "unknown file format: " << path << "\n";
            return kExitUsage;
        }
        j["format"] = "vesl";
        j["veslVersion"] = list.veslVersion;
        j["sourceHash"] = list.sourceHash ? json(toHex(*list.sourceHash)) : json(nullptr);
        summarizeEdits(list, j);
    }
    std::cout << (asJson ? j.dump() : j.dump(2)) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"FrameProv: tamper-evident video provenance chains"};
    app.require_subcommand(1);

    std::string keystoreFlag;
    bool asJson = false;
    app.add_option("--keystore", keystoreFlag,
                   "key registry file (default ./frameprov-keys.json, or FRAMEPROV_KEYSTORE)");
    app.add_flag("--json", asJson, "machine-readable output");

    KeygenOptions keygen;
    auto* keygenCmd = app.add_subcommand("keygen", "generate a key pair and register it");
    keygenCmd->add_option("--role", keygen.role, "device or editor")->required();
    keygenCmd->add_option("--owner", keygen.owner, "owner shown in the registry")->required();
    keygenCmd->add_option("--out", keygen.outPath, "private key file to write")->required();
    keygenCmd->add_option("--seed", keygen.seedHex, "32-byte hex seed (deterministic keys)");
    keygenCmd->add_option("--timestamp", keygen.timestamp, "registration time override");

    RecordOptions record;
    auto* recordCmd = app.add_subcommand("record", "record a FrameChain from raw frames");
    recordCmd->add_option("--key", record.keyPath, "device private key file")->required();
    recordCmd->add_option("--in", record.inPath, "PPM directory or raw RGB24 file")->required();
    recordCmd->add_option("--fps", record.fps, "framerate as N or N/D (default 30/1)");
    recordCmd->add_option("--out", record.outPath, ".fchain output path")->required();
    recordCmd->add_option("--anchor", record.anchorHex, "optional 32-byte anchor hash (hex)");
    recordCmd->add_option("--snippet-every", record.snippetEvery,
                          "mark a snippet after every N frames");
    recordCmd->add_option("--sensor-id", record.sensorId, "sensor identifier string");
    recordCmd->add_option("--sequence", record.sequenceNumber, "per-device recording counter");
    recordCmd->add_option("--timestamp", record.timestamp, "recording time override");
    recordCmd->add_option("--width", record.rawWidth, "frame width for raw RGB input");
    recordCmd->add_option("--height", record.rawHeight, "frame height for raw RGB input");

    std::string verifyPath;
    auto* verifyCmd = app.add_subcommand("verify", "verify a FrameChain");
    verifyCmd->add_option("file", verifyPath, ".fchain file")->required();

    EditOptions edit;
    auto* editCmd = app.add_subcommand("edit", "replay a signed VESL edit list");
    editCmd->add_option("--in", edit.inPath, "source .fchain")->required();
    editCmd->add_option("--vesl", edit.veslPath, "VESL edit list")->required();
    editCmd->add_option("--sign-key", edit.signKeyPath, "editor private key file")->required();
    editCmd->add_option("--out", edit.outPath, ".fvid output path")->required();
    editCmd->add_option("--sig-out", edit.sigOutPath, "signature output (default VESL + .sig)");

    std::string dvSource, dvVideo;
    std::vector<std::string> dvStages;
    auto* dvCmd = app.add_subcommand("delayed-verify", "verify an edited video by replaying edits");
    dvCmd->add_option("--source", dvSource, "source .fchain")->required();
    dvCmd->add_option("--stage", dvStages, "VESLFILE:SIGFILE, in pipeline order")->required();
    dvCmd->add_option("--video", dvVideo, "downloaded .fvid")->required();

    std::string inspectPath;
    auto* inspectCmd = app.add_subcommand("inspect", "decode metadata without verifying");
    inspectCmd->add_option("file", inspectPath, ".fchain, .fvid or VESL file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*keygenCmd) {
            keygen.keystoreFlag = keystoreFlag;
            keygen.asJson = asJson;
            return cmdKeygen(keygen);
        }
        if (*recordCmd) {
            record.asJson = asJson;
            return cmdRecord(record);
        }
        if (*verifyCmd) return cmdVerify(verifyPath, keystoreFlag, asJson);
        if (*editCmd) {
            edit.asJson = asJson;
            return cmdEdit(edit);
        }
        if (*dvCmd) return cmdDelayedVerify(dvSource, dvStages, dvVideo, keystoreFlag, asJson);
        if (*inspectCmd) return cmdInspect(inspectPath, asJson);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
