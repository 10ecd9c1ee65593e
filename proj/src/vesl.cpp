#include "frameprov/vesl.hpp"

#include "frameprov/bytes.hpp"
#include "frameprov/edits.hpp"
#include "frameprov/errors.hpp"
#include "frameprov/numeric.hpp"

#include <json.hpp>

#include <algorithm>
#include <utility>

namespace frameprov {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Lenient JSON-ish reader. Compared to strict JSON it keeps duplicate object
// keys in document order, tolerates missing and trailing commas, and stores
// every scalar as its literal text. The canonical grammar is a strict subset.
// ---------------------------------------------------------------------------

struct Value {
    enum class Kind { Scalar, Object, Array };
    Kind kind = Kind::Scalar;
    std::string text;                                   // Scalar
    std::vector<std::pair<std::string, Value>> members; // Object, ordered
    std::vector<Value> items;                           // Array
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(Errc::Parse, "VESL syntax error at line " + std::to_string(line_) +
                                     ", column " + std::to_string(col_) + ": " + what);
    }

    void skipWs() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c != ' ' && c != '\t' && c != '\n' && c != '\r') break;
            advance();
        }
    }

    bool eof() {
        skipWs();
        return pos_ >= text_.size();
    }

    char peek() {
        skipWs();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        return text_[pos_];
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        advance();
    }

    bool tryConsume(char c) {
        if (eof() || peek() != c) return false;
        advance();
        return true;
    }

    std::string stringLiteral() {
        expectQuote();
        std::string out;
        while (true) {
            if (pos_ >= text_.size()) fail("unterminated string");
            char c = text_[pos_];
            advance();
            if (c == '"') break;
            if (c == '\\') {
                if (pos_ >= text_.size()) fail("unterminated escape");
                char e = text_[pos_];
                advance();
                switch (e) {
                case '"': out.push_back('"'); break;
                case '\\': out.push_back('\\'); break;
                case '/': out.push_back('/'); break;
                case 'b': out.push_back('\b'); break;
                case 'f': out.push_back('\f'); break;
                case 'n': out.push_back('\n'); break;
                case 'r': out.push_back('\r'); break;
                case 't': out.push_back('\t'); break;
                case 'u': appendUnicodeEscape(out); break;
                default: fail("unknown escape sequence");
                }
            } else {
                out.push_back(c);
            }
        }
        return out;
    }

    std::string bareScalar() {
        skipWs();
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ',' || c == '}' || c == ']' || c == ' ' || c == '\t' || c == '\n' ||
                c == '\r')
                break;
            advance();
        }
        if (start == pos_) fail("expected a value");
        return text_.substr(start, pos_ - start);
    }

private:
    void expectQuote() {
        if (peek() != '"') fail("expected a string");
        advance();
    }

    void appendUnicodeEscape(std::string& out) {
        if (pos_ + 4 > text_.size()) fail("truncated \\u escape");
        unsigned cp = 0;
        for (int i = 0; i < 4; ++i) {
            char c = text_[pos_];
            advance();
            cp <<= 4;
            if (c >= '0' && c <= '9') cp |= static_cast<unsigned>(c - '0');
            else if (c >= 'a' && c <= 'f') cp |= static_cast<unsigned>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F') cp |= static_cast<unsigned>(c - 'A' + 10);
            else fail("invalid \\u escape");
        }
        // Basic multilingual plane only; surrogate pairs are not needed here.
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
        } else {
            out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
        }
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

Value parseValue(Lexer& lex);

Value parseObject(Lexer& lex) {
    Value v;
    v.kind = Value::Kind::Object;
    lex.expect('{');
    while (!lex.tryConsume('}')) {
        std::string key = lex.stringLiteral();
        lex.expect(':');
        v.members.emplace_back(std::move(key), parseValue(lex));
        lex.tryConsume(','); // comma between members is optional
    }
    return v;
}

Value parseArray(Lexer& lex) {
    Value v;
    v.kind = Value::Kind::Array;
    lex.expect('[');
    while (!lex.tryConsume(']')) {
        v.items.push_back(parseValue(lex));
        lex.tryConsume(',');
    }
    return v;
}

Value parseValue(Lexer& lex) {
    char c = lex.peek();
    if (c == '{') return parseObject(lex);
    if (c == '[') return parseArray(lex);
    Value v;
    v.kind = Value::Kind::Scalar;
    v.text = (c == '"') ? lex.stringLiteral() : lex.bareScalar();
    return v;
}

// ---------------------------------------------------------------------------
// Interpretation of the value tree as an EditList.
// ---------------------------------------------------------------------------

[[noreturn]] void editFail(std::size_t editIndex, const std::string& what, Errc code = Errc::Parse) {
    throw Error(code, "edit " + std::to_string(editIndex) + ": " + what);
}

const Value* findMember(const Value& obj, const std::string& key) {
    for (const auto& [k, v] : obj.members)
        if (k == key) return &v;
    return nullptr;
}

std::string scalarMember(const Value& obj, const std::string& key, std::size_t editIndex) {
    const Value* v = findMember(obj, key);
    if (!v) editFail(editIndex, "missing parameter \"" + key + "\"");
    if (v->kind != Value::Kind::Scalar) editFail(editIndex, "parameter \"" + key + "\" must be a scalar");
    return v->text;
}

std::uint64_t u64Member(const Value& obj, const std::string& key, std::size_t editIndex) {
    auto parsed = parseU64(scalarMember(obj, key, editIndex));
    if (!parsed) editFail(editIndex, "parameter \"" + key + "\" is not a nonnegative integer");
    return *parsed;
}

void rejectUnknownKeys(const Value& obj, std::initializer_list<const char*> allowed,
                       std::size_t editIndex) {
    for (const auto& [k, v] : obj.members) {
        bool ok = std::any_of(allowed.begin(), allowed.end(),
                              [&](const char* a) { return k == a; });
        if (!ok) editFail(editIndex, "unexpected parameter \"" + k + "\"");
    }
}

std::map<std::string, std::string> scalarMap(const Value& obj, std::size_t editIndex,
                                             const std::string& what) {
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : obj.members) {
        if (v.kind != Value::Kind::Scalar)
            editFail(editIndex, what + " entry \"" + k + "\" must be a scalar");
        if (!out.emplace(k, v.text).second)
            editFail(editIndex, "duplicate key \"" + k + "\" in " + what);
    }
    return out;
}

FilterSpec parseFilterSpec(const Value& obj, std::size_t editIndex) {
    if (obj.kind != Value::Kind::Object) editFail(editIndex, "filter entry must be an object");
    rejectUnknownKeys(obj, {"filterType", "fromFrame", "toFrame", "typeParams"}, editIndex);
    FilterSpec spec;
    spec.filterType = scalarMember(obj, "filterType", editIndex);
    bool hasFrom = findMember(obj, "fromFrame") != nullptr;
    bool hasTo = findMember(obj, "toFrame") != nullptr;
    if (hasFrom != hasTo)
        editFail(editIndex, "filter range must give both fromFrame and toFrame or neither");
    if (hasFrom) {
        spec.fromFrame = u64Member(obj, "fromFrame", editIndex);
        spec.toFrame = u64Member(obj, "toFrame", editIndex);
        if (*spec.fromFrame > *spec.toFrame)
            editFail(editIndex, "fromFrame exceeds toFrame", Errc::Range);
    }
    if (const Value* params = findMember(obj, "typeParams")) {
        if (params->kind != Value::Kind::Object)
            editFail(editIndex, "typeParams must be an object");
        spec.typeParams = scalarMap(*params, editIndex, "typeParams");
    }
    return spec;
}

Edit makeEdit(const std::string& editType, const Value& params, std::size_t editIndex) {
    if (editType == "rangeDeletion") {
        if (params.kind != Value::Kind::Object)
            editFail(editIndex, "rangeDeletionParams must be an object");
        rejectUnknownKeys(params, {"fromFrame", "toFrame"}, editIndex);
        RangeDeletion e;
        e.fromFrame = u64Member(params, "fromFrame", editIndex);
        e.toFrame = u64Member(params, "toFrame", editIndex);
        if (e.fromFrame > e.toFrame) editFail(editIndex, "fromFrame exceeds toFrame", Errc::Range);
        return e;
    }
    if (editType == "playbackSpeed") {
        if (params.kind != Value::Kind::Object)
            editFail(editIndex, "playbackSpeedParams must be an object");
        rejectUnknownKeys(params, {"factorNum", "factorDen", "fromFrame", "toFrame"}, editIndex);
        PlaybackSpeed e;
        e.factorNum = u64Member(params, "factorNum", editIndex);
        e.factorDen = u64Member(params, "factorDen", editIndex);
        if (e.factorNum == 0 || e.factorDen == 0)
            editFail(editIndex, "playback speed factor must be positive", Errc::BadParameter);
        e.fromFrame = u64Member(params, "fromFrame", editIndex);
        e.toFrame = u64Member(params, "toFrame", editIndex);
        if (e.fromFrame > e.toFrame) editFail(editIndex, "fromFrame exceeds toFrame", Errc::Range);
        return e;
    }
    if (editType == "videoFilter") {
        if (params.kind != Value::Kind::Array)
            editFail(editIndex, "videoFilterParams must be an array");
        VideoFilter e;
        if (params.items.empty()) editFail(editIndex, "videoFilterParams must not be empty");
        for (const auto& item : params.items) e.filters.push_back(parseFilterSpec(item, editIndex));
        return e;
    }
    if (editType == "compression") {
        if (params.kind != Value::Kind::Object)
            editFail(editIndex, "compressionParams must be an object");
        rejectUnknownKeys(params, {"algorithm", "algorithmParams"}, editIndex);
        Compression e;
        e.algorithm = scalarMember(params, "algorithm", editIndex);
        if (const Value* ap = findMember(params, "algorithmParams")) {
            if (ap->kind != Value::Kind::Object)
                editFail(editIndex, "algorithmParams must be an object");
            e.algorithmParams = scalarMap(*ap, editIndex, "algorithmParams");
        }
        return e;
    }
    editFail(editIndex, "unknown editType \"" + editType + "\"");
}

Digest parseSourceHash(const std::string& hex) {
    auto bytes = fromHex(hex);
    require(bytes.size() == 32, Errc::Parse, "sourceHash must be 64 hex digits");
    Digest d;
    std::copy(bytes.begin(), bytes.end(), d.begin());
    return d;
}

std::string paramsKeyFor(const std::string& editType) {
    return editType + "Params";
}

} // namespace

EditList parseVesl(const std::string& text) {
    Lexer lex(text);
    Value root = parseObject(lex);
    require(lex.eof(), Errc::Parse, "trailing content after VESL document");

    EditList list;
    bool canonical = findMember(root, "edits") != nullptr;

    if (canonical) {
        for (const auto& [key, value] : root.members) {
            if (key == "veslVersion") {
                require(value.kind == Value::Kind::Scalar, Errc::Parse, "veslVersion must be a string");
                list.veslVersion = value.text;
            } else if (key == "sourceHash") {
                require(value.kind == Value::Kind::Scalar, Errc::Parse, "sourceHash must be a string");
                list.sourceHash = parseSourceHash(value.text);
            } else if (key == "edits") {
                require(value.kind == Value::Kind::Array, Errc::Parse, "\"edits\" must be an array");
                for (const auto& item : value.items) {
                    std::size_t i = list.edits.size();
                    if (item.kind != Value::Kind::Object) editFail(i, "edit entry must be an object");
                    const Value* type = findMember(item, "editType");
                    if (!type || type->kind != Value::Kind::Scalar)
                        editFail(i, "missing editType");
                    std::string pkey = paramsKeyFor(type->text);
                    rejectUnknownKeys(item, {"editType", pkey.c_str()}, i);
                    const Value* params = findMember(item, pkey);
                    if (!params) editFail(i, "missing " + pkey);
                    list.edits.push_back(makeEdit(type->text, *params, i));
                }
            } else {
                throw Error(Errc::Parse, "unexpected top-level key \"" + key + "\"");
            }
        }
    } else {
        // Legacy style: repeated editType keys at top level, each followed by
        // its params key, interpreted in document order.
        std::optional<std::string> pendingType;
        for (const auto& [key, value] : root.members) {
            std::size_t i = list.edits.size();
            if (key == "veslVersion") {
                require(value.kind == Value::Kind::Scalar, Errc::Parse, "veslVersion must be a string");
                list.veslVersion = value.text;
            } else if (key == "sourceHash") {
                require(value.kind == Value::Kind::Scalar, Errc::Parse, "sourceHash must be a string");
                list.sourceHash = parseSourceHash(value.text);
            } else if (key == "editType") {
                if (pendingType) editFail(i, "editType \"" + *pendingType + "\" has no parameters");
                require(value.kind == Value::Kind::Scalar, Errc::Parse, "editType must be a string");
                pendingType = value.text;
            } else if (pendingType && key == paramsKeyFor(*pendingType)) {
                list.edits.push_back(makeEdit(*pendingType, value, i));
                pendingType.reset();
            } else {
                throw Error(Errc::Parse, "unexpected top-level key \"" + key + "\"");
            }
        }
        if (pendingType)
            editFail(list.edits.size(), "editType \"" + *pendingType + "\" has no parameters");
    }

    require(!list.edits.empty(), Errc::Parse, "edit list must not be empty");
    return list;
}

std::string canonicalize(const EditList& list) {
    json doc;
    doc["veslVersion"] = list.veslVersion;
    if (list.sourceHash) doc["sourceHash"] = toHex(*list.sourceHash);
    json edits = json::array();
    for (const auto& edit : list.edits) {
        json e;
        std::visit(
            [&](const auto& op) {
                using T = std::decay_t<decltype(op)>;
                if constexpr (std::is_same_v<T, RangeDeletion>) {
                    e["editType"] = "rangeDeletion";
                    e["rangeDeletionParams"] = {{"fromFrame", std::to_string(op.fromFrame)},
                                                {"toFrame", std::to_string(op.toFrame)}};
                } else if constexpr (std::is_same_v<T, PlaybackSpeed>) {
                    e["editType"] = "playbackSpeed";
                    e["playbackSpeedParams"] = {{"factorDen", std::to_string(op.factorDen)},
                                                {"factorNum", std::to_string(op.factorNum)},
                                                {"fromFrame", std::to_string(op.fromFrame)},
                                                {"toFrame", std::to_string(op.toFrame)}};
                } else if constexpr (std::is_same_v<T, VideoFilter>) {
                    e["editType"] = "videoFilter";
                    json filters = json::array();
                    for (const auto& f : op.filters) {
                        json fj;
                        fj["filterType"] = f.filterType;
                        if (f.fromFrame) fj["fromFrame"] = std::to_string(*f.fromFrame);
                        if (f.toFrame) fj["toFrame"] = std::to_string(*f.toFrame);
                        fj["typeParams"] = json(f.typeParams);
                        filters.push_back(std::move(fj));
                    }
                    e["videoFilterParams"] = std::move(filters);
                } else {
                    e["editType"] = "compression";
                    e["compressionParams"] = {{"algorithm", op.algorithm},
                                              {"algorithmParams", json(op.algorithmParams)}};
                }
            },
            edit);
        edits.push_back(std::move(e));
    }
    doc["edits"] = std::move(edits);
    return doc.dump(); // nlohmann keeps keys sorted; no whitespace
}

void validateAgainstSource(const EditList& list, std::uint64_t contentCount,
                           const Digest& sourceDigest) {
    if (!list.sourceHash)
        throw Error(Errc::SourceMismatch, "edit list carries no sourceHash binding");
    if (*list.sourceHash != sourceDigest)
        throw Error(Errc::SourceMismatch,
                    "edit list is bound to a different source (sourceHash mismatch)");

    std::uint64_t cur = contentCount;
    for (std::size_t i = 0; i < list.edits.size(); ++i) {
        if (cur == 0) editFail(i, "no frames remain from preceding edits", Errc::Range);
        std::visit(
            [&](const auto& op) {
                using T = std::decay_t<decltype(op)>;
                if constexpr (std::is_same_v<T, RangeDeletion>) {
                    if (op.toFrame >= cur)
                        editFail(i, "deletion range beyond frame " + std::to_string(cur - 1),
                                 Errc::Range);
                    cur -= op.toFrame - op.fromFrame + 1;
                } else if constexpr (std::is_same_v<T, PlaybackSpeed>) {
                    if (op.toFrame >= cur)
                        editFail(i, "speed range beyond frame " + std::to_string(cur - 1),
                                 Errc::Range);
                    std::uint64_t len = op.toFrame - op.fromFrame + 1;
                    std::uint64_t resampled =
                        (len * op.factorDen + op.factorNum - 1) / op.factorNum;
                    cur = cur - len + resampled;
                } else if constexpr (std::is_same_v<T, VideoFilter>) {
                    for (const auto& f : op.filters) {
                        try {
                            validateFilterSpec(f);
                        } catch (const Error& e) {
                            editFail(i, e.what(), e.code());
                        }
                        std::uint64_t to = f.toFrame.value_or(cur - 1);
                        if (to >= cur)
                            editFail(i, "filter range beyond frame " + std::to_string(cur - 1),
                                     Errc::Range);
                    }
                } else {
                    try {
                        validateCompressionSpec(op.algorithm, op.algorithmParams);
                    } catch (const Error& e) {
                        editFail(i, e.what(), e.code());
                    }
                }
            },
            list.edits[i]);
    }
    if (cur == 0)
        throw Error(Errc::EmptyResult, "edit list leaves no frames in the output");
}

EditSignature signVesl(std::span<const std::uint8_t> fileBytes, const KeyPair& editorKey) {
    EditSignature sig;
    sig.editorKeyId = keyIdOf(editorKey.publicKey);
    sig.signature = sign(fileBytes, editorKey);
    return sig;
}

SigVerifyResult verifyVeslSignature(std::span<const std::uint8_t> fileBytes,
                                    const EditSignature& sig, const Keystore& keystore) {
    SigVerifyResult result;
    auto record = keystore.lookup(sig.editorKeyId);
    if (!record) {
        result.status = SigStatus::UnidentifiedEditor;
        return result;
    }
    result.editor = record;
    result.status = verifySignature(fileBytes, sig.signature, record->publicKey)
                        ? SigStatus::Ok
                        : SigStatus::BadSignature;
    return result;
}

std::vector<std::uint8_t> writeSigFile(const EditSignature& sig) {
    auto keyId = fromHex(sig.editorKeyId);
    require(keyId.size() == 32, Errc::Structural, "editorKeyId must be 64 hex digits");
    ByteWriter w;
    w.magic("FPSV");
    w.u8(1);
    w.bytes(keyId);
    w.bytes(sig.signature);
    return w.take();
}

EditSignature readSigFile(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    require(r.expectMagic("FPSV"), Errc::BadMagic, "not a VESL signature file");
    std::uint8_t version = r.u8();
    require(version == 1, Errc::BadVersion, "unsupported signature file version");
    EditSignature sig;
    auto keyId = r.bytes(32);
    sig.editorKeyId = toHex(keyId);
    auto s = r.bytes(64);
    std::copy(s.begin(), s.end(), sig.signature.begin());
    require(r.remaining() == 0, Errc::LengthMismatch, "trailing bytes in signature file");
    return sig;
}

} // namespace frameprov
