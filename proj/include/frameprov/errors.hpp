#pragma once

#include <stdexcept>
#include <string>

namespace frameprov {

enum class Errc {
    BadMagic,
    BadVersion,
    Truncated,
    LengthMismatch,
    NonzeroPadding,
    Dimension,
    Capacity,
    Structural,
    State,
    Range,
    EmptyResult,
    Duplicate,
    Parse,
    SourceMismatch,
    UnsupportedFilter,
    UnsupportedCodec,
    BadParameter,
    Integrity,
    Io,
};

/// Typed failure for all structural, parse and state errors.
/// Verification paths never throw; they record statuses instead.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

inline void require(bool cond, Errc code, const std::string& what) {
    if (!cond) throw Error(code, what);
}

} // namespace frameprov
