#pragma once

#include "frameprov/errors.hpp"

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

namespace frameprov {

/// Little-endian byte writer for the fixed payload layouts.
class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u16(std::uint16_t v) { appendLe(v, 2); }
    void u32(std::uint32_t v) { appendLe(v, 4); }
    void u64(std::uint64_t v) { appendLe(v, 8); }
    void bytes(std::span<const std::uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
    void magic(const char (&m)[5]) {
        buf_.insert(buf_.end(), reinterpret_cast<const std::uint8_t*>(m),
                    reinterpret_cast<const std::uint8_t*>(m) + 4);
    }

    const std::vector<std::uint8_t>& data() const { return buf_; }
    std::vector<std::uint8_t> take() { return std::move(buf_); }
    std::size_t size() const { return buf_.size(); }

private:
    void appendLe(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    std::vector<std::uint8_t> buf_;
};

/// Little-endian byte reader; throws Truncated on overrun.
class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8() { return take(1)[0]; }
    std::uint16_t u16() { return static_cast<std::uint16_t>(readLe(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(readLe(4)); }
    std::uint64_t u64() { return readLe(8); }
    std::span<const std::uint8_t> bytes(std::size_t n) { return take(n); }

    bool expectMagic(const char (&m)[5]) {
        auto got = take(4);
        return std::memcmp(got.data(), m, 4) == 0;
    }

    std::size_t remaining() const { return data_.size() - pos_; }
    std::span<const std::uint8_t> rest() { return take(remaining()); }

private:
    std::span<const std::uint8_t> take(std::size_t n) {
        require(remaining() >= n, Errc::Truncated, "payload truncated");
        auto out = data_.subspan(pos_, n);
        pos_ += n;
        return out;
    }
    std::uint64_t readLe(int n) {
        auto b = take(static_cast<std::size_t>(n));
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
        return v;
    }

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

} // namespace frameprov
