#include "frameprov/io.hpp"

#include "frameprov/errors.hpp"

#include <algorithm>
#include <fstream>
#include <string>

namespace frameprov {

std::vector<std::uint8_t> readFile(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), Errc::Io, "cannot open file: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    require(!in.bad(), Errc::Io, "read failed: " + path.string());
    return bytes;
}

void writeFile(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(out.good(), Errc::Io, "cannot write file: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    require(out.good(), Errc::Io, "write failed: " + path.string());
}

namespace {

// Skips PPM whitespace and '#' comments, then reads one decimal token.
std::uint64_t ppmInt(std::span<const std::uint8_t> bytes, std::size_t& pos) {
    auto isSpace = [](std::uint8_t c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
    while (pos < bytes.size()) {
        if (isSpace(bytes[pos])) {
            ++pos;
        } else if (bytes[pos] == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else {
            break;
        }
    }
    require(pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9', Errc::Parse,
            "malformed PPM header");
    std::uint64_t v = 0;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
        v = v * 10 + (bytes[pos] - '0');
        require(v <= 0xffffffffull, Errc::Parse, "PPM header value too large");
        ++pos;
    }
    return v;
}

} // namespace

Frame readPpm(std::span<const std::uint8_t> bytes) {
    require(bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6', Errc::BadMagic,
            "not a binary PPM (P6) file");
    std::size_t pos = 2;
    std::uint64_t width = ppmInt(bytes, pos);
    std::uint64_t height = ppmInt(bytes, pos);
    std::uint64_t maxval = ppmInt(bytes, pos);
    require(maxval == 255, Errc::Parse, "PPM maxval must be 255");
    require(pos < bytes.size(), Errc::Truncated, "PPM pixel data missing");
    ++pos; // single whitespace byte after maxval
    std::size_t need = static_cast<std::size_t>(3) * width * height;
    require(bytes.size() - pos == need, Errc::LengthMismatch,
            "PPM pixel data length does not match header");
    return Frame(static_cast<std::uint32_t>(width), static_cast<std::uint32_t>(height),
                 std::vector<std::uint8_t>(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                           bytes.end()));
}

std::vector<std::uint8_t> writePpm(const Frame& frame) {
    std::string header =
        "P6\n" + std::to_string(frame.width) + " " + std::to_string(frame.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), frame.pixels.begin(), frame.pixels.end());
    return out;
}

std::vector<Frame> loadPpmDirectory(const std::filesystem::path& dir) {
    require(std::filesystem::is_directory(dir), Errc::Io, "not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".ppm")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
    std::vector<Frame> frames;
    frames.reserve(files.size());
    for (const auto& f : files) frames.push_back(readPpm(readFile(f)));
    return frames;
}

std::vector<Frame> splitRawRgb(std::span<const std::uint8_t> bytes, std::uint32_t width,
                               std::uint32_t height) {
    require(width >= 1 && height >= 1, Errc::Dimension, "zero-sized frames");
    std::size_t frameBytes = static_cast<std::size_t>(3) * width * height;
    require(bytes.size() % frameBytes == 0, Errc::LengthMismatch,
            "raw RGB file length is not a multiple of the frame size");
    std::vector<Frame> frames;
    frames.reserve(bytes.size() / frameBytes);
    for (std::size_t off = 0; off < bytes.size(); off += frameBytes) {
        auto span = bytes.subspan(off, frameBytes);
        frames.emplace_back(width, height, std::vector<std::uint8_t>(span.begin(), span.end()));
    }
    return frames;
}

} // namespace frameprov
