#pragma once

#include "frameprov/frame.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace frameprov {

std::vector<std::uint8_t> readFile(const std::filesystem::path& path);
void writeFile(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// Binary PPM (P6, maxval 255).
Frame readPpm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> writePpm(const Frame& frame);

/// All *.ppm files in a directory, in lexicographic filename order.
std::vector<Frame> loadPpmDirectory(const std::filesystem::path& dir);

/// Splits a raw RGB24 file into frames; length must be a multiple of 3*w*h.
std::vector<Frame> splitRawRgb(std::span<const std::uint8_t> bytes, std::uint32_t width,
                               std::uint32_t height);

} // namespace frameprov
