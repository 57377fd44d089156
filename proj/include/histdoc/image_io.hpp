#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "histdoc/mask.hpp"

namespace histdoc {

/// Reads a PGM (P2/P5) or PNG image as a binary mask: any nonzero pixel
/// is a line pixel. The format is detected from the file magic. `scale`
/// is attached as-is (it is supplied out of band).
BinaryMask read_mask(const std::filesystem::path& path, int scale);

void write_mask_pgm(const std::filesystem::path& path, const BinaryMask& mask);
void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask);

struct ImageRGB {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> px;  // 3 bytes per pixel, row-major

    ImageRGB() = default;
    ImageRGB(int w, int h, std::uint8_t r = 255, std::uint8_t g = 255, std::uint8_t b = 255);
    void put(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
};

void write_png_rgb(const std::filesystem::path& path, const ImageRGB& img);

}  // namespace histdoc
