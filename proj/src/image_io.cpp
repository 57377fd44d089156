#include "histdoc/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "histdoc/formats.hpp"

namespace histdoc {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

BinaryMask read_pgm(const std::filesystem::path& path, int scale) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open mask file: " + path.string());

    const auto next_token = [&]() -> std::string {
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return tok;
        }
        throw input_error("truncated PGM header: " + path.string());
    };

    const std::string magic = next_token();
    if (magic != "P5" && magic != "P2") {
        throw input_error("unsupported PGM magic '" + magic + "': " + path.string());
    }
    const int w = std::stoi(next_token());
    const int h = std::stoi(next_token());
    const int maxval = std::stoi(next_token());
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255) {
        throw input_error("bad PGM header: " + path.string());
    }

    BinaryMask mask(w, h, scale);
    if (magic == "P5") {
        in.get();  // single whitespace after maxval
        std::vector<unsigned char> row(static_cast<std::size_t>(w));
        for (int y = 0; y < h; ++y) {
            in.read(reinterpret_cast<char*>(row.data()), w);
            if (!in) throw input_error("truncated PGM data: " + path.string());
            for (int x = 0; x < w; ++x) mask.set(x, y, row[x] != 0);
        }
    } else {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                mask.set(x, y, std::stoi(next_token()) != 0);
            }
        }
    }
    return mask;
}

BinaryMask read_png(const std::filesystem::path& path, int scale) {
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw input_error("cannot open mask file: " + path.string());

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw input_error("png init failed: " + path.string());
    }
    std::vector<png_bytep> row_ptrs;
    std::vector<png_byte> data;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw input_error("png read failed: " + path.string());
    }

    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_set_strip_16(png);
    png_set_packing(png);
    if (png_get_color_type(png, info) == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (png_get_color_type(png, info) & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (png_get_color_type(png, info) == PNG_COLOR_TYPE_RGB ||
        png_get_color_type(png, info) == PNG_COLOR_TYPE_PALETTE) {
        png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    }
    png_read_update_info(png, info);

    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));
    const std::size_t stride = png_get_rowbytes(png, info);
    data.resize(stride * h);
    row_ptrs.resize(h);
    for (int y = 0; y < h; ++y) row_ptrs[y] = data.data() + stride * y;
    png_read_image(png, row_ptrs.data());
    png_destroy_read_struct(&png, &info, nullptr);

    BinaryMask mask(w, h, scale);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) mask.set(x, y, data[stride * y + x] != 0);
    }
    return mask;
}

void write_png_gray8(const std::filesystem::path& path, int w, int h,
                     const std::vector<png_byte>& gray) {
    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) throw input_error("cannot write image file: " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw input_error("png init failed: " + path.string());
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw input_error("png write failed: " + path.string());
    }

    png_init_io(png, fp.get());
    png_set_compression_level(png, 6);
    png_set_IHDR(png, info, w, h, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < h; ++y) {
        png_write_row(png, const_cast<png_bytep>(gray.data() + static_cast<std::size_t>(y) * w));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace

BinaryMask read_mask(const std::filesystem::path& path, int scale) {
    if (scale < 1) throw input_error("mask scale must be >= 1");
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw input_error("cannot open mask file: " + path.string());
    unsigned char magic[2] = {0, 0};
    probe.read(reinterpret_cast<char*>(magic), 2);
    probe.close();

    if (magic[0] == 'P' && (magic[1] == '5' || magic[1] == '2')) return read_pgm(path, scale);
    if (magic[0] == 0x89 && magic[1] == 'P') return read_png(path, scale);
    throw input_error("unrecognized mask format (expected PGM or PNG): " + path.string());
}

void write_mask_pgm(const std::filesystem::path& path, const BinaryMask& mask) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write mask file: " + path.string());
    out << "P5\n" << mask.width << " " << mask.height << "\n255\n";
    std::vector<char> row(static_cast<std::size_t>(mask.width));
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) row[x] = mask.at(x, y) ? '\xff' : '\0';
        out.write(row.data(), mask.width);
    }
    if (!out) throw input_error("short write: " + path.string());
}

void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask) {
    std::vector<png_byte> gray(static_cast<std::size_t>(mask.width) * mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            gray[static_cast<std::size_t>(y) * mask.width + x] = mask.at(x, y) ? 255 : 0;
        }
    }
    write_png_gray8(path, mask.width, mask.height, gray);
}

ImageRGB::ImageRGB(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b)
    : width(w), height(h), px(static_cast<std::size_t>(w) * h * 3) {
    for (std::size_t i = 0; i < px.size(); i += 3) {
        px[i] = r;
        px[i + 1] = g;
        px[i + 2] = b;
    }
}

void ImageRGB::put(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    if (x < 0 || x >= width || y < 0 || y >= height) return;
    const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    px[i] = r;
    px[i + 1] = g;
    px[i + 2] = b;
}

void write_png_rgb(const std::filesystem::path& path, const ImageRGB& img) {
    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) throw input_error("cannot write image file: " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw input_error("png init failed: " + path.string());
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw input_error("png write failed: " + path.string());
    }

    png_init_io(png, fp.get());
    png_set_compression_level(png, 6);
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y) {
        png_write_row(png, const_cast<png_bytep>(
                               img.px.data() + static_cast<std::size_t>(y) * img.width * 3));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace histdoc
