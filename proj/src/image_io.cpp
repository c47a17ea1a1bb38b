#include "tslam/image.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

namespace tslam {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

GrayImage load_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw DatasetInvalid("cannot open " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw DatasetInvalid("png reader allocation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw DatasetInvalid("png info allocation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DatasetInvalid("corrupt png: " + path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const png_byte color = png_get_color_type(png, info);
    const png_byte depth = png_get_bit_depth(png, info);

    if (depth == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const int channels = png_get_channels(png, info);
    std::vector<std::uint8_t> row(static_cast<size_t>(width) * channels);
    GrayImage img(static_cast<int>(width), static_cast<int>(height));
    for (png_uint_32 y = 0; y < height; ++y) {
        png_read_row(png, row.data(), nullptr);
        for (png_uint_32 x = 0; x < width; ++x) {
            if (channels >= 3) {
                const float r = row[x * channels + 0];
                const float g = row[x * channels + 1];
                const float b = row[x * channels + 2];
                img.at(static_cast<int>(x), static_cast<int>(y)) =
                    0.299f * r + 0.587f * g + 0.114f * b;
            } else {
                img.at(static_cast<int>(x), static_cast<int>(y)) = row[x];
            }
        }
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

GrayImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DatasetInvalid("cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P5" && magic != "P2") throw DatasetInvalid("not a PGM file: " + path);
    auto next_token = [&in]() {
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return tok;
        }
        throw DatasetInvalid("truncated PGM header");
    };
    const int width = std::stoi(next_token());
    const int height = std::stoi(next_token());
    const int maxval = std::stoi(next_token());
    if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 255) {
        throw DatasetInvalid("unsupported PGM header");
    }
    GrayImage img(width, height);
    if (magic == "P5") {
        in.get();
        std::vector<std::uint8_t> buf(static_cast<size_t>(width) * height);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (!in) throw DatasetInvalid("truncated PGM payload");
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x) img.at(x, y) = buf[static_cast<size_t>(y) * width + x];
    } else {
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x) {
                int v;
                if (!(in >> v)) throw DatasetInvalid("truncated PGM payload");
                img.at(x, y) = static_cast<float>(v);
            }
    }
    return img;
}

} // namespace

GrayImage load_image(const std::string& path) {
    if (ends_with(path, ".pgm") || ends_with(path, ".PGM")) return load_pgm(path);
    return load_png(path);
}

void save_png(const GrayImage& img, const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw DatasetInvalid("cannot write " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw DatasetInvalid("png writer allocation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw DatasetInvalid("png info allocation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw DatasetInvalid("png write failed: " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()),
                 static_cast<png_uint_32>(img.height()), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    const std::vector<std::uint8_t> bytes = img.to_bytes();
    for (int y = 0; y < img.height(); ++y) {
        png_write_row(png, const_cast<png_bytep>(bytes.data() + static_cast<size_t>(y) * img.width()));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void save_pgm(const GrayImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DatasetInvalid("cannot write " + path);
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    const std::vector<std::uint8_t> bytes = img.to_bytes();
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

} // namespace tslam
