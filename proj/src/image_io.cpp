#include "softfinger/tracker.hpp"

#include "softfinger/io_util.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <memory>

namespace softfinger {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// PPM readers tolerate comments and arbitrary whitespace in the header.
int next_ppm_token(std::FILE* f) {
    int c = std::fgetc(f);
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = std::fgetc(f);
        } else if (!std::isspace(c)) {
            break;
        }
        c = std::fgetc(f);
    }
    if (c == EOF) return -1;
    int value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        c = std::fgetc(f);
    }
    return value;
}

}  // namespace

Image read_ppm(const std::filesystem::path& path) {
    FilePtr f(std::fopen(path.string().c_str(), "rb"));
    if (!f) {
        throw ImageFormatError("cannot open: " + path.string());
    }
    char magic[2] = {0, 0};
    if (std::fread(magic, 1, 2, f.get()) != 2 || magic[0] != 'P' || magic[1] != '6') {
        throw ImageFormatError(path.string() + ": not a binary PPM (P6)");
    }
    const int w = next_ppm_token(f.get());
    const int h = next_ppm_token(f.get());
    const int maxval = next_ppm_token(f.get());
    if (w < 1 || h < 1 || maxval != 255) {
        throw ImageFormatError(path.string() + ": unsupported PPM header");
    }
    Image img{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h * 3)};
    if (std::fread(img.rgb.data(), 1, img.rgb.size(), f.get()) != img.rgb.size()) {
        throw ImageFormatError(path.string() + ": truncated pixel data");
    }
    return img;
}

void write_ppm(const Image& img, const std::filesystem::path& path) {
    if (!img.valid()) {
        throw std::invalid_argument("invalid image");
    }
    std::string out = "P6\n" + std::to_string(img.width) + " " +
                      std::to_string(img.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(img.rgb.data()), img.rgb.size());
    write_file_atomic(path, out);
}

Image read_png(const std::filesystem::path& path) {
    FilePtr f(std::fopen(path.string().c_str(), "rb"));
    if (!f) {
        throw ImageFormatError("cannot open: " + path.string());
    }
    png_byte header[8];
    if (std::fread(header, 1, 8, f.get()) != 8 || png_sig_cmp(header, 0, 8) != 0) {
        throw ImageFormatError(path.string() + ": not a PNG file");
    }
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ImageFormatError("libpng initialization failed");
    }
    Image img;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ImageFormatError(path.string() + ": PNG decode error");
    }
    png_init_io(png, f.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    // normalize everything to 8-bit RGB
    png_set_strip_16(png);
    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    png_set_gray_to_rgb(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    img.width = static_cast<int>(png_get_image_width(png, info));
    img.height = static_cast<int>(png_get_image_height(png, info));
    img.rgb.resize(static_cast<std::size_t>(img.width) * img.height * 3);
    rows.resize(static_cast<std::size_t>(img.height));
    for (int y = 0; y < img.height; ++y) {
        rows[static_cast<std::size_t>(y)] =
            img.rgb.data() + static_cast<std::size_t>(y) * img.width * 3;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void write_png(const Image& img, const std::filesystem::path& path) {
    if (!img.valid()) {
        throw std::invalid_argument("invalid image");
    }
    const std::filesystem::path tmp = path.string() + ".tmp";
    FilePtr f(std::fopen(tmp.string().c_str(), "wb"));
    if (!f) {
        throw ImageFormatError("cannot open for writing: " + tmp.string());
    }
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw ImageFormatError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw ImageFormatError(path.string() + ": PNG encode error");
    }
    png_init_io(png, f.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y) {
        png_write_row(png, const_cast<png_bytep>(
                               img.rgb.data() + static_cast<std::size_t>(y) * img.width * 3));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    f.reset();
    std::filesystem::rename(tmp, path);
}

Image read_image(const std::filesystem::path& path) {
    FilePtr f(std::fopen(path.string().c_str(), "rb"));
    if (!f) {
        throw ImageFormatError("cannot open: " + path.string());
    }
    unsigned char magic[2] = {0, 0};
    const std::size_t got = std::fread(magic, 1, 2, f.get());
    f.reset();
    if (got == 2 && magic[0] == 'P' && magic[1] == '6') {
        return read_ppm(path);
    }
    if (got == 2 && magic[0] == 0x89 && magic[1] == 'P') {
        return read_png(path);
    }
    throw ImageFormatError(path.string() + ": unrecognized image format (PNG or P6 PPM expected)");
}

}  // namespace softfinger
