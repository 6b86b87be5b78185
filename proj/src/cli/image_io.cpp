// Copyright 2026-present the depthedge project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

#include "depthedge/cli.hpp"
#include "depthedge/errors.hpp"

namespace depthedge::cli {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_file(const std::filesystem::path& path, const char* mode) {
    File f(std::fopen(path.c_str(), mode));
    if (!f) throw IoError("cannot open " + path.string());
    return f;
}

struct DecodedPng {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t channels = 0;
    std::size_t bytes_per_sample = 1;
    std::vector<std::uint8_t> data;
};

enum class PngTarget { rgb8, gray_any };

// Classic libpng decode. Every C++ object touched after setjmp is declared
// before it so a longjmp skips no destructors.
bool decode_png(std::FILE* f, PngTarget target, DecodedPng& out, std::string& error) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png == nullptr) {
        error = "out of memory";
        return false;
    }
    png_infop info = png_create_info_struct(png);
    std::vector<png_bytep> rows;
    if (info == nullptr || setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        error = "corrupt PNG stream";
        return false;
    }
    png_init_io(png, f);
    png_read_info(png, info);
    const png_byte color = png_get_color_type(png, info);
    const png_byte depth = png_get_bit_depth(png, info);

    if (target == PngTarget::rgb8) {
        if (depth == 16) png_set_strip_16(png);
        if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
        if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
        if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
        png_set_strip_alpha(png);
    } else {
        if (color != PNG_COLOR_TYPE_GRAY && color != PNG_COLOR_TYPE_GRAY_ALPHA) {
            png_destroy_read_struct(&png, &info, nullptr);
            error = "expected a single-channel PNG";
            return false;
        }
        if (depth < 8) png_set_expand_gray_1_2_4_to_8(png);
        png_set_strip_alpha(png);
    }
    png_read_update_info(png, info);

    out.width = png_get_image_width(png, info);
    out.height = png_get_image_height(png, info);
    out.channels = png_get_channels(png, info);
    out.bytes_per_sample = png_get_bit_depth(png, info) == 16 ? 2 : 1;
    const std::size_t row_bytes = png_get_rowbytes(png, info);
    out.data.assign(row_bytes * out.height, 0);
    rows.resize(out.height);
    for (std::size_t y = 0; y < out.height; ++y) rows[y] = out.data.data() + y * row_bytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return true;
}

bool encode_png(std::FILE* f, std::size_t width, std::size_t height, int color_type, int bit_depth,
                const std::vector<std::uint8_t>& data, std::string& error) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png == nullptr) {
        error = "out of memory";
        return false;
    }
    png_infop info = png_create_info_struct(png);
    const std::size_t row_bytes = data.size() / height;
    std::vector<png_bytep> rows(height);
    for (std::size_t y = 0; y < height; ++y) rows[y] = const_cast<png_bytep>(data.data() + y * row_bytes);
    if (info == nullptr || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        error = "PNG encoding failed";
        return false;
    }
    png_init_io(png, f);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), bit_depth, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return true;
}

DecodedPng read_png(const std::filesystem::path& path, PngTarget target) {
    File f = open_file(path, "rb");
    DecodedPng decoded;
    std::string error;
    if (!decode_png(f.get(), target, decoded, error)) throw IoError(path.string() + ": " + error);
    return decoded;
}

void write_png_bytes(const std::filesystem::path& path, std::size_t width, std::size_t height, int color_type,
                     int bit_depth, const std::vector<std::uint8_t>& data) {
    if (width == 0 || height == 0) throw ShapeError("cannot write an empty image to " + path.string());
    File f = open_file(path, "wb");
    std::string error;
    if (!encode_png(f.get(), width, height, color_type, bit_depth, data, error)) {
        throw IoError(path.string() + ": " + error);
    }
    if (std::fflush(f.get()) != 0) throw IoError("write failed: " + path.string());
}

// Skips whitespace and '#' comments in a PPM header, then reads a number.
std::size_t ppm_number(std::istream& in, const std::string& path) {
    int ch = in.peek();
    while (ch != EOF && (std::isspace(ch) || ch == '#')) {
        if (ch == '#') {
            std::string skip;
            std::getline(in, skip);
        } else {
            in.get();
        }
        ch = in.peek();
    }
    std::size_t value = 0;
    if (!(in >> value)) throw IoError(path + ": malformed PPM header");
    return value;
}

RgbImage read_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    char magic[2]{};
    in.read(magic, 2);
    if (magic[0] != 'P' || magic[1] != '6') throw IoError(path.string() + ": only binary PPM (P6) is supported");
    const std::size_t w = ppm_number(in, path.string());
    const std::size_t h = ppm_number(in, path.string());
    const std::size_t maxval = ppm_number(in, path.string());
    if (maxval != 255) throw IoError(path.string() + ": only 8-bit PPM (maxval 255) is supported");
    if (w == 0 || h == 0) throw IoError(path.string() + ": empty PPM");
    in.get();  // single whitespace before the raster
    RgbImage image(w, h);
    in.read(reinterpret_cast<char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(image.pixels.size())) {
        throw IoError(path.string() + ": truncated PPM raster");
    }
    return image;
}

}  // namespace

RgbImage read_image(const std::filesystem::path& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw IoError("cannot open " + path.string());
    unsigned char sig[8]{};
    probe.read(reinterpret_cast<char*>(sig), 8);
    const auto got = static_cast<std::size_t>(probe.gcount());
    probe.close();
    if (got >= 2 && sig[0] == 'P' && sig[1] == '6') return read_ppm(path);
    if (got < 8 || png_sig_cmp(sig, 0, 8) != 0) throw IoError(path.string() + ": not a PNG or binary PPM file");

    DecodedPng d = read_png(path, PngTarget::rgb8);
    if (d.channels != 3 || d.bytes_per_sample != 1) throw IoError(path.string() + ": unexpected PNG layout");
    RgbImage image;
    image.width = d.width;
    image.height = d.height;
    image.pixels = std::move(d.data);
    return image;
}

void write_png(const std::filesystem::path& path, const RgbImage& image) {
    write_png_bytes(path, image.width, image.height, PNG_COLOR_TYPE_RGB, 8, image.pixels);
}

void write_ppm(const std::filesystem::path& path, const RgbImage& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string());
    out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

Gray16 read_png_gray16(const std::filesystem::path& path) {
    DecodedPng d = read_png(path, PngTarget::gray_any);
    if (d.channels != 1) throw IoError(path.string() + ": expected a single-channel PNG");
    Gray16 g{d.width, d.height, std::vector<std::uint16_t>(d.width * d.height)};
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        g.values[i] = d.bytes_per_sample == 2
                          ? static_cast<std::uint16_t>((d.data[2 * i] << 8) | d.data[2 * i + 1])
                          : d.data[i];
    }
    return g;
}

void write_png_gray16(const std::filesystem::path& path, const Gray16& image) {
    if (image.values.size() != image.width * image.height) throw ShapeError("Gray16 size does not match its extents");
    std::vector<std::uint8_t> bytes(image.values.size() * 2);
    for (std::size_t i = 0; i < image.values.size(); ++i) {
        bytes[2 * i] = static_cast<std::uint8_t>(image.values[i] >> 8);
        bytes[2 * i + 1] = static_cast<std::uint8_t>(image.values[i] & 0xff);
    }
    write_png_bytes(path, image.width, image.height, PNG_COLOR_TYPE_GRAY, 16, bytes);
}

Gray16 quantize_depth(const graph::DepthMap& depth) {
    Gray16 g{depth.width(), depth.height(), std::vector<std::uint16_t>(depth.values().size())};
    auto v = depth.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double d = std::clamp(static_cast<double>(v[i]), 0.0, 1.0);
        g.values[i] = static_cast<std::uint16_t>(std::lround(d * 65535.0));
    }
    return g;
}

graph::DepthMap dequantize_depth(const Gray16& image) {
    Tensor t(Dims{1, 1, image.height, image.width});
    auto dst = t.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = static_cast<float>(image.values[i] / 65535.0);
    return graph::DepthMap(std::move(t));
}

}  // namespace depthedge::cli
