// This file is part of the reidmstc toolkit.
//
// Copyright 2026 the reidmstc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "reidmstc/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace reid {

const char* part_label_name(PartLabel label) {
    switch (label) {
        case PartLabel::kHead: return "head";
        case PartLabel::kTorso: return "torso";
        case PartLabel::kLeftLeg: return "left_leg";
        case PartLabel::kRightLeg: return "right_leg";
    }
    return "?";
}

std::optional<PartLabel> parse_part_label(const std::string& name) {
    if (name == "head") return PartLabel::kHead;
    if (name == "torso") return PartLabel::kTorso;
    if (name == "left_leg") return PartLabel::kLeftLeg;
    if (name == "right_leg") return PartLabel::kRightLeg;
    return std::nullopt;
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f != nullptr) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Image load_ppm(std::ifstream& in, const std::string& path) {
    std::string magic;
    in >> magic;
    if (magic != "P6") throw std::runtime_error("not a P6 PPM file: " + path);
    int width = 0, height = 0, maxval = 0;
    in >> width >> height >> maxval;
    if (!in || width <= 0 || height <= 0 || maxval != 255)
        throw std::runtime_error("unsupported PPM header: " + path);
    in.get();  // single whitespace byte before the raster
    Image image(width, height);
    in.read(reinterpret_cast<char*>(image.data().data()),
            static_cast<std::streamsize>(image.data().size()));
    if (in.gcount() != static_cast<std::streamsize>(image.data().size()))
        throw std::runtime_error("truncated PPM raster: " + path);
    return image;
}

Image load_png_file(const std::string& path) {
    FilePtr file(std::fopen(path.c_str(), "rb"));
    if (!file) throw std::runtime_error("cannot open image: " + path);

    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png == nullptr) throw std::runtime_error("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw std::runtime_error("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("undecodable PNG file: " + path);
    }

    png_init_io(png, file.get());
    png_read_info(png, info);

    png_uint_32 width = png_get_image_width(png, info);
    png_uint_32 height = png_get_image_height(png, info);
    int bit_depth = png_get_bit_depth(png, info);
    int color_type = png_get_color_type(png, info);

    // Normalize every input variant to 8-bit RGB.
    if (bit_depth == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_read_update_info(png, info);

    Image image(static_cast<int>(width), static_cast<int>(height));
    std::vector<png_bytep> rows(height);
    for (png_uint_32 y = 0; y < height; ++y)
        rows[y] = image.data().data() + static_cast<std::size_t>(y) * width * 3;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return image;
}

}  // namespace

Image load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open image: " + path);
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in) throw std::runtime_error("undecodable image file: " + path);
    in.seekg(0);
    if (magic[0] == 'P' && magic[1] == '6') return load_ppm(in, path);
    if (static_cast<unsigned char>(magic[0]) == 0x89 && magic[1] == 'P') {
        in.close();
        return load_png_file(path);
    }
    throw std::runtime_error("unsupported image format: " + path);
}

void save_png(const Image& image, const std::string& path) {
    if (image.empty()) throw std::invalid_argument("save_png: empty image");
    FilePtr file(std::fopen(path.c_str(), "wb"));
    if (!file) throw std::runtime_error("cannot write image: " + path);

    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png == nullptr) throw std::runtime_error("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("PNG write failed: " + path);
    }

    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()),
                 static_cast<png_uint_32>(image.height()), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    // Fixed filter and compression settings keep outputs reproducible.
    png_set_filter(png, 0, PNG_FILTER_NONE);
    png_set_compression_level(png, 6);
    png_write_info(png, info);

    std::vector<png_bytep> rows(image.height());
    for (int y = 0; y < image.height(); ++y)
        rows[y] = const_cast<png_bytep>(image.data().data() +
                                        static_cast<std::size_t>(y) * image.width() * 3);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void save_ppm(const Image& image, const std::string& path) {
    if (image.empty()) throw std::invalid_argument("save_ppm: empty image");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write image: " + path);
    out << "P6\n" << image.width() << " " << image.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.data().data()),
              static_cast<std::streamsize>(image.data().size()));
    if (!out) throw std::runtime_error("short write: " + path);
}

Image resize_bilinear(const Image& source, int target_width, int target_height) {
    if (source.empty()) throw std::invalid_argument("resize_bilinear: empty source");
    if (target_width <= 0 || target_height <= 0)
        throw std::invalid_argument("resize_bilinear: non-positive target size");
    if (source.width() == target_width && source.height() == target_height)
        return source;

    Image out(target_width, target_height);
    const double sx = static_cast<double>(source.width()) / target_width;
    const double sy = static_cast<double>(source.height()) / target_height;
    for (int y = 0; y < target_height; ++y) {
        // Pixel-center convention: destination center maps into source space.
        double fy = (y + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(source.height() - 1));
        int y0 = static_cast<int>(fy);
        int y1 = std::min(y0 + 1, source.height() - 1);
        double wy = fy - y0;
        for (int x = 0; x < target_width; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(source.width() - 1));
            int x0 = static_cast<int>(fx);
            int x1 = std::min(x0 + 1, source.width() - 1);
            double wx = fx - x0;
            for (int c = 0; c < 3; ++c) {
                double top = (1.0 - wx) * source.at(x0, y0, c) + wx * source.at(x1, y0, c);
                double bottom =
                    (1.0 - wx) * source.at(x0, y1, c) + wx * source.at(x1, y1, c);
                double value = (1.0 - wy) * top + wy * bottom;
                out.at(x, y, c) = static_cast<std::uint8_t>(std::lround(value));
            }
        }
    }
    return out;
}

Rect scale_rect(const Rect& box, double sx, double sy, int target_width,
                int target_height) {
    Rect r;
    r.x = static_cast<int>(std::llround(box.x * sx));
    r.y = static_cast<int>(std::llround(box.y * sy));
    r.w = std::max(1, static_cast<int>(std::llround(box.w * sx)));
    r.h = std::max(1, static_cast<int>(std::llround(box.h * sy)));
    r.x = std::clamp(r.x, 0, target_width - 1);
    r.y = std::clamp(r.y, 0, target_height - 1);
    r.w = std::min(r.w, target_width - r.x);
    r.h = std::min(r.h, target_height - r.y);
    return r;
}

}  // namespace reid
