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

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace reid {

/// Axis-aligned rectangle in pixel units, origin at the top-left corner.
struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    bool operator==(const Rect&) const = default;
    [[nodiscard]] bool inside(int image_width, int image_height) const {
        return x >= 0 && y >= 0 && w > 0 && h > 0 &&
               x + w <= image_width && y + h <= image_height;
    }
};

/// The four semantic body parts, in canonical order.
enum class PartLabel : int { kHead = 0, kTorso = 1, kLeftLeg = 2, kRightLeg = 3 };

inline constexpr int kNumParts = 4;

const char* part_label_name(PartLabel label);
std::optional<PartLabel> parse_part_label(const std::string& name);

/// One rectangle per body part; entries may be absent until a record has
/// been fully annotated or a fallback layout has been applied.
struct PartBoxes {
    std::array<std::optional<Rect>, kNumParts> boxes;

    [[nodiscard]] bool complete() const {
        for (const auto& b : boxes)
            if (!b) return false;
        return true;
    }
    std::optional<Rect>& operator[](PartLabel l) { return boxes[static_cast<int>(l)]; }
    const std::optional<Rect>& operator[](PartLabel l) const {
        return boxes[static_cast<int>(l)];
    }
};

/// Interleaved 8-bit RGB raster.
class Image {
 public:
    Image() = default;
    Image(int width, int height)
        : width_(width), height_(height),
          data_(static_cast<std::size_t>(width) * height * 3, 0) {}

    [[nodiscard]] int width() const { return width_; }
    [[nodiscard]] int height() const { return height_; }
    [[nodiscard]] bool empty() const { return data_.empty(); }

    std::uint8_t& at(int x, int y, int channel) {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + channel];
    }
    [[nodiscard]] std::uint8_t at(int x, int y, int channel) const {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + channel];
    }

    [[nodiscard]] const std::vector<std::uint8_t>& data() const { return data_; }
    std::vector<std::uint8_t>& data() { return data_; }

    bool operator==(const Image&) const = default;

 private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Reads a PNG or binary PPM (P6) file; the format is detected from the
/// magic bytes. Throws std::runtime_error on missing or undecodable files.
Image load_image(const std::string& path);

void save_png(const Image& image, const std::string& path);
void save_ppm(const Image& image, const std::string& path);

/// Bilinear resampling to the target size. Identical dimensions return a
/// pixel-identical copy.
Image resize_bilinear(const Image& source, int target_width, int target_height);

/// Rescales a rectangle by the given ratios and clamps it into the target
/// bounds, keeping at least one pixel of extent per axis.
Rect scale_rect(const Rect& box, double sx, double sy, int target_width,
                int target_height);

}  // namespace reid
