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

#include "reidmstc/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "reidmstc/color.hpp"

namespace reid {

RegionLayout build_region_layout(int height, int width, const PartBoxes& parts) {
    if (height < 16 || width < 8)
        throw std::invalid_argument("build_region_layout: image too small");
    for (int i = 0; i < kNumParts; ++i) {
        if (!parts.boxes[i])
            throw std::invalid_argument(
                std::string("build_region_layout: missing part box \"") +
                part_label_name(static_cast<PartLabel>(i)) + "\"");
        if (!parts.boxes[i]->inside(width, height))
            throw std::invalid_argument(
                std::string("build_region_layout: part box \"") +
                part_label_name(static_cast<PartLabel>(i)) + "\" outside image");
    }

    RegionLayout layout;
    layout.regions.reserve(kNumRegions);
    for (int i = 0; i < kNumParts; ++i)
        layout.regions.push_back({*parts.boxes[i], RegionKind::kPart});
    for (int s = 0; s < kNumStripes; ++s) {
        const int y0 = s * height / kNumStripes;
        const int y1 = (s + 1) * height / kNumStripes;
        layout.regions.push_back({Rect{0, y0, width, y1 - y0}, RegionKind::kLocal});
    }
    layout.regions.push_back({Rect{0, 0, width, height}, RegionKind::kGlobal});
    return layout;
}

namespace {

// Per-pixel quantization of one block, computed once and shared by every
// window that overlaps it.
struct PixelPlanes {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> hsv_bin[3];
    std::vector<std::uint8_t> lab_bin[3];
    std::vector<std::uint16_t> hsv_joint;
    std::vector<std::uint16_t> lab_joint;
    std::vector<float> luma;

    [[nodiscard]] std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * width + x;
    }
};

int quantize(double value, double lo, double hi, int bins) {
    const double t = (value - lo) / (hi - lo);
    const int bin = static_cast<int>(t * bins);
    return std::clamp(bin, 0, bins - 1);
}

PixelPlanes build_planes(const Image& image, const Rect& block) {
    PixelPlanes planes;
    planes.width = block.w;
    planes.height = block.h;
    const std::size_t n = static_cast<std::size_t>(block.w) * block.h;
    for (auto& p : planes.hsv_bin) p.resize(n);
    for (auto& p : planes.lab_bin) p.resize(n);
    planes.hsv_joint.resize(n);
    planes.lab_joint.resize(n);
    planes.luma.resize(n);

    for (int y = 0; y < block.h; ++y) {
        for (int x = 0; x < block.w; ++x) {
            const std::uint8_t r = image.at(block.x + x, block.y + y, 0);
            const std::uint8_t g = image.at(block.x + x, block.y + y, 1);
            const std::uint8_t b = image.at(block.x + x, block.y + y, 2);
            const std::size_t i = planes.index(x, y);

            const Hsv hsv = rgb_to_hsv(r, g, b);
            planes.hsv_bin[0][i] =
                static_cast<std::uint8_t>(quantize(hsv.h, 0.0, 360.0, kChannelBins));
            planes.hsv_bin[1][i] =
                static_cast<std::uint8_t>(quantize(hsv.s, 0.0, 1.0, kChannelBins));
            planes.hsv_bin[2][i] =
                static_cast<std::uint8_t>(quantize(hsv.v, 0.0, 1.0, kChannelBins));
            planes.hsv_joint[i] = static_cast<std::uint16_t>(
                quantize(hsv.h, 0.0, 360.0, kJointBinsPerChannel) * 64 +
                quantize(hsv.s, 0.0, 1.0, kJointBinsPerChannel) * 8 +
                quantize(hsv.v, 0.0, 1.0, kJointBinsPerChannel));

            const Lab lab = rgb_to_lab(r, g, b);
            planes.lab_bin[0][i] =
                static_cast<std::uint8_t>(quantize(lab.l, 0.0, 100.0, kChannelBins));
            planes.lab_bin[1][i] =
                static_cast<std::uint8_t>(quantize(lab.a, -128.0, 128.0, kChannelBins));
            planes.lab_bin[2][i] =
                static_cast<std::uint8_t>(quantize(lab.b, -128.0, 128.0, kChannelBins));
            planes.lab_joint[i] = static_cast<std::uint16_t>(
                quantize(lab.l, 0.0, 100.0, kJointBinsPerChannel) * 64 +
                quantize(lab.a, -128.0, 128.0, kJointBinsPerChannel) * 8 +
                quantize(lab.b, -128.0, 128.0, kJointBinsPerChannel));

            planes.luma[i] = static_cast<float>(luminance(r, g, b));
        }
    }
    return planes;
}

void normalize_l1(Eigen::VectorXd& descriptor, int offset, int length) {
    const double total = descriptor.segment(offset, length).sum();
    if (total > 0.0) descriptor.segment(offset, length) /= total;
}

// Accumulates one window (given relative to the planes' block) into a
// freshly zeroed descriptor and normalizes each sub-histogram.
Eigen::VectorXd accumulate_window(const PixelPlanes& planes, int wx, int wy, int ww,
                                  int wh) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(kRawDescriptorDim);
    constexpr int kHsvJointOff = 3 * kChannelBins;
    constexpr int kLabOff = kColorBlockDim;
    constexpr int kLabJointOff = kColorBlockDim + 3 * kChannelBins;
    constexpr int kSiltpOff = 2 * kColorBlockDim;
    constexpr int kHogOff = kSiltpOff + kSiltpBins;

    for (int y = wy; y < wy + wh; ++y) {
        for (int x = wx; x < wx + ww; ++x) {
            const std::size_t i = planes.index(x, y);
            for (int c = 0; c < 3; ++c) {
                d[c * kChannelBins + planes.hsv_bin[c][i]] += 1.0;
                d[kLabOff + c * kChannelBins + planes.lab_bin[c][i]] += 1.0;
            }
            d[kHsvJointOff + planes.hsv_joint[i]] += 1.0;
            d[kLabJointOff + planes.lab_joint[i]] += 1.0;
        }
    }

    // Texture histograms use window-interior pixels so that every neighbor
    // lies inside the window.
    constexpr int kNeighborDy[4] = {0, 1, 0, -1};   // right, down, left, up
    constexpr int kNeighborDx[4] = {1, 0, -1, 0};
    for (int y = wy + 1; y < wy + wh - 1; ++y) {
        for (int x = wx + 1; x < wx + ww - 1; ++x) {
            const double center = planes.luma[planes.index(x, y)];
            const double upper = (1.0 + kSiltpTau) * center;
            const double lower = (1.0 - kSiltpTau) * center;
            int code = 0;
            for (int k = 0; k < 4; ++k) {
                const double neighbor =
                    planes.luma[planes.index(x + kNeighborDx[k], y + kNeighborDy[k])];
                int ternary = 0;
                if (neighbor > upper)
                    ternary = 1;
                else if (neighbor < lower)
                    ternary = 2;
                code = code * 3 + ternary;
            }
            d[kSiltpOff + code] += 1.0;

            const double gx = 0.5 * (planes.luma[planes.index(x + 1, y)] -
                                     planes.luma[planes.index(x - 1, y)]);
            const double gy = 0.5 * (planes.luma[planes.index(x, y + 1)] -
                                     planes.luma[planes.index(x, y - 1)]);
            const double magnitude = std::hypot(gx, gy);
            if (magnitude > 0.0) {
                double theta = std::atan2(gy, gx);
                if (theta < 0.0) theta += std::numbers::pi;
                if (theta >= std::numbers::pi) theta = 0.0;
                const int bin = std::min(
                    kHogBins - 1,
                    static_cast<int>(theta / std::numbers::pi * kHogBins));
                d[kHogOff + bin] += magnitude;
            }
        }
    }

    for (int c = 0; c < 3; ++c) {
        normalize_l1(d, c * kChannelBins, kChannelBins);
        normalize_l1(d, kLabOff + c * kChannelBins, kChannelBins);
    }
    normalize_l1(d, kHsvJointOff, kJointBins);
    normalize_l1(d, kLabJointOff, kJointBins);
    normalize_l1(d, kSiltpOff, kSiltpBins);
    normalize_l1(d, kHogOff, kHogBins);
    return d;
}

void check_region(const Image& image, const Rect& region, const char* who) {
    if (region.w <= 0 || region.h <= 0)
        throw std::invalid_argument(std::string(who) + ": empty region");
    if (!region.inside(image.width(), image.height()))
        throw std::invalid_argument(std::string(who) + ": region outside image");
}

}  // namespace

Eigen::VectorXd window_descriptor(const Image& image, const Rect& window) {
    check_region(image, window, "window_descriptor");
    const PixelPlanes planes = build_planes(image, window);
    return accumulate_window(planes, 0, 0, window.w, window.h);
}

int count_region_windows(const Rect& region, int step_y, int step_x) {
    if (region.h < kWindowHeight || region.w < kWindowWidth) return 1;
    const int rows = (region.h - kWindowHeight) / step_y + 1;
    const int cols = (region.w - kWindowWidth) / step_x + 1;
    return rows * cols;
}

Eigen::VectorXd region_descriptor(const Image& image, const Rect& region, int step_y,
                                  int step_x) {
    check_region(image, region, "region_descriptor");
    if (step_y < 1 || step_x < 1)
        throw std::invalid_argument("region_descriptor: steps must be positive");
    const PixelPlanes planes = build_planes(image, region);

    if (region.h < kWindowHeight || region.w < kWindowWidth)
        return accumulate_window(planes, 0, 0, region.w, region.h);

    Eigen::VectorXd sum = Eigen::VectorXd::Zero(kRawDescriptorDim);
    int count = 0;
    for (int y = 0; y + kWindowHeight <= region.h; y += step_y) {
        for (int x = 0; x + kWindowWidth <= region.w; x += step_x) {
            sum += accumulate_window(planes, x, y, kWindowWidth, kWindowHeight);
            ++count;
        }
    }
    return sum / static_cast<double>(count);
}

Eigen::VectorXd log_transform(const Eigen::VectorXd& values) {
    if ((values.array() < 0.0).any())
        throw std::invalid_argument("log_transform: negative entry");
    Eigen::VectorXd out = values.array().log1p();
    const double norm = out.norm();
    if (norm > 0.0) out /= norm;
    return out;
}

}  // namespace reid
