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

#include <Eigen/Core>
#include <vector>

#include "reidmstc/image.hpp"

namespace reid {

/// Region families of the semantic region representation: body parts,
/// horizontal stripes, and the whole image.
enum class RegionKind : int { kPart = 0, kLocal = 1, kGlobal = 2 };

inline constexpr int kNumRegionKinds = 3;
inline constexpr int kNumStripes = 4;
/// parts + stripes + global
inline constexpr int kNumRegions = kNumParts + kNumStripes + 1;

struct Region {
    Rect rect;
    RegionKind kind = RegionKind::kGlobal;
};

/// The ordered region set of one image: the four part boxes, four
/// equal-height full-width stripes top to bottom, then the whole image.
struct RegionLayout {
    std::vector<Region> regions;
};

RegionLayout build_region_layout(int height, int width, const PartBoxes& parts);

// Sliding-window geometry. The window is 16 rows by 8 columns, advancing
// 8 rows vertically and 4 columns horizontally (50% overlap both ways).
inline constexpr int kWindowHeight = 16;
inline constexpr int kWindowWidth = 8;
inline constexpr int kWindowStepY = 8;
inline constexpr int kWindowStepX = 4;

// Fixed layout of the per-window descriptor. Sub-histograms, in order:
// HSV 16 bins per channel, HSV 8x8x8 joint, the same pair for LAB, an
// 81-pattern SILTP histogram, and 9 unsigned HOG orientation bins.
inline constexpr int kChannelBins = 16;
inline constexpr int kJointBinsPerChannel = 8;
inline constexpr int kJointBins = 512;
inline constexpr int kSiltpBins = 81;  // 3^4 patterns, 4 neighbors
inline constexpr int kHogBins = 9;
inline constexpr double kSiltpTau = 0.3;

inline constexpr int kColorBlockDim = 3 * kChannelBins + kJointBins;  // 560
inline constexpr int kRawDescriptorDim = 2 * kColorBlockDim + kSiltpBins + kHogBins;

/// Descriptor of one pixel block: every sub-histogram L1-normalized (or
/// all-zero when it has no mass). Defined for arbitrary block sizes; the
/// texture histograms use the block-interior pixels.
Eigen::VectorXd window_descriptor(const Image& image, const Rect& window);

/// Mean of the descriptors of all sliding windows fully inside the region.
/// Regions narrower or shorter than one window fall back to a single
/// window covering the whole region. The step sizes are overridable; every
/// caller in the toolkit uses the defaults.
Eigen::VectorXd region_descriptor(const Image& image, const Rect& region,
                                  int step_y = kWindowStepY,
                                  int step_x = kWindowStepX);

/// Number of sliding windows region_descriptor pools over.
int count_region_windows(const Rect& region, int step_y = kWindowStepY,
                         int step_x = kWindowStepX);

/// Elementwise ln(1 + x) followed by L2 normalization; the zero vector is
/// returned unchanged. Entries must be non-negative.
Eigen::VectorXd log_transform(const Eigen::VectorXd& values);

}  // namespace reid
