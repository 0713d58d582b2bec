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

namespace reid {

/// H in [0, 360), S and V in [0, 1].
struct Hsv {
    double h = 0.0;
    double s = 0.0;
    double v = 0.0;
};

/// CIE L*a*b* under D65; L in [0, 100], a and b roughly in [-128, 128].
struct Lab {
    double l = 0.0;
    double a = 0.0;
    double b = 0.0;
};

Hsv rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);
std::array<std::uint8_t, 3> hsv_to_rgb(const Hsv& hsv);
Lab rgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// Rec. 601 luma on [0, 255].
inline double luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    return 0.299 * r + 0.587 * g + 0.114 * b;
}

}  // namespace reid
