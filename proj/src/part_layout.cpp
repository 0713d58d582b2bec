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

#include "reidmstc/part_layout.hpp"

#include <cmath>
#include <stdexcept>

namespace reid {

PartBoxes fallback_part_layout(int height, int width) {
    if (height < 16 || width < 8)
        throw std::invalid_argument("fallback_part_layout: image too small");

    const int head_end = height / 6;
    const int torso_end = (11 * height) / 20;

    const int head_x0 = static_cast<int>(std::llround(width / 4.0));
    const int head_x1 = width - head_x0;
    const int torso_x0 = static_cast<int>(std::llround(0.15 * width));
    const int torso_x1 = width - torso_x0;
    const int leg_x0 = static_cast<int>(std::llround(0.10 * width));
    const int leg_x1 = width - leg_x0;
    // Equal leg widths keep the two boxes mirror images even for odd widths.
    const int leg_w = width / 2 - leg_x0;

    PartBoxes parts;
    parts[PartLabel::kHead] = Rect{head_x0, 0, head_x1 - head_x0, head_end};
    parts[PartLabel::kTorso] =
        Rect{torso_x0, head_end, torso_x1 - torso_x0, torso_end - head_end};
    parts[PartLabel::kLeftLeg] = Rect{leg_x0, torso_end, leg_w, height - torso_end};
    parts[PartLabel::kRightLeg] =
        Rect{leg_x1 - leg_w, torso_end, leg_w, height - torso_end};
    return parts;
}

}  // namespace reid
