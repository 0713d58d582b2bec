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

#include "reidmstc/image.hpp"

namespace reid {

/// Deterministic proportional part layout for images without part-box
/// annotations. Bands: head rows [0, h/6) over the middle half of the
/// width; torso rows [h/6, 11h/20) over the central 70%; the two legs
/// split the central 80% below that, mirrored about the vertical center.
/// Requires height >= 16 and width >= 8.
PartBoxes fallback_part_layout(int height, int width);

}  // namespace reid
