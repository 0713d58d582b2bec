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

#include <cstdint>
#include <string>

#include "reidmstc/manifest.hpp"

namespace reid {

/// Rendering knobs for the synthetic dataset. Identity appearance (part
/// colors, clothing texture) is stable across views; each camera view adds
/// identity-independent nuisances: a hue rotation, a brightness factor,
/// horizontal jitter, and pixel noise.
struct SyntheticParams {
    int image_width = 48;
    int image_height = 128;
    double view_hue_shift_deg = 35.0;     // hue rotation per view index
    double view_brightness_step = 0.18;   // multiplicative dimming per view index
    int jitter_px = 2;                    // max |horizontal shift| per image
    int noise_amplitude = 10;             // max |additive RGB noise| per pixel
    double texture_amplitude_min = 0.12;  // clothing stripe contrast
    double texture_amplitude_max = 0.30;
};

/// Writes n_ids x views PNG images (one person per identity, one image per
/// view) plus part-box sidecars and a manifest.json into out_dir, and
/// returns the manifest. Byte-identical output for identical arguments.
Manifest generate_synthetic(int n_ids, int views, std::uint64_t seed,
                            const std::string& out_dir,
                            const SyntheticParams& params = {});

}  // namespace reid
