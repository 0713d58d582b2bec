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

#include "reidmstc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "reidmstc/color.hpp"
#include "reidmstc/common.hpp"
#include "reidmstc/part_layout.hpp"

namespace reid {

namespace {

namespace fs = std::filesystem;

struct PartStyle {
    Hsv color;
    int stripe_period = 0;     // 0 = plain fill
    bool stripes_vertical = false;
    double stripe_amplitude = 0.0;
};

struct IdentityStyle {
    std::array<PartStyle, kNumParts> parts;
};

IdentityStyle draw_identity_style(Rng& rng, const SyntheticParams& params) {
    IdentityStyle style;
    for (auto& part : style.parts) {
        part.color.h = rng.uniform(0.0, 360.0);
        part.color.s = rng.uniform(0.55, 0.95);
        part.color.v = rng.uniform(0.40, 0.90);
        part.stripe_period = 2 + static_cast<int>(rng.next_below(4));
        part.stripes_vertical = rng.next_below(2) == 1;
        part.stripe_amplitude =
            rng.uniform(params.texture_amplitude_min, params.texture_amplitude_max);
    }
    return style;
}

int clamp_u8(double v) {
    return static_cast<int>(std::lround(std::clamp(v, 0.0, 255.0)));
}

Image render(const IdentityStyle& style, int view, Rng& noise_rng,
             const SyntheticParams& params, const PartBoxes& boxes) {
    const int w = params.image_width;
    const int h = params.image_height;
    Image image(w, h);

    const double hue_shift = params.view_hue_shift_deg * view;
    const double brightness =
        std::max(0.25, 1.0 - params.view_brightness_step * view);

    // Per-view background shade; the scene differs between cameras.
    const int bg = 165 - 30 * (view % 3);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c) image.at(x, y, c) = static_cast<std::uint8_t>(bg);

    for (int p = 0; p < kNumParts; ++p) {
        const PartStyle& ps = style.parts[p];
        const Rect box = *boxes.boxes[p];
        for (int y = box.y; y < box.y + box.h; ++y) {
            for (int x = box.x; x < box.x + box.w; ++x) {
                Hsv hsv = ps.color;
                hsv.h += hue_shift;
                hsv.v *= brightness;
                if (ps.stripe_period > 0) {
                    // Texture phase in identity coordinates so it tracks the
                    // jittered box instead of the canvas.
                    const int phase = ps.stripes_vertical ? (x - box.x) : (y - box.y);
                    const int band = (phase / ps.stripe_period) % 2;
                    hsv.v *= band == 0 ? 1.0 + ps.stripe_amplitude
                                       : 1.0 - ps.stripe_amplitude;
                    hsv.v = std::clamp(hsv.v, 0.0, 1.0);
                }
                const auto rgb = hsv_to_rgb(hsv);
                for (int c = 0; c < 3; ++c) image.at(x, y, c) = rgb[c];
            }
        }
    }

    if (params.noise_amplitude > 0) {
        const int span = 2 * params.noise_amplitude + 1;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                for (int c = 0; c < 3; ++c) {
                    const int noise = static_cast<int>(noise_rng.next_below(
                                          static_cast<std::uint64_t>(span))) -
                                      params.noise_amplitude;
                    image.at(x, y, c) =
                        static_cast<std::uint8_t>(clamp_u8(image.at(x, y, c) + noise));
                }
            }
        }
    }
    return image;
}

PartBoxes shifted_layout(int height, int width, int dx) {
    PartBoxes layout = fallback_part_layout(height, width);
    for (auto& box : layout.boxes) {
        Rect r = *box;
        r.x = std::clamp(r.x + dx, 0, width - r.w);
        box = r;
    }
    return layout;
}

}  // namespace

Manifest generate_synthetic(int n_ids, int views, std::uint64_t seed,
                            const std::string& out_dir,
                            const SyntheticParams& params) {
    if (n_ids < 2) throw std::invalid_argument("generate_synthetic: n_ids must be >= 2");
    if (views < 2) throw std::invalid_argument("generate_synthetic: views must be >= 2");

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir))
        throw std::runtime_error("cannot create output directory: " + out_dir);

    Manifest manifest;
    manifest.image_width = params.image_width;
    manifest.image_height = params.image_height;
    manifest.base_dir = out_dir;  // records carry bare filenames

    for (int id = 0; id < n_ids; ++id) {
        Rng style_rng = Rng::substream(seed, static_cast<std::uint64_t>(id));
        const IdentityStyle style = draw_identity_style(style_rng, params);

        for (int view = 0; view < views; ++view) {
            Rng image_rng = Rng::substream(
                seed, 0x10000ULL + static_cast<std::uint64_t>(id) * 1024ULL +
                          static_cast<std::uint64_t>(view));
            const int dx =
                params.jitter_px > 0
                    ? static_cast<int>(image_rng.next_below(
                          static_cast<std::uint64_t>(2 * params.jitter_px + 1))) -
                          params.jitter_px
                    : 0;
            const PartBoxes boxes =
                shifted_layout(params.image_height, params.image_width, dx);
            const Image image = render(style, view, image_rng, params, boxes);

            char name[64];
            std::snprintf(name, sizeof(name), "id%04d_cam%d.png", id, view);
            const std::string path = (fs::path(out_dir) / name).string();
            save_png(image, path);
            save_part_sidecar(boxes, path);

            ImageRecord record;
            record.path = name;
            record.person_id = id;
            record.camera_id = view;
            manifest.records.push_back(std::move(record));
        }
    }

    save_manifest(manifest, (fs::path(out_dir) / "manifest.json").string());
    log_info("synthetic dataset: " + std::to_string(manifest.records.size()) +
             " images in " + out_dir);
    return manifest;
}

}  // namespace reid
