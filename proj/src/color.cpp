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

#include "reidmstc/color.hpp"

#include <algorithm>
#include <cmath>

namespace reid {

Hsv rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    const double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
    const double maxc = std::max({r, g, b});
    const double minc = std::min({r, g, b});
    const double delta = maxc - minc;

    Hsv out;
    out.v = maxc;
    out.s = maxc > 0.0 ? delta / maxc : 0.0;
    if (delta > 0.0) {
        double h;
        if (maxc == r)
            h = 60.0 * std::fmod((g - b) / delta, 6.0);
        else if (maxc == g)
            h = 60.0 * ((b - r) / delta + 2.0);
        else
            h = 60.0 * ((r - g) / delta + 4.0);
        if (h < 0.0) h += 360.0;
        out.h = h >= 360.0 ? 0.0 : h;
    }
    return out;
}

std::array<std::uint8_t, 3> hsv_to_rgb(const Hsv& hsv) {
    const double h = std::fmod(std::fmod(hsv.h, 360.0) + 360.0, 360.0);
    const double s = std::clamp(hsv.s, 0.0, 1.0);
    const double v = std::clamp(hsv.v, 0.0, 1.0);

    const double c = v * s;
    const double hp = h / 60.0;
    const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    if (hp < 1)      { r = c; g = x; }
    else if (hp < 2) { r = x; g = c; }
    else if (hp < 3) { g = c; b = x; }
    else if (hp < 4) { g = x; b = c; }
    else if (hp < 5) { r = x; b = c; }
    else             { r = c; b = x; }
    const double m = v - c;
    auto quantize = [](double value) {
        return static_cast<std::uint8_t>(std::lround(std::clamp(value, 0.0, 1.0) * 255.0));
    };
    return {quantize(r + m), quantize(g + m), quantize(b + m)};
}

namespace {

double srgb_to_linear(std::uint8_t c8) {
    const double c = c8 / 255.0;
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
    constexpr double kCube = 216.0 / 24389.0;   // (6/29)^3
    constexpr double kScale = 841.0 / 108.0;    // (29/6)^2 / 3
    return t > kCube ? std::cbrt(t) : kScale * t + 4.0 / 29.0;
}

}  // namespace

Lab rgb_to_lab(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    const double r = srgb_to_linear(r8);
    const double g = srgb_to_linear(g8);
    const double b = srgb_to_linear(b8);

    // sRGB to XYZ, D65 white point.
    const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
    const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;

    const double fx = lab_f(x / 0.95047);
    const double fy = lab_f(y / 1.0);
    const double fz = lab_f(z / 1.08883);

    Lab out;
    out.l = 116.0 * fy - 16.0;
    out.a = 500.0 * (fx - fy);
    out.b = 200.0 * (fy - fz);
    return out;
}

}  // namespace reid
