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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "reidmstc/color.hpp"
#include "reidmstc/features.hpp"
#include "reidmstc/part_layout.hpp"
#include "reidmstc/pca.hpp"

using namespace reid;
using reid::testing::oracle_pca_basis;

namespace {

Image constant_image(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    Image image(w, h);
    for (std::size_t i = 0; i < image.data().size(); i += 3) {
        image.data()[i] = r;
        image.data()[i + 1] = g;
        image.data()[i + 2] = b;
    }
    return image;
}

Image random_image(int w, int h, std::uint64_t seed) {
    Image image(w, h);
    Rng rng(seed);
    for (auto& byte : image.data()) byte = static_cast<std::uint8_t>(rng.next_below(256));
    return image;
}

// sub-histogram offsets inside the raw descriptor
constexpr int kHsvJointOff = 3 * kChannelBins;
constexpr int kLabOff = kColorBlockDim;
constexpr int kSiltpOff = 2 * kColorBlockDim;
constexpr int kHogOff = kSiltpOff + kSiltpBins;

}  // namespace

TEST_SUITE("features") {

TEST_CASE("region layout: canonical geometry and ordering") {
    const PartBoxes parts = fallback_part_layout(128, 48);
    const RegionLayout layout = build_region_layout(128, 48, parts);
    REQUIRE(layout.regions.size() == kNumRegions);

    for (int i = 0; i < 4; ++i) CHECK(layout.regions[i].kind == RegionKind::kPart);
    for (int i = 4; i < 8; ++i) {
        CHECK(layout.regions[i].kind == RegionKind::kLocal);
        CHECK(layout.regions[i].rect.w == 48);
        CHECK(layout.regions[i].rect.h == 32);  // four equal stripes
        CHECK(layout.regions[i].rect.y == (i - 4) * 32);
    }
    CHECK(layout.regions[8].kind == RegionKind::kGlobal);
    CHECK(layout.regions[8].rect == Rect{0, 0, 48, 128});
}

TEST_CASE("region layout: missing part box is an error") {
    PartBoxes parts = fallback_part_layout(128, 48);
    parts[PartLabel::kTorso].reset();
    CHECK_THROWS_WITH_AS(build_region_layout(128, 48, parts),
                         doctest::Contains("torso"), std::invalid_argument);
}

TEST_CASE("window descriptor: dimension and range") {
    const Image image = random_image(8, 16, 3);
    const Eigen::VectorXd d = window_descriptor(image, Rect{0, 0, 8, 16});
    REQUIRE(d.size() == kRawDescriptorDim);
    CHECK(kRawDescriptorDim == 2 * (48 + 512) + 81 + 9);
    CHECK((d.array() >= 0.0).all());
    CHECK((d.array() <= 1.0).all());
}

TEST_CASE("window descriptor: sub-histograms sum to one or are all zero") {
    const Image image = random_image(48, 128, 17);
    const Eigen::VectorXd d = window_descriptor(image, Rect{4, 8, 8, 16});
    auto sum = [&](int off, int len) { return d.segment(off, len).sum(); };
    for (int c = 0; c < 3; ++c) {
        CHECK(sum(c * kChannelBins, kChannelBins) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(sum(kLabOff + c * kChannelBins, kChannelBins) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(sum(kHsvJointOff, kJointBins) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sum(kLabOff + 3 * kChannelBins, kJointBins) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sum(kSiltpOff, kSiltpBins) == doctest::Approx(1.0).epsilon(1e-9));
    const double hog = sum(kHogOff, kHogBins);
    CHECK((hog == 0.0 || hog == doctest::Approx(1.0).epsilon(1e-9)));
}

TEST_CASE("window descriptor: constant color puts single bins at one") {
    const Image image = constant_image(8, 16, 200, 40, 40);
    const Eigen::VectorXd d = window_descriptor(image, Rect{0, 0, 8, 16});

    for (int c = 0; c < 3; ++c) {
        const auto segment = d.segment(c * kChannelBins, kChannelBins);
        CHECK(segment.maxCoeff() == doctest::Approx(1.0));
        CHECK(segment.sum() == doctest::Approx(1.0));
    }
    // all-equal SILTP pattern is code 0
    CHECK(d[kSiltpOff] == doctest::Approx(1.0));
    CHECK(d.segment(kSiltpOff, kSiltpBins).sum() == doctest::Approx(1.0));
    // no gradients anywhere: HOG stays all-zero
    CHECK(d.segment(kHogOff, kHogBins).sum() == 0.0);
}

TEST_CASE("window descriptor: vertical step edge lands in the horizontal-gradient bin") {
    // left half dark, right half bright
    Image image(8, 16);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 8; ++x)
            for (int c = 0; c < 3; ++c) image.at(x, y, c) = x < 4 ? 10 : 240;
    const Eigen::VectorXd d = window_descriptor(image, Rect{0, 0, 8, 16});

    // Brute-force the expected histogram with central differences over the
    // interior, as an independent check of binning and weighting.
    double expected[kHogBins] = {0};
    for (int y = 1; y < 15; ++y) {
        for (int x = 1; x < 7; ++x) {
            auto luma = [&](int xx, int yy) {
                return 0.299 * image.at(xx, yy, 0) + 0.587 * image.at(xx, yy, 1) +
                       0.114 * image.at(xx, yy, 2);
            };
            const double gx = 0.5 * (luma(x + 1, y) - luma(x - 1, y));
            const double gy = 0.5 * (luma(x, y + 1) - luma(x, y - 1));
            const double mag = std::hypot(gx, gy);
            if (mag == 0.0) continue;
            double theta = std::atan2(gy, gx);
            if (theta < 0.0) theta += std::numbers::pi;
            if (theta >= std::numbers::pi) theta = 0.0;
            const int bin =
                std::min(kHogBins - 1,
                         static_cast<int>(theta / std::numbers::pi * kHogBins));
            expected[bin] += mag;
        }
    }
    double total = 0;
    for (double e : expected) total += e;
    REQUIRE(total > 0);
    for (int bin = 0; bin < kHogBins; ++bin)
        CHECK(d[kHogOff + bin] == doctest::Approx(expected[bin] / total).epsilon(1e-12));
    // a vertical edge is a horizontal gradient: all mass in bin 0
    CHECK(d[kHogOff] == doctest::Approx(1.0));
}

TEST_CASE("region descriptor: window grid count") {
    CHECK(count_region_windows(Rect{0, 0, 48, 32}) == 33);   // 3 rows x 11 columns
    CHECK(count_region_windows(Rect{0, 0, 48, 128}) == 165); // 15 rows x 11 columns
    CHECK(count_region_windows(Rect{0, 0, 8, 16}) == 1);
    CHECK(count_region_windows(Rect{0, 0, 7, 40}) == 1);     // degenerate: narrow
}

TEST_CASE("region descriptor: 16x8 region equals the single window descriptor") {
    const Image image = random_image(48, 128, 5);
    const Rect region{8, 16, 8, 16};
    const Eigen::VectorXd by_region = region_descriptor(image, region);
    const Eigen::VectorXd by_window = window_descriptor(image, region);
    CHECK((by_region - by_window).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("region descriptor: constant region equals any window descriptor") {
    const Image image = constant_image(48, 64, 30, 180, 90);
    const Eigen::VectorXd pooled = region_descriptor(image, Rect{0, 0, 48, 64});
    const Eigen::VectorXd single = window_descriptor(image, Rect{0, 0, 8, 16});
    CHECK((pooled - single).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("region descriptor: mean is order-independent") {
    const Image image = random_image(48, 128, 11);
    const Rect region{0, 0, 48, 32};
    const Eigen::VectorXd pooled = region_descriptor(image, region);

    // re-pool in reverse enumeration order
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(kRawDescriptorDim);
    int count = 0;
    for (int y = region.h - kWindowHeight; y >= 0; y -= kWindowStepY) {
        for (int x = region.w - kWindowWidth; x >= 0; x -= kWindowStepX) {
            sum += window_descriptor(image,
                                     Rect{region.x + x, region.y + y, kWindowWidth,
                                          kWindowHeight});
            ++count;
        }
    }
    CHECK(count == 33);
    CHECK((pooled - sum / count).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("log transform: zero, normalization, monotonicity") {
    CHECK(log_transform(Eigen::VectorXd::Zero(5)).norm() == 0.0);

    Rng rng(3);
    const Eigen::VectorXd v = testing::random_vector(rng, 20, 0.0, 7.0);
    const Eigen::VectorXd out = log_transform(v);
    CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-12));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        for (Eigen::Index j = 0; j < v.size(); ++j)
            if (v[i] > v[j]) REQUIRE(out[i] > out[j]);

    CHECK_THROWS_AS(log_transform(Eigen::VectorXd::Constant(3, -0.1)),
                    std::invalid_argument);
}

TEST_CASE("pca: rank-1 data recovers the line direction") {
    Rng rng(8);
    const Eigen::VectorXd direction = Eigen::Vector3d(1.0, -2.0, 0.5).normalized();
    std::vector<Eigen::VectorXd> samples;
    for (int i = 0; i < 10; ++i)
        samples.push_back(Eigen::Vector3d::Constant(0.3) +
                          rng.uniform(-2.0, 2.0) * direction);
    const PcaModel model = fit_pca(samples, RegionKind::kPart, 1);
    const double cosine = std::fabs(model.basis.col(0).dot(direction));
    CHECK(cosine > 1.0 - 1e-8);
}

TEST_CASE("pca: matches the covariance eigendecomposition oracle") {
    Rng rng(21);
    std::vector<Eigen::VectorXd> samples;
    for (int i = 0; i < 15; ++i) samples.push_back(testing::random_vector(rng, 6));
    const int k = 4;
    const PcaModel model = fit_pca(samples, RegionKind::kLocal, k);
    const Eigen::MatrixXd reference = oracle_pca_basis(samples, k);
    for (int j = 0; j < k; ++j) {
        const double cosine = std::fabs(model.basis.col(j).dot(reference.col(j)));
        CHECK(cosine == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("pca: k = n-1 reconstructs training samples") {
    Rng rng(34);
    std::vector<Eigen::VectorXd> samples;
    for (int i = 0; i < 9; ++i) samples.push_back(testing::random_vector(rng, 12));
    const PcaModel model = fit_pca(samples, RegionKind::kGlobal, 8);
    for (const auto& s : samples) {
        const Eigen::VectorXd reduced = pca_project(model, s);
        const Eigen::VectorXd rebuilt = model.mean + model.basis * reduced;
        CHECK((rebuilt - s).norm() < 1e-9);
    }
}

TEST_CASE("pca: orthonormal basis, centered mean projects to zero") {
    Rng rng(55);
    std::vector<Eigen::VectorXd> samples;
    for (int i = 0; i < 20; ++i) samples.push_back(testing::random_vector(rng, 10));
    const PcaModel model = fit_pca(samples, RegionKind::kPart, 6);
    const Eigen::MatrixXd gram = model.basis.transpose() * model.basis;
    CHECK((gram - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(pca_project(model, model.mean).norm() < 1e-9);
}

TEST_CASE("pca: preconditions") {
    Rng rng(2);
    std::vector<Eigen::VectorXd> one = {testing::random_vector(rng, 4)};
    CHECK_THROWS_AS(fit_pca(one, RegionKind::kPart, 1), std::invalid_argument);
    std::vector<Eigen::VectorXd> few = {testing::random_vector(rng, 4),
                                        testing::random_vector(rng, 4)};
    CHECK_THROWS_AS(fit_pca(few, RegionKind::kPart, 2), std::invalid_argument);
}

TEST_CASE("extract_descriptor: shape, centering, determinism") {
    const Image image = random_image(48, 128, 77);
    const RegionLayout layout =
        build_region_layout(128, 48, fallback_part_layout(128, 48));

    // fit tiny PCA models from the image's own regions plus noise copies
    std::vector<Eigen::VectorXd> samples[kNumRegionKinds];
    for (int copy = 0; copy < 4; ++copy) {
        const Image variant = random_image(48, 128, 77 + copy);
        for (const auto& region : layout.regions)
            samples[static_cast<int>(region.kind)].push_back(
                log_transform(region_descriptor(variant, region.rect)));
    }
    PcaModelSet models;
    for (int kind = 0; kind < kNumRegionKinds; ++kind)
        models.by_kind[kind] =
            fit_pca(samples[kind], static_cast<RegionKind>(kind), 3);

    const PersonDescriptor a = extract_descriptor(image, layout, models);
    const PersonDescriptor b = extract_descriptor(image, layout, models);
    REQUIRE(a.regions.size() == kNumRegions);
    for (std::size_t t = 0; t < a.regions.size(); ++t) {
        CHECK(a.regions[t].size() == 3);
        CHECK(a.regions[t] == b.regions[t]);  // bit-identical
    }

    // projecting the training mean yields the zero vector
    const Eigen::VectorXd zero =
        pca_project(models.of(RegionKind::kGlobal), models.of(RegionKind::kGlobal).mean);
    CHECK(zero.norm() < 1e-9);
}

}  // TEST_SUITE
