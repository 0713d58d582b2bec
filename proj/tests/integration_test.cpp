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

#include <filesystem>
#include <fstream>

#include "reidmstc/pipeline.hpp"
#include "reidmstc/splits.hpp"
#include "reidmstc/synthetic.hpp"

using namespace reid;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("reidmstc_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_SUITE("integration") {

TEST_CASE("synthetic 60-id dataset separates identities under raw Euclidean") {
    const fs::path dir = fresh_dir("separability");
    const Manifest manifest = generate_synthetic(60, 2, 606, dir.string());
    const std::vector<RawImageFeatures> raw = extract_raw_features(manifest, 2);

    std::vector<std::size_t> all;
    for (std::size_t i = 0; i < raw.size(); ++i) all.push_back(i);
    const PcaModelSet pca = fit_pca_models(raw, all, {48, 48, 48});
    const std::vector<PersonDescriptor> descriptors = project_descriptors(raw, pca);

    const std::vector<int> ids = paired_identities(manifest);
    const PairedRecords pairs = pair_records(manifest, ids);

    int closer = 0, total = 0;
    for (std::size_t i = 0; i < pairs.ids.size(); ++i) {
        const PersonDescriptor& probe = descriptors[pairs.probe_record[i]];
        double same = 0.0;
        for (std::size_t t = 0; t < probe.regions.size(); ++t)
            same += (probe.regions[t] -
                     descriptors[pairs.gallery_record[i]].regions[t])
                        .squaredNorm();
        for (std::size_t j = 0; j < pairs.ids.size(); ++j) {
            if (j == i) continue;
            double different = 0.0;
            for (std::size_t t = 0; t < probe.regions.size(); ++t)
                different += (probe.regions[t] -
                              descriptors[pairs.gallery_record[j]].regions[t])
                                 .squaredNorm();
            ++total;
            if (same < different) ++closer;
        }
    }
    const double fraction = static_cast<double>(closer) / static_cast<double>(total);
    MESSAGE("same-identity closer for ", fraction, " of pairs");
    CHECK(fraction >= 0.90);
}

TEST_CASE("extraction is independent of the thread count") {
    const fs::path dir = fresh_dir("threads");
    const Manifest manifest = generate_synthetic(4, 2, 9, dir.string());
    const auto single = extract_raw_features(manifest, 1);
    const auto threaded = extract_raw_features(manifest, 3);
    REQUIRE(single.size() == threaded.size());
    for (std::size_t i = 0; i < single.size(); ++i)
        for (std::size_t t = 0; t < kNumRegions; ++t)
            REQUIRE(single[i].regions[t] == threaded[i].regions[t]);
}

TEST_CASE("distractor records join the gallery without probes") {
    const fs::path dir = fresh_dir("distractors");
    Manifest manifest = generate_synthetic(4, 2, 5, dir.string());
    // add one single-view identity as a distractor
    ImageRecord extra = manifest.records.front();
    extra.person_id = 999;
    extra.camera_id = 1;
    manifest.records.push_back(extra);

    const std::vector<RawImageFeatures> raw = extract_raw_features(manifest, 1);
    std::vector<std::size_t> all;
    for (std::size_t i = 0; i < raw.size(); ++i) all.push_back(i);
    const PcaModelSet pca = fit_pca_models(raw, all, {4, 4, 4});
    const auto descriptors = project_descriptors(raw, pca);

    const std::vector<int> ids = paired_identities(manifest);
    CHECK(ids.size() == 4);  // 999 has one view only
    const PairedRecords pairs = pair_records(manifest, ids);
    CHECK(pairs.distractor_record.size() == 1);

    const EvalInputs inputs = build_eval_inputs(descriptors, pairs, true, manifest);
    CHECK(inputs.probes.size() == 4);
    CHECK(inputs.gallery.size() == 5);
    CHECK(inputs.gallery_ids.back() == 999);
}

TEST_CASE("pca dims above the sample bound are clamped with a usable result") {
    const fs::path dir = fresh_dir("clamp");
    const Manifest manifest = generate_synthetic(3, 2, 2, dir.string());
    const std::vector<RawImageFeatures> raw = extract_raw_features(manifest, 1);
    std::vector<std::size_t> all;
    for (std::size_t i = 0; i < raw.size(); ++i) all.push_back(i);
    // 6 images yield 6 global samples; k must clamp to 5
    const PcaModelSet pca = fit_pca_models(raw, all, {120, 120, 120});
    CHECK(pca.of(RegionKind::kGlobal).k == 5);
    CHECK(pca.of(RegionKind::kPart).k == 23);  // 24 part samples
    const auto descriptors = project_descriptors(raw, pca);
    CHECK(descriptors.front().regions[8].size() == 5);
}

}  // TEST_SUITE
