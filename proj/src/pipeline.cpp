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

#include "reidmstc/pipeline.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "reidmstc/common.hpp"
#include "reidmstc/part_layout.hpp"

namespace reid {

namespace {

RawImageFeatures extract_one(const ImageRecord& record, int width, int height,
                             const std::string& base_dir) {
    const LoadedImage loaded = load_and_scale_image(record, width, height, base_dir);
    const PartBoxes boxes =
        loaded.part_boxes ? *loaded.part_boxes : fallback_part_layout(height, width);
    const RegionLayout layout = build_region_layout(height, width, boxes);

    RawImageFeatures features;
    for (std::size_t t = 0; t < layout.regions.size(); ++t)
        features.regions[t] =
            log_transform(region_descriptor(loaded.image, layout.regions[t].rect));
    return features;
}

}  // namespace

std::vector<RawImageFeatures> extract_raw_features(const Manifest& manifest,
                                                   int threads) {
    const auto count = manifest.records.size();
    std::vector<RawImageFeatures> all(count);
    threads = std::max(1, threads);

    if (threads == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i)
            all[i] = extract_one(manifest.records[i], manifest.image_width,
                                 manifest.image_height, manifest.base_dir);
        return all;
    }

    // Results are written by index, so the outcome does not depend on the
    // thread count or scheduling.
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto worker_count = static_cast<std::size_t>(threads);
    for (std::size_t w = 0; w < worker_count; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (std::size_t i = w; i < count; i += worker_count)
                    all[i] = extract_one(manifest.records[i], manifest.image_width,
                                         manifest.image_height, manifest.base_dir);
            } catch (...) {
                const std::scoped_lock lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return all;
}

PcaModelSet fit_pca_models(const std::vector<RawImageFeatures>& raw,
                           const std::vector<std::size_t>& fit_indices,
                           const PcaDims& dims) {
    PcaModelSet models;
    for (int kind = 0; kind < kNumRegionKinds; ++kind) {
        std::vector<Eigen::VectorXd> samples;
        for (std::size_t index : fit_indices) {
            if (index >= raw.size())
                throw std::invalid_argument("fit_pca_models: index out of range");
            for (std::size_t t = 0; t < kNumRegions; ++t)
                if (kRegionKindByIndex[t] == static_cast<RegionKind>(kind))
                    samples.push_back(raw[index].regions[t]);
        }
        if (samples.size() < 2)
            throw std::invalid_argument("fit_pca_models: need at least 2 fit images");

        const int max_k = static_cast<int>(
            std::min<std::size_t>(samples.size() - 1,
                                  static_cast<std::size_t>(samples.front().size())));
        int k = dims[static_cast<std::size_t>(kind)];
        if (k > max_k) {
            log_warn("PCA dimension " + std::to_string(k) + " for kind " +
                     std::to_string(kind) + " clamped to " + std::to_string(max_k));
            k = max_k;
        }
        models.by_kind[static_cast<std::size_t>(kind)] =
            fit_pca(samples, static_cast<RegionKind>(kind), k);
    }
    return models;
}

std::vector<PersonDescriptor> project_descriptors(
    const std::vector<RawImageFeatures>& raw, const PcaModelSet& models) {
    std::vector<PersonDescriptor> descriptors;
    descriptors.reserve(raw.size());
    for (const auto& features : raw) {
        PersonDescriptor d;
        d.regions.reserve(kNumRegions);
        for (std::size_t t = 0; t < kNumRegions; ++t)
            d.regions.push_back(
                pca_project(models.of(kRegionKindByIndex[t]), features.regions[t]));
        descriptors.push_back(std::move(d));
    }
    return descriptors;
}

PairedRecords pair_records(const Manifest& manifest, const std::vector<int>& ids) {
    // First record per (identity, camera), in manifest order.
    std::map<int, std::map<int, std::size_t>> first_record;
    for (std::size_t i = 0; i < manifest.records.size(); ++i) {
        const auto& rec = manifest.records[i];
        first_record[rec.person_id].emplace(rec.camera_id, i);
    }

    PairedRecords pairs;
    const std::set<int> wanted(ids.begin(), ids.end());
    for (int id : ids) {
        const auto it = first_record.find(id);
        if (it == first_record.end() || it->second.size() < 2)
            throw std::invalid_argument("pair_records: identity " + std::to_string(id) +
                                        " lacks two camera views");
        auto view = it->second.begin();
        pairs.ids.push_back(id);
        pairs.probe_record.push_back(view->second);
        ++view;
        pairs.gallery_record.push_back(view->second);
    }
    for (const auto& [id, views] : first_record)
        if (views.size() < 2 && !wanted.contains(id))
            pairs.distractor_record.push_back(views.begin()->second);
    return pairs;
}

TrainBatch build_train_batch(const std::vector<PersonDescriptor>& descriptors,
                             const PairedRecords& pairs) {
    TrainBatch batch;
    for (std::size_t i = 0; i < pairs.ids.size(); ++i) {
        batch.probes.push_back(descriptors.at(pairs.probe_record[i]));
        batch.gallery.push_back(descriptors.at(pairs.gallery_record[i]));
    }
    return batch;
}

EvalInputs build_eval_inputs(const std::vector<PersonDescriptor>& descriptors,
                             const PairedRecords& pairs, bool include_distractors,
                             const Manifest& manifest) {
    EvalInputs inputs;
    for (std::size_t i = 0; i < pairs.ids.size(); ++i) {
        inputs.probes.push_back(descriptors.at(pairs.probe_record[i]));
        inputs.probe_ids.push_back(pairs.ids[i]);
        inputs.gallery.push_back(descriptors.at(pairs.gallery_record[i]));
        inputs.gallery_ids.push_back(pairs.ids[i]);
    }
    if (include_distractors) {
        for (std::size_t index : pairs.distractor_record) {
            inputs.gallery.push_back(descriptors.at(index));
            inputs.gallery_ids.push_back(manifest.records[index].person_id);
        }
    }
    return inputs;
}

}  // namespace reid
