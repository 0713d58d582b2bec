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

#include "reidmstc/cmc.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace reid {

RankedList rank_gallery(const PersonDescriptor& probe, int probe_person_id,
                        const std::vector<PersonDescriptor>& gallery,
                        const std::vector<int>& gallery_person_ids,
                        const MetricModel& model) {
    if (gallery.empty()) throw std::invalid_argument("rank_gallery: empty gallery");
    if (gallery.size() != gallery_person_ids.size())
        throw std::invalid_argument("rank_gallery: id list size mismatch");
    const auto matches = std::count(gallery_person_ids.begin(),
                                    gallery_person_ids.end(), probe_person_id);
    if (matches != 1)
        throw std::invalid_argument(
            "rank_gallery: gallery must contain exactly one true match, found " +
            std::to_string(matches));

    std::vector<double> scores(gallery.size());
    for (std::size_t j = 0; j < gallery.size(); ++j)
        scores[j] = similarity(probe, gallery[j], model);

    RankedList ranked;
    ranked.probe_id = probe_person_id;
    ranked.ordering.resize(gallery.size());
    std::iota(ranked.ordering.begin(), ranked.ordering.end(), 0);
    std::sort(ranked.ordering.begin(), ranked.ordering.end(), [&](int a, int b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });

    for (std::size_t position = 0; position < ranked.ordering.size(); ++position) {
        if (gallery_person_ids[static_cast<std::size_t>(ranked.ordering[position])] ==
            probe_person_id) {
            ranked.correct_rank = static_cast<int>(position) + 1;
            break;
        }
    }
    return ranked;
}

CmcCurve compute_cmc(const std::vector<PersonDescriptor>& probes,
                     const std::vector<int>& probe_person_ids,
                     const std::vector<PersonDescriptor>& gallery,
                     const std::vector<int>& gallery_person_ids,
                     const MetricModel& model) {
    if (probes.empty()) throw std::invalid_argument("compute_cmc: no probes");
    if (probes.size() != probe_person_ids.size())
        throw std::invalid_argument("compute_cmc: probe id list size mismatch");

    std::vector<int> rank_counts(gallery.size(), 0);
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const RankedList ranked = rank_gallery(probes[i], probe_person_ids[i], gallery,
                                               gallery_person_ids, model);
        rank_counts[static_cast<std::size_t>(ranked.correct_rank - 1)] += 1;
    }

    CmcCurve curve;
    curve.rates.resize(gallery.size());
    int cumulative = 0;
    for (std::size_t k = 0; k < gallery.size(); ++k) {
        cumulative += rank_counts[k];
        curve.rates[k] = static_cast<double>(cumulative) /
                         static_cast<double>(probes.size());
    }
    return curve;
}

CmcCurve average_trials(const std::vector<CmcCurve>& curves) {
    if (curves.empty()) throw std::invalid_argument("average_trials: no curves");
    const std::size_t length = curves.front().rates.size();
    for (const auto& c : curves)
        if (c.rates.size() != length)
            throw std::invalid_argument("average_trials: curve length mismatch");

    CmcCurve mean;
    mean.rates.assign(length, 0.0);
    for (const auto& c : curves)
        for (std::size_t k = 0; k < length; ++k) mean.rates[k] += c.rates[k];
    for (auto& r : mean.rates) r /= static_cast<double>(curves.size());
    return mean;
}

}  // namespace reid
