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

#include <vector>

#include "reidmstc/metric.hpp"

namespace reid {

/// Gallery ordering for one probe, by descending similarity with ties
/// broken by ascending gallery index. correct_rank is 1-based.
struct RankedList {
    int probe_id = 0;
    std::vector<int> ordering;
    int correct_rank = 0;
};

/// rates[k-1] = fraction of probes whose correct match appears within the
/// top k; non-decreasing, ending at 1 when every match is present.
struct CmcCurve {
    std::vector<double> rates;
};

/// Ranks the gallery for one probe. The gallery must contain exactly one
/// entry with the probe's identity.
RankedList rank_gallery(const PersonDescriptor& probe, int probe_person_id,
                        const std::vector<PersonDescriptor>& gallery,
                        const std::vector<int>& gallery_person_ids,
                        const MetricModel& model);

CmcCurve compute_cmc(const std::vector<PersonDescriptor>& probes,
                     const std::vector<int>& probe_person_ids,
                     const std::vector<PersonDescriptor>& gallery,
                     const std::vector<int>& gallery_person_ids,
                     const MetricModel& model);

/// Elementwise mean over equal-length trial curves.
CmcCurve average_trials(const std::vector<CmcCurve>& curves);

}  // namespace reid
