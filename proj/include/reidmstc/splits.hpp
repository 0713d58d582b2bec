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
#include <vector>

#include "reidmstc/manifest.hpp"

namespace reid {

/// One train/test partition of the paired identities. Both id lists are
/// sorted ascending.
struct SplitSpec {
    int trial_index = 0;
    std::uint64_t seed = 0;
    std::vector<int> train_ids;
    std::vector<int> test_ids;
};

/// Builds `trials` independent seeded partitions of the paired identities.
/// |train_ids| = round(train_fraction * n_ids) per trial; repeated calls
/// with the same seed return identical splits.
std::vector<SplitSpec> make_splits(const Manifest& manifest, double train_fraction,
                                   int trials, std::uint64_t seed);

}  // namespace reid
