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

#include "reidmstc/splits.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "reidmstc/common.hpp"

namespace reid {

std::vector<SplitSpec> make_splits(const Manifest& manifest, double train_fraction,
                                   int trials, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("make_splits: train_fraction must be in (0, 1)");
    if (trials < 1) throw std::invalid_argument("make_splits: trials must be >= 1");

    std::vector<int> ids = paired_identities(manifest);
    if (ids.size() < 2)
        throw std::runtime_error("make_splits: fewer than 2 paired identities");

    const auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(ids.size())));

    std::vector<SplitSpec> splits;
    splits.reserve(static_cast<std::size_t>(trials));
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<int> shuffled = ids;
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(trial));
        rng.shuffle(shuffled);

        SplitSpec split;
        split.trial_index = trial;
        split.seed = seed;
        split.train_ids.assign(shuffled.begin(),
                               shuffled.begin() + static_cast<std::ptrdiff_t>(n_train));
        split.test_ids.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(n_train),
                              shuffled.end());
        std::sort(split.train_ids.begin(), split.train_ids.end());
        std::sort(split.test_ids.begin(), split.test_ids.end());
        splits.push_back(std::move(split));
    }
    return splits;
}

}  // namespace reid
