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

#include <string>

#include "reidmstc/pipeline.hpp"
#include "reidmstc/solver.hpp"

namespace reid {

/// One run's worth of settings. Precedence: built-in defaults, then the
/// config file, then command-line flags.
struct RunConfig {
    std::string manifest_path;
    std::string model_path;
    std::string out_dir = "out";
    std::string feature_cache;
    std::uint64_t seed = 0;
    int trials = 10;
    double train_fraction = 0.5;
    PcaDims pca_dims = {120, 120, 120};
    int threads = 1;
    bool bitexact = false;
    int synth_ids = 60;
    int synth_views = 2;
    SolverConfig solver;
};

/// Parses a flat "key = value" config file ('#' starts a comment) over the
/// given base config. Unknown keys are errors.
RunConfig parse_config_file(const std::string& path, RunConfig base);

/// "part:local:global" (for example "120:120:120") or one value for all.
PcaDims parse_pca_dims(const std::string& text);

}  // namespace reid
