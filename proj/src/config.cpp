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

#include "reidmstc/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace reid {

PcaDims parse_pca_dims(const std::string& text) {
    PcaDims dims{};
    std::stringstream stream(text);
    std::string token;
    std::vector<int> values;
    while (std::getline(stream, token, ':')) {
        try {
            values.push_back(std::stoi(token));
        } catch (const std::exception&) {
            throw std::invalid_argument("invalid pca_dims value: " + text);
        }
    }
    if (values.size() == 1) values = {values[0], values[0], values[0]};
    if (values.size() != kNumRegionKinds)
        throw std::invalid_argument("pca_dims must be part:local:global, got: " + text);
    for (int v : values)
        if (v < 1) throw std::invalid_argument("pca_dims entries must be positive");
    std::copy(values.begin(), values.end(), dims.begin());
    return dims;
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    std::stringstream stream(value);
    T out;
    stream >> out;
    if (stream.fail() || !stream.eof())
        throw std::invalid_argument("config key \"" + key + "\": bad value \"" + value +
                                    "\"");
    return out;
}

}  // namespace

RunConfig parse_config_file(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);

    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(line_number) +
                                     ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "manifest") base.manifest_path = value;
        else if (key == "model") base.model_path = value;
        else if (key == "out") base.out_dir = value;
        else if (key == "feature_cache") base.feature_cache = value;
        else if (key == "seed") base.seed = parse_number<std::uint64_t>(key, value);
        else if (key == "trials") base.trials = parse_number<int>(key, value);
        else if (key == "train_fraction")
            base.train_fraction = parse_number<double>(key, value);
        else if (key == "pca_dims") base.pca_dims = parse_pca_dims(value);
        else if (key == "threads") base.threads = parse_number<int>(key, value);
        else if (key == "bitexact") base.bitexact = parse_number<int>(key, value) != 0;
        else if (key == "ids") base.synth_ids = parse_number<int>(key, value);
        else if (key == "views") base.synth_views = parse_number<int>(key, value);
        else if (key == "rho") base.solver.rho = parse_number<double>(key, value);
        else if (key == "eta") base.solver.eta = parse_number<double>(key, value);
        else if (key == "inner_steps")
            base.solver.inner_steps = parse_number<int>(key, value);
        else if (key == "max_iters")
            base.solver.max_iters = parse_number<int>(key, value);
        else if (key == "primal_tol")
            base.solver.primal_tol = parse_number<double>(key, value);
        else if (key == "dual_tol")
            base.solver.dual_tol = parse_number<double>(key, value);
        else if (key == "lambda") base.solver.lambda = parse_number<double>(key, value);
        else if (key == "alpha1") base.solver.alpha1 = parse_number<double>(key, value);
        else if (key == "alpha2") base.solver.alpha2 = parse_number<double>(key, value);
        else if (key == "subset_size")
            base.solver.subset_size = parse_number<int>(key, value);
        else
            throw std::runtime_error(path + ":" + std::to_string(line_number) +
                                     ": unknown config key \"" + key + "\"");
    }
    return base;
}

}  // namespace reid
