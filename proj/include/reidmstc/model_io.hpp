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

#include "reidmstc/metric.hpp"
#include "reidmstc/pca.hpp"

namespace reid {

/// Everything needed to score new images: the learned metric, the PCA
/// models of the three region kinds, and the canonical image size.
struct ModelBundle {
    MetricModel metric;
    PcaModelSet pca;
    int image_height = 128;
    int image_width = 48;
};

/// Binary "MSTC" container, version 1, little-endian, with a trailing
/// 64-bit FNV-1a checksum over the preceding bytes. Matrices are stored
/// row-major as 64-bit floats, so a round trip is bit-exact. The write is
/// atomic: a temporary file is renamed over the target.
void save_model(const ModelBundle& bundle, const std::string& path);

/// Validates magic, version, layout counts, and checksum. Mahalanobis
/// blocks whose largest eigenvalue exceeds tolerance are reported as a
/// warning; the stored values are never silently re-projected.
ModelBundle load_model(const std::string& path);

}  // namespace reid
