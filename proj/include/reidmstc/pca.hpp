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

#include <Eigen/Core>
#include <array>
#include <vector>

#include "reidmstc/features.hpp"

namespace reid {

/// Linear projection learned for one region kind: center on `mean` and
/// project onto the top-k principal directions (orthonormal columns,
/// descending eigenvalue order, largest-magnitude entry of each column
/// positive).
struct PcaModel {
    RegionKind kind = RegionKind::kGlobal;
    Eigen::VectorXd mean;
    Eigen::MatrixXd basis;
    int k = 0;

    [[nodiscard]] bool empty() const { return k == 0; }
};

/// Fits the model on log-transformed raw region descriptors of one kind.
/// Requires at least two samples and k <= min(dim, n_samples - 1).
PcaModel fit_pca(const std::vector<Eigen::VectorXd>& samples, RegionKind kind, int k);

/// basis^T * (v - mean)
Eigen::VectorXd pca_project(const PcaModel& model, const Eigen::VectorXd& v);

/// One model per region kind, indexed by RegionKind.
struct PcaModelSet {
    std::array<PcaModel, kNumRegionKinds> by_kind;

    const PcaModel& of(RegionKind kind) const {
        return by_kind[static_cast<int>(kind)];
    }
    PcaModel& of(RegionKind kind) { return by_kind[static_cast<int>(kind)]; }
};

/// The semantic region representation of one image: the reduced vector of
/// each region in layout order (parts, stripes, global).
struct PersonDescriptor {
    std::vector<Eigen::VectorXd> regions;
};

/// Full per-image pipeline: region_descriptor, log_transform, then the
/// PCA projection of the region's kind.
PersonDescriptor extract_descriptor(const Image& image, const RegionLayout& layout,
                                    const PcaModelSet& models);

}  // namespace reid
