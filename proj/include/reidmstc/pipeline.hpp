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

#include <array>
#include <cstdint>
#include <vector>

#include "reidmstc/cmc.hpp"
#include "reidmstc/manifest.hpp"
#include "reidmstc/model_io.hpp"
#include "reidmstc/solver.hpp"
#include "reidmstc/splits.hpp"

namespace reid {

/// Log-transformed raw region descriptors of one image. These depend only
/// on the pixels, so they are extracted once and reused across trials.
struct RawImageFeatures {
    std::array<Eigen::VectorXd, kNumRegions> regions;
};

inline constexpr std::array<RegionKind, kNumRegions> kRegionKindByIndex = {
    RegionKind::kPart,  RegionKind::kPart,  RegionKind::kPart,  RegionKind::kPart,
    RegionKind::kLocal, RegionKind::kLocal, RegionKind::kLocal, RegionKind::kLocal,
    RegionKind::kGlobal};

/// Extracts raw features for every record: load and rescale the image,
/// resolve part boxes (inline, then sidecar, then the proportional
/// fallback), pool the window descriptors, log-transform. Results are
/// index-aligned with manifest.records and independent of thread count.
std::vector<RawImageFeatures> extract_raw_features(const Manifest& manifest,
                                                   int threads = 1);

/// Requested reduced dimensions per kind (part, local, global).
using PcaDims = std::array<int, kNumRegionKinds>;

/// Fits the three per-kind PCA models on the images listed in fit_indices,
/// pooling samples across regions of the same kind. Dimensions above
/// min(raw dim, n_samples - 1) are clamped with a warning.
PcaModelSet fit_pca_models(const std::vector<RawImageFeatures>& raw,
                           const std::vector<std::size_t>& fit_indices,
                           const PcaDims& dims);

std::vector<PersonDescriptor> project_descriptors(
    const std::vector<RawImageFeatures>& raw, const PcaModelSet& models);

/// Single-shot probe/gallery record pairing: for each identity the record
/// from its lowest camera view is the probe, the one from the next view
/// the gallery entry.
struct PairedRecords {
    std::vector<int> ids;
    std::vector<std::size_t> probe_record;
    std::vector<std::size_t> gallery_record;
    /// gallery-side records of single-view identities (distractors)
    std::vector<std::size_t> distractor_record;
};

PairedRecords pair_records(const Manifest& manifest, const std::vector<int>& ids);

/// Assembles the training batch for a set of identities; gallery_subset is
/// left empty so the solver draws it from its seed.
TrainBatch build_train_batch(const std::vector<PersonDescriptor>& descriptors,
                             const PairedRecords& pairs);

struct EvalInputs {
    std::vector<PersonDescriptor> probes;
    std::vector<int> probe_ids;
    std::vector<PersonDescriptor> gallery;
    std::vector<int> gallery_ids;
};

EvalInputs build_eval_inputs(const std::vector<PersonDescriptor>& descriptors,
                             const PairedRecords& pairs, bool include_distractors,
                             const Manifest& manifest);

}  // namespace reid
