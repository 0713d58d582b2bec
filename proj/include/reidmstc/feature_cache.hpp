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
#include <vector>

#include "reidmstc/manifest.hpp"
#include "reidmstc/pipeline.hpp"

namespace reid {

/// Binary "SRRF" container, version 1: per image an id (FNV-1a hash of the
/// record path) followed by the region count and length-prefixed vectors of
/// 64-bit little-endian floats. Caches the log-transformed raw region
/// descriptors, which only depend on the pixels.
void save_feature_cache(const std::vector<RawImageFeatures>& features,
                        const Manifest& manifest, const std::string& path);

/// Loads a cache written for the same manifest: the image count and every
/// per-image path id must match, otherwise the cache is rejected.
std::vector<RawImageFeatures> load_feature_cache(const Manifest& manifest,
                                                 const std::string& path);

}  // namespace reid
