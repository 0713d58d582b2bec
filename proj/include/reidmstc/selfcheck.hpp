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

namespace reid {

/// Runs the numerical oracles shipped with the toolkit: finite-difference
/// gradient checks for both hinge losses, proximal-operator optimality
/// sampling, spectral-projection optimality sampling, and PCA
/// orthonormality. Prints one line per check and returns true when all
/// pass.
bool run_selfcheck(std::uint64_t seed);

}  // namespace reid
