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

#include "reidmstc/cmc.hpp"
#include "reidmstc/solver.hpp"

namespace reid {

struct ReportFiles {
    std::vector<std::string> written;
    std::vector<std::string> notes;
};

/// Writes cmc.csv plus an SVG line plot of the curve, and, when the trace
/// is non-empty, convergence.csv plus its plot. An empty trace is noted in
/// the returned result rather than treated as an error.
ReportFiles emit_report(const CmcCurve& curve, const std::vector<TraceRow>& trace,
                        const std::string& out_dir);

void write_cmc_csv(const CmcCurve& curve, const std::string& path);
void write_convergence_csv(const std::vector<TraceRow>& trace, const std::string& path);
void write_convergence_svg(const std::vector<TraceRow>& trace, const std::string& path);

}  // namespace reid
