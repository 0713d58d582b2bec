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

#include <optional>
#include <string>
#include <vector>

#include "reidmstc/image.hpp"

namespace reid {

/// One dataset entry: an image of one person seen from one camera.
struct ImageRecord {
    std::string path;
    int person_id = 0;
    int camera_id = 0;
    std::optional<PartBoxes> part_boxes;
};

/// Dataset index. Records keep the file order of the manifest. Record
/// paths are stored as authored; relative ones are resolved against
/// base_dir (the manifest's directory when loaded from disk), which keeps
/// datasets relocatable. base_dir itself is never serialized.
struct Manifest {
    int image_height = 128;
    int image_width = 48;
    std::string base_dir;
    std::vector<ImageRecord> records;
};

/// record.path, made absolute against base_dir when relative.
std::string resolve_record_path(const Manifest& manifest, const ImageRecord& record);

/// Manifest plus non-fatal findings (e.g. identities seen in one view only).
struct LoadedManifest {
    Manifest manifest;
    std::vector<std::string> warnings;
};

/// Parses and validates a JSON manifest file. Duplicate paths, malformed
/// records, and part boxes outside the image bounds are errors; an identity
/// visible from a single camera is reported as a warning.
LoadedManifest load_manifest(const std::string& path);

void save_manifest(const Manifest& manifest, const std::string& path);

/// Reads the part-box sidecar next to an image ("<image>.parts.json"),
/// if one exists.
std::optional<PartBoxes> load_part_sidecar(const std::string& image_path);

void save_part_sidecar(const PartBoxes& boxes, const std::string& image_path);

/// Identities recorded in at least two distinct camera views, ascending.
std::vector<int> paired_identities(const Manifest& manifest);

/// Image plus its part boxes after rescaling.
struct LoadedImage {
    Image image;
    std::optional<PartBoxes> part_boxes;
};

/// Loads the record's image, resamples it to the target size, and rescales
/// its part boxes (inline boxes first, sidecar file otherwise) by the same
/// ratios, clamped to the target bounds. A relative record path is resolved
/// against base_dir.
LoadedImage load_and_scale_image(const ImageRecord& record, int target_width,
                                 int target_height, const std::string& base_dir = "");

}  // namespace reid
