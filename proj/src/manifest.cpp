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

#include "reidmstc/manifest.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace reid {

namespace {

using nlohmann::json;

json box_to_json(PartLabel label, const Rect& r) {
    return json{{"label", part_label_name(label)},
                {"x", r.x},
                {"y", r.y},
                {"w", r.w},
                {"h", r.h}};
}

PartBoxes parse_boxes(const json& array, const std::string& context) {
    if (!array.is_array())
        throw std::runtime_error(context + ": part_boxes must be an array");
    PartBoxes parts;
    for (const auto& item : array) {
        const auto label = parse_part_label(item.at("label").get<std::string>());
        if (!label)
            throw std::runtime_error(context + ": unknown part label \"" +
                                     item.at("label").get<std::string>() + "\"");
        if (parts[*label])
            throw std::runtime_error(context + ": duplicate part label \"" +
                                     std::string(part_label_name(*label)) + "\"");
        Rect r{item.at("x").get<int>(), item.at("y").get<int>(),
               item.at("w").get<int>(), item.at("h").get<int>()};
        parts[*label] = r;
    }
    if (!parts.complete()) {
        for (int i = 0; i < kNumParts; ++i)
            if (!parts.boxes[i])
                throw std::runtime_error(
                    context + ": missing part box \"" +
                    std::string(part_label_name(static_cast<PartLabel>(i))) + "\"");
    }
    return parts;
}

void validate_boxes(const PartBoxes& parts, int width, int height,
                    const std::string& context) {
    for (int i = 0; i < kNumParts; ++i) {
        const Rect& r = *parts.boxes[i];
        if (!r.inside(width, height))
            throw std::runtime_error(
                context + ": part box \"" +
                std::string(part_label_name(static_cast<PartLabel>(i))) +
                "\" outside image bounds or empty");
    }
}

}  // namespace

std::string resolve_record_path(const Manifest& manifest, const ImageRecord& record) {
    const std::filesystem::path p(record.path);
    if (p.is_absolute() || manifest.base_dir.empty()) return record.path;
    return (std::filesystem::path(manifest.base_dir) / p).string();
}

LoadedManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest: " + path);
    json root;
    try {
        in >> root;
    } catch (const json::exception& e) {
        throw std::runtime_error("malformed manifest " + path + ": " + e.what());
    }

    LoadedManifest result;
    Manifest& m = result.manifest;
    m.base_dir = std::filesystem::path(path).parent_path().string();
    try {
        m.image_height = root.at("image_height").get<int>();
        m.image_width = root.at("image_width").get<int>();
        if (m.image_height <= 0 || m.image_width <= 0)
            throw std::runtime_error("image dimensions must be positive");

        std::set<std::string> seen_paths;
        for (const auto& rec : root.at("records")) {
            ImageRecord record;
            record.path = rec.at("path").get<std::string>();
            record.person_id = rec.at("person_id").get<int>();
            record.camera_id = rec.at("camera_id").get<int>();
            if (record.person_id < 0 || record.camera_id < 0)
                throw std::runtime_error("negative identity or camera id for " +
                                         record.path);
            if (!seen_paths.insert(record.path).second)
                throw std::runtime_error("duplicate record: " + record.path);
            if (rec.contains("part_boxes")) {
                record.part_boxes = parse_boxes(rec.at("part_boxes"), record.path);
                validate_boxes(*record.part_boxes, m.image_width, m.image_height,
                               record.path);
            }
            m.records.push_back(std::move(record));
        }
    } catch (const json::exception& e) {
        throw std::runtime_error("malformed manifest " + path + ": " + e.what());
    }

    std::map<int, std::set<int>> views_per_id;
    for (const auto& record : m.records)
        views_per_id[record.person_id].insert(record.camera_id);
    for (const auto& [id, views] : views_per_id) {
        if (views.size() < 2)
            result.warnings.push_back("identity " + std::to_string(id) +
                                      " appears in a single camera view only");
    }
    return result;
}

void save_manifest(const Manifest& manifest, const std::string& path) {
    json records = json::array();
    for (const auto& record : manifest.records) {
        json rec{{"path", record.path},
                 {"person_id", record.person_id},
                 {"camera_id", record.camera_id}};
        if (record.part_boxes) {
            json boxes = json::array();
            for (int i = 0; i < kNumParts; ++i)
                boxes.push_back(box_to_json(static_cast<PartLabel>(i),
                                            *record.part_boxes->boxes[i]));
            rec["part_boxes"] = boxes;
        }
        records.push_back(std::move(rec));
    }
    json root{{"image_height", manifest.image_height},
              {"image_width", manifest.image_width},
              {"records", std::move(records)}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << root.dump(2) << "\n";
}

std::optional<PartBoxes> load_part_sidecar(const std::string& image_path) {
    const std::string sidecar = image_path + ".parts.json";
    std::ifstream in(sidecar);
    if (!in) return std::nullopt;
    json root;
    try {
        in >> root;
    } catch (const json::exception& e) {
        throw std::runtime_error("malformed sidecar " + sidecar + ": " + e.what());
    }
    return parse_boxes(root, sidecar);
}

void save_part_sidecar(const PartBoxes& boxes, const std::string& image_path) {
    if (!boxes.complete())
        throw std::invalid_argument("save_part_sidecar: incomplete part boxes");
    json array = json::array();
    for (int i = 0; i < kNumParts; ++i)
        array.push_back(box_to_json(static_cast<PartLabel>(i), *boxes.boxes[i]));
    const std::string sidecar = image_path + ".parts.json";
    std::ofstream out(sidecar);
    if (!out) throw std::runtime_error("cannot write sidecar: " + sidecar);
    out << array.dump(2) << "\n";
}

std::vector<int> paired_identities(const Manifest& manifest) {
    std::map<int, std::set<int>> views_per_id;
    for (const auto& record : manifest.records)
        views_per_id[record.person_id].insert(record.camera_id);
    std::vector<int> ids;
    for (const auto& [id, views] : views_per_id)
        if (views.size() >= 2) ids.push_back(id);
    return ids;  // std::map iteration is already ascending
}

LoadedImage load_and_scale_image(const ImageRecord& record, int target_width,
                                 int target_height, const std::string& base_dir) {
    std::string path = record.path;
    if (!base_dir.empty() && !std::filesystem::path(path).is_absolute())
        path = (std::filesystem::path(base_dir) / path).string();
    Image source = load_image(path);
    if (source.width() <= 0 || source.height() <= 0)
        throw std::runtime_error("zero-dimension image: " + path);

    std::optional<PartBoxes> boxes = record.part_boxes;
    if (!boxes) boxes = load_part_sidecar(path);

    LoadedImage out;
    out.image = resize_bilinear(source, target_width, target_height);
    if (boxes) {
        const double sx = static_cast<double>(target_width) / source.width();
        const double sy = static_cast<double>(target_height) / source.height();
        PartBoxes scaled;
        for (int i = 0; i < kNumParts; ++i) {
            if (!boxes->boxes[i])
                throw std::runtime_error("incomplete part boxes for " + record.path);
            scaled.boxes[i] =
                scale_rect(*boxes->boxes[i], sx, sy, target_width, target_height);
        }
        out.part_boxes = scaled;
    }
    return out;
}

}  // namespace reid
