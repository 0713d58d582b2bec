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

#include "reidmstc/feature_cache.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace reid {

namespace {

constexpr char kMagic[4] = {'S', 'R', 'R', 'F'};
constexpr std::uint32_t kVersion = 1;

std::uint64_t path_id(const std::string& path) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (const char c : path) {
        hash ^= static_cast<std::uint8_t>(c);
        hash *= 1099511628211ULL;
    }
    return hash;
}

template <typename T>
void write_value(std::ofstream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
T read_value(std::ifstream& in, const std::string& path) {
    T value;
    in.read(reinterpret_cast<char*>(&value), sizeof value);
    if (!in) throw std::runtime_error("unexpected end of feature cache: " + path);
    return value;
}

}  // namespace

void save_feature_cache(const std::vector<RawImageFeatures>& features,
                        const Manifest& manifest, const std::string& path) {
    if (features.size() != manifest.records.size())
        throw std::invalid_argument("save_feature_cache: feature/record count mismatch");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write feature cache: " + path);

    out.write(kMagic, sizeof kMagic);
    write_value<std::uint32_t>(out, kVersion);
    write_value<std::uint64_t>(out, features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        write_value<std::uint64_t>(out, path_id(manifest.records[i].path));
        write_value<std::uint32_t>(out, kNumRegions);
        for (const Eigen::VectorXd& v : features[i].regions) {
            write_value<std::uint64_t>(out, static_cast<std::uint64_t>(v.size()));
            out.write(reinterpret_cast<const char*>(v.data()),
                      static_cast<std::streamsize>(sizeof(double) * v.size()));
        }
    }
    if (!out) throw std::runtime_error("short write on feature cache: " + path);
}

std::vector<RawImageFeatures> load_feature_cache(const Manifest& manifest,
                                                 const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open feature cache: " + path);

    char magic[4];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw std::runtime_error("not a feature cache: " + path);
    const auto version = read_value<std::uint32_t>(in, path);
    if (version != kVersion)
        throw std::runtime_error("unsupported feature cache version " +
                                 std::to_string(version) + ": " + path);
    const auto count = read_value<std::uint64_t>(in, path);
    if (count != manifest.records.size())
        throw std::runtime_error("feature cache does not match manifest: " + path);

    std::vector<RawImageFeatures> features(manifest.records.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        const auto id = read_value<std::uint64_t>(in, path);
        if (id != path_id(manifest.records[i].path))
            throw std::runtime_error("feature cache does not match manifest: " + path);
        const auto regions = read_value<std::uint32_t>(in, path);
        if (regions != kNumRegions)
            throw std::runtime_error("unsupported region count in feature cache: " + path);
        for (std::size_t t = 0; t < kNumRegions; ++t) {
            const auto length = read_value<std::uint64_t>(in, path);
            Eigen::VectorXd v(static_cast<Eigen::Index>(length));
            in.read(reinterpret_cast<char*>(v.data()),
                    static_cast<std::streamsize>(sizeof(double) * length));
            if (!in) throw std::runtime_error("unexpected end of feature cache: " + path);
            features[i].regions[t] = std::move(v);
        }
    }
    return features;
}

}  // namespace reid
