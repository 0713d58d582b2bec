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

#include "reidmstc/model_io.hpp"

#include <Eigen/Eigenvalues>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "reidmstc/common.hpp"

namespace reid {

namespace {

constexpr char kMagic[4] = {'M', 'S', 'T', 'C'};
constexpr std::uint32_t kVersion = 1;
constexpr double kNsdLoadTolerance = 1e-6;

std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t size) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= data[i];
        hash *= 1099511628211ULL;
    }
    return hash;
}

class Writer {
 public:
    void u32(std::uint32_t v) { raw(&v, sizeof v); }
    void u64(std::uint64_t v) { raw(&v, sizeof v); }
    void f64(double v) { raw(&v, sizeof v); }
    void bytes(const void* data, std::size_t size) { raw(data, size); }

    void matrix_row_major(const Eigen::MatrixXd& m) {
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c) f64(m(r, c));
    }

    [[nodiscard]] const std::vector<std::uint8_t>& buffer() const { return buffer_; }

 private:
    void raw(const void* data, std::size_t size) {
        const auto* p = static_cast<const std::uint8_t*>(data);
        buffer_.insert(buffer_.end(), p, p + size);
    }
    std::vector<std::uint8_t> buffer_;
};

class Reader {
 public:
    Reader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

    std::uint32_t u32() {
        std::uint32_t v;
        raw(&v, sizeof v);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v;
        raw(&v, sizeof v);
        return v;
    }
    double f64() {
        double v;
        raw(&v, sizeof v);
        return v;
    }

    Eigen::MatrixXd matrix_row_major(Eigen::Index rows, Eigen::Index cols) {
        Eigen::MatrixXd m(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = f64();
        return m;
    }

    [[nodiscard]] std::size_t remaining() const { return size_ - offset_; }

 private:
    void raw(void* out, std::size_t size) {
        if (offset_ + size > size_)
            throw std::runtime_error("unexpected end of file");
        std::memcpy(out, data_ + offset_, size);
        offset_ += size;
    }
    const std::uint8_t* data_;
    std::size_t size_;
    std::size_t offset_ = 0;
};

}  // namespace

void save_model(const ModelBundle& bundle, const std::string& path) {
    Writer w;
    w.bytes(kMagic, sizeof kMagic);
    w.u32(kVersion);
    w.u32(static_cast<std::uint32_t>(bundle.image_height));
    w.u32(static_cast<std::uint32_t>(bundle.image_width));
    w.u32(kNumParts);
    w.u32(kNumStripes);

    w.u32(kNumRegionKinds);
    for (int kind = 0; kind < kNumRegionKinds; ++kind) {
        const PcaModel& pca = bundle.pca.by_kind[static_cast<std::size_t>(kind)];
        if (pca.empty()) throw std::invalid_argument("save_model: missing PCA model");
        w.u32(static_cast<std::uint32_t>(kind));
        w.u64(static_cast<std::uint64_t>(pca.mean.size()));
        w.u32(static_cast<std::uint32_t>(pca.k));
        for (Eigen::Index i = 0; i < pca.mean.size(); ++i) w.f64(pca.mean[i]);
        w.matrix_row_major(pca.basis);
    }

    w.u32(static_cast<std::uint32_t>(bundle.metric.blocks.size()));
    for (std::size_t t = 0; t < bundle.metric.blocks.size(); ++t) {
        const MetricBlock& block = bundle.metric.blocks[t];
        const RegionKind kind = t < kNumParts ? RegionKind::kPart
                                : t < kNumParts + kNumStripes ? RegionKind::kLocal
                                                              : RegionKind::kGlobal;
        w.u32(static_cast<std::uint32_t>(kind));
        w.u32(static_cast<std::uint32_t>(block.dim()));
        w.matrix_row_major(block.w_m);
        w.matrix_row_major(block.w_b);
    }

    const std::uint64_t checksum = fnv1a64(w.buffer().data(), w.buffer().size());
    w.u64(checksum);

    namespace fs = std::filesystem;
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write model file: " + path);
        out.write(reinterpret_cast<const char*>(w.buffer().data()),
                  static_cast<std::streamsize>(w.buffer().size()));
        if (!out) {
            fs::remove(tmp);
            throw std::runtime_error("short write on model file: " + path);
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot finalize model file: " + path + ": " +
                                 ec.message());
    }
}

ModelBundle load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());

    if (data.size() < sizeof kMagic + sizeof(std::uint32_t) + sizeof(std::uint64_t) ||
        std::memcmp(data.data(), kMagic, sizeof kMagic) != 0)
        throw std::runtime_error("not a model file: " + path);

    std::uint64_t trailer;
    std::memcpy(&trailer, data.data() + data.size() - sizeof trailer, sizeof trailer);
    const std::uint64_t computed =
        fnv1a64(data.data(), data.size() - sizeof trailer);
    if (trailer != computed) throw std::runtime_error("checksum mismatch: " + path);

    Reader r(data.data(), data.size() - sizeof trailer);
    r.u32();  // magic, validated byte-wise above
    const std::uint32_t version = r.u32();
    if (version != kVersion)
        throw std::runtime_error("unsupported model version " + std::to_string(version) +
                                 ": " + path);

    ModelBundle bundle;
    bundle.image_height = static_cast<int>(r.u32());
    bundle.image_width = static_cast<int>(r.u32());
    const std::uint32_t parts = r.u32();
    const std::uint32_t stripes = r.u32();
    if (parts != kNumParts || stripes != kNumStripes)
        throw std::runtime_error("unsupported region configuration: " + path);

    const std::uint32_t kinds = r.u32();
    if (kinds != kNumRegionKinds)
        throw std::runtime_error("unsupported region configuration: " + path);
    for (std::uint32_t i = 0; i < kinds; ++i) {
        const std::uint32_t kind = r.u32();
        if (kind >= kNumRegionKinds)
            throw std::runtime_error("invalid region kind in model: " + path);
        const auto dim = static_cast<Eigen::Index>(r.u64());
        const auto k = static_cast<Eigen::Index>(r.u32());
        if (dim <= 0 || k <= 0 || k > dim)
            throw std::runtime_error("invalid PCA shape in model: " + path);
        PcaModel pca;
        pca.kind = static_cast<RegionKind>(kind);
        pca.k = static_cast<int>(k);
        pca.mean.resize(dim);
        for (Eigen::Index j = 0; j < dim; ++j) pca.mean[j] = r.f64();
        pca.basis = r.matrix_row_major(dim, k);
        bundle.pca.by_kind[kind] = std::move(pca);
    }

    const std::uint32_t blocks = r.u32();
    if (blocks != kNumRegions)
        throw std::runtime_error("unsupported block count in model: " + path);
    for (std::uint32_t t = 0; t < blocks; ++t) {
        r.u32();  // region kind, implied by position
        const auto d = static_cast<Eigen::Index>(r.u32());
        if (d <= 0) throw std::runtime_error("invalid block dimension in model: " + path);
        MetricBlock block;
        block.w_m = r.matrix_row_major(d, d);
        block.w_b = r.matrix_row_major(d, d);
        bundle.metric.blocks.push_back(std::move(block));
    }
    if (r.remaining() != 0)
        throw std::runtime_error("trailing bytes in model file: " + path);

    for (std::size_t t = 0; t < bundle.metric.blocks.size(); ++t) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
            bundle.metric.blocks[t].w_m, Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().maxCoeff() > kNsdLoadTolerance)
            log_warn("model block " + std::to_string(t) +
                     " violates the negative semi-definite constraint (max eigenvalue " +
                     std::to_string(solver.eigenvalues().maxCoeff()) + ")");
    }
    return bundle;
}

}  // namespace reid
