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

#include "reidmstc/pca.hpp"

#include <Eigen/SVD>
#include <stdexcept>

namespace reid {

PcaModel fit_pca(const std::vector<Eigen::VectorXd>& samples, RegionKind kind, int k) {
    const auto n = static_cast<Eigen::Index>(samples.size());
    if (n < 2) throw std::invalid_argument("fit_pca: need at least 2 samples");
    const Eigen::Index dim = samples.front().size();
    for (const auto& s : samples)
        if (s.size() != dim) throw std::invalid_argument("fit_pca: ragged samples");
    if (k < 1 || k > std::min<Eigen::Index>(dim, n - 1))
        throw std::invalid_argument("fit_pca: k must be in [1, min(dim, n-1)]");

    PcaModel model;
    model.kind = kind;
    model.k = k;
    model.mean = Eigen::VectorXd::Zero(dim);
    for (const auto& s : samples) model.mean += s;
    model.mean /= static_cast<double>(n);

    Eigen::MatrixXd centered(n, dim);
    for (Eigen::Index i = 0; i < n; ++i)
        centered.row(i) = (samples[static_cast<std::size_t>(i)] - model.mean).transpose();

    // The right singular vectors of the centered sample matrix are the
    // eigenvectors of the sample covariance, in descending eigenvalue order.
    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    model.basis = svd.matrixV().leftCols(k);

    // Sign convention: the largest-magnitude entry of each column positive.
    for (Eigen::Index c = 0; c < model.basis.cols(); ++c) {
        Eigen::Index max_row = 0;
        model.basis.col(c).cwiseAbs().maxCoeff(&max_row);
        if (model.basis(max_row, c) < 0.0) model.basis.col(c) = -model.basis.col(c);
    }
    return model;
}

Eigen::VectorXd pca_project(const PcaModel& model, const Eigen::VectorXd& v) {
    if (model.empty()) throw std::invalid_argument("pca_project: empty model");
    if (v.size() != model.mean.size())
        throw std::invalid_argument("pca_project: dimension mismatch");
    return model.basis.transpose() * (v - model.mean);
}

PersonDescriptor extract_descriptor(const Image& image, const RegionLayout& layout,
                                    const PcaModelSet& models) {
    PersonDescriptor descriptor;
    descriptor.regions.reserve(layout.regions.size());
    for (const auto& region : layout.regions) {
        const PcaModel& model = models.of(region.kind);
        if (model.empty())
            throw std::invalid_argument("extract_descriptor: no PCA model for kind " +
                                        std::to_string(static_cast<int>(region.kind)));
        const Eigen::VectorXd raw = log_transform(region_descriptor(image, region.rect));
        descriptor.regions.push_back(pca_project(model, raw));
    }
    return descriptor;
}

}  // namespace reid
