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
#include <vector>

#include "reidmstc/pca.hpp"

namespace reid {

/// Learned similarity parameters of one region: a Mahalanobis block
/// (symmetric, negative semi-definite once finalized) and a symmetric
/// bilinear block.
struct MetricBlock {
    Eigen::MatrixXd w_m;
    Eigen::MatrixXd w_b;

    [[nodiscard]] Eigen::Index dim() const { return w_m.rows(); }
};

/// One block per region, aligned with PersonDescriptor ordering. Also used
/// as the container for per-block gradients and the ADMM split variables,
/// which live in the same space.
struct MetricModel {
    std::vector<MetricBlock> blocks;

    static MetricModel zeros(const std::vector<Eigen::Index>& dims);
    [[nodiscard]] MetricModel zeros_like() const;

    void add_scaled(const MetricModel& other, double factor);
    void scale(double factor);
    void symmetrize();
    [[nodiscard]] double frobenius_norm() const;
    [[nodiscard]] double frobenius_distance(const MetricModel& other) const;
    [[nodiscard]] std::vector<Eigen::Index> dims() const;
};

/// Index-aligned single-shot training pairs: probes[i] and gallery[i] show
/// the same person from the two camera views. gallery_subset is the fixed
/// index set used for the inter-class average of the second loss.
struct TrainBatch {
    std::vector<PersonDescriptor> probes;
    std::vector<PersonDescriptor> gallery;
    std::vector<int> gallery_subset;
};

/// Per-block descriptor columns of a batch, built once so the losses and
/// gradients reduce to dense matrix products.
struct BatchMatrices {
    std::vector<Eigen::MatrixXd> probe_cols;    // one d_t x N matrix per block
    std::vector<Eigen::MatrixXd> gallery_cols;  // one d_t x N matrix per block
    std::vector<Eigen::MatrixXd> subset_cols;   // one d_t x m matrix per block
    std::vector<int> subset;
    Eigen::Index n = 0;

    explicit BatchMatrices(const TrainBatch& batch);
};

/// Region-wise similarity score: the Mahalanobis form on the descriptor
/// difference plus the symmetric bilinear cross term, summed over regions.
/// Symmetric in its two arguments.
double similarity(const PersonDescriptor& a, const PersonDescriptor& b,
                  const MetricModel& model);

/// All-pairs score matrix, scores(i, j) = g(a_i, b_j).
Eigen::MatrixXd score_matrix(const MetricModel& model,
                             const std::vector<Eigen::MatrixXd>& a_cols,
                             const std::vector<Eigen::MatrixXd>& b_cols);

/// Hinge-loss value with the indices whose bracket is strictly positive.
struct HingeLoss {
    double value = 0.0;
    std::vector<int> active;
};

/// First topology constraint: per probe, the matched score must exceed the
/// mean mismatched score against that probe by alpha1.
HingeLoss loss_l1(const MetricModel& model, const BatchMatrices& batch, double alpha1);
HingeLoss loss_l1(const MetricModel& model, const TrainBatch& batch, double alpha1);

/// Second topology constraint: the matched score must exceed the mean
/// inter-class score over unordered gallery-subset pairs by alpha2.
HingeLoss loss_l2(const MetricModel& model, const BatchMatrices& batch, double alpha2);
HingeLoss loss_l2(const MetricModel& model, const TrainBatch& batch, double alpha2);

/// Sum over blocks of the l2,1 norms (sum of row norms) of both matrices.
double l21_regularizer(const MetricModel& model);

/// loss_l1 + loss_l2 + lambda * l21_regularizer
double objective(const MetricModel& model, const BatchMatrices& batch, double alpha1,
                 double alpha2, double lambda);
double objective(const MetricModel& model, const TrainBatch& batch, double alpha1,
                 double alpha2, double lambda);

/// Hinge value plus its subgradient in model space. Only strictly positive
/// brackets contribute; at a kink the zero subgradient is taken.
struct LossTerms {
    double value = 0.0;
    std::vector<int> active;
    MetricModel gradient;
};

LossTerms loss_l1_with_gradient(const MetricModel& model, const BatchMatrices& batch,
                                double alpha1);
LossTerms loss_l2_with_gradient(const MetricModel& model, const BatchMatrices& batch,
                                double alpha2);

/// Both loss subgradients in one call.
struct LossGradients {
    LossTerms l1;
    LossTerms l2;
};

LossGradients loss_gradients(const MetricModel& model, const TrainBatch& batch,
                             double alpha1, double alpha2);

}  // namespace reid
