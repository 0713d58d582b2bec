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

#include "reidmstc/metric.hpp"

#include <cmath>
#include <stdexcept>

namespace reid {

MetricModel MetricModel::zeros(const std::vector<Eigen::Index>& dims) {
    MetricModel model;
    model.blocks.reserve(dims.size());
    for (Eigen::Index d : dims) {
        MetricBlock block;
        block.w_m = Eigen::MatrixXd::Zero(d, d);
        block.w_b = Eigen::MatrixXd::Zero(d, d);
        model.blocks.push_back(std::move(block));
    }
    return model;
}

MetricModel MetricModel::zeros_like() const { return zeros(dims()); }

void MetricModel::add_scaled(const MetricModel& other, double factor) {
    if (other.blocks.size() != blocks.size())
        throw std::invalid_argument("MetricModel::add_scaled: block count mismatch");
    for (std::size_t t = 0; t < blocks.size(); ++t) {
        blocks[t].w_m += factor * other.blocks[t].w_m;
        blocks[t].w_b += factor * other.blocks[t].w_b;
    }
}

void MetricModel::scale(double factor) {
    for (auto& block : blocks) {
        block.w_m *= factor;
        block.w_b *= factor;
    }
}

void MetricModel::symmetrize() {
    for (auto& block : blocks) {
        block.w_m = 0.5 * (block.w_m + block.w_m.transpose()).eval();
        block.w_b = 0.5 * (block.w_b + block.w_b.transpose()).eval();
    }
}

double MetricModel::frobenius_norm() const {
    double sq = 0.0;
    for (const auto& block : blocks)
        sq += block.w_m.squaredNorm() + block.w_b.squaredNorm();
    return std::sqrt(sq);
}

double MetricModel::frobenius_distance(const MetricModel& other) const {
    if (other.blocks.size() != blocks.size())
        throw std::invalid_argument("MetricModel::frobenius_distance: block mismatch");
    double sq = 0.0;
    for (std::size_t t = 0; t < blocks.size(); ++t) {
        sq += (blocks[t].w_m - other.blocks[t].w_m).squaredNorm();
        sq += (blocks[t].w_b - other.blocks[t].w_b).squaredNorm();
    }
    return std::sqrt(sq);
}

std::vector<Eigen::Index> MetricModel::dims() const {
    std::vector<Eigen::Index> out;
    out.reserve(blocks.size());
    for (const auto& block : blocks) out.push_back(block.dim());
    return out;
}

namespace {

std::vector<Eigen::MatrixXd> stack_columns(const std::vector<PersonDescriptor>& items) {
    if (items.empty()) throw std::invalid_argument("batch: empty descriptor list");
    const std::size_t blocks = items.front().regions.size();
    std::vector<Eigen::MatrixXd> cols(blocks);
    for (std::size_t t = 0; t < blocks; ++t) {
        const Eigen::Index d = items.front().regions[t].size();
        cols[t].resize(d, static_cast<Eigen::Index>(items.size()));
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (items[i].regions.size() != blocks ||
                items[i].regions[t].size() != d)
                throw std::invalid_argument("batch: inconsistent descriptor shapes");
            cols[t].col(static_cast<Eigen::Index>(i)) = items[i].regions[t];
        }
    }
    return cols;
}

void check_model_batch(const MetricModel& model, const BatchMatrices& batch) {
    if (model.blocks.size() != batch.probe_cols.size())
        throw std::invalid_argument("metric: model/batch block count mismatch");
    for (std::size_t t = 0; t < model.blocks.size(); ++t)
        if (model.blocks[t].dim() != batch.probe_cols[t].rows())
            throw std::invalid_argument("metric: model/batch dimension mismatch");
}

}  // namespace

BatchMatrices::BatchMatrices(const TrainBatch& batch) {
    if (batch.probes.size() != batch.gallery.size())
        throw std::invalid_argument("batch: probe/gallery size mismatch");
    if (batch.probes.empty()) throw std::invalid_argument("batch: empty");
    probe_cols = stack_columns(batch.probes);
    gallery_cols = stack_columns(batch.gallery);
    n = static_cast<Eigen::Index>(batch.probes.size());

    subset = batch.gallery_subset;
    if (subset.size() > 50)
        throw std::invalid_argument("batch: gallery_subset larger than 50");
    for (std::size_t a = 0; a < subset.size(); ++a) {
        if (subset[a] < 0 || subset[a] >= static_cast<int>(batch.gallery.size()))
            throw std::invalid_argument("batch: gallery_subset index out of range");
        for (std::size_t b = a + 1; b < subset.size(); ++b)
            if (subset[a] == subset[b])
                throw std::invalid_argument("batch: gallery_subset has duplicates");
    }
    subset_cols.resize(gallery_cols.size());
    for (std::size_t t = 0; t < gallery_cols.size(); ++t) {
        subset_cols[t].resize(gallery_cols[t].rows(),
                              static_cast<Eigen::Index>(subset.size()));
        for (std::size_t a = 0; a < subset.size(); ++a)
            subset_cols[t].col(static_cast<Eigen::Index>(a)) =
                gallery_cols[t].col(subset[a]);
    }
}

double similarity(const PersonDescriptor& a, const PersonDescriptor& b,
                  const MetricModel& model) {
    if (a.regions.size() != model.blocks.size() ||
        b.regions.size() != model.blocks.size())
        throw std::invalid_argument("similarity: region count mismatch");
    double score = 0.0;
    for (std::size_t t = 0; t < model.blocks.size(); ++t) {
        const auto& fa = a.regions[t];
        const auto& fb = b.regions[t];
        const MetricBlock& block = model.blocks[t];
        if (fa.size() != block.dim() || fb.size() != block.dim())
            throw std::invalid_argument("similarity: dimension mismatch");
        const Eigen::VectorXd diff = fa - fb;
        score += diff.dot(block.w_m * diff);
        score += fa.dot(block.w_b * fb) + fb.dot(block.w_b * fa);
    }
    return score;
}

Eigen::MatrixXd score_matrix(const MetricModel& model,
                             const std::vector<Eigen::MatrixXd>& a_cols,
                             const std::vector<Eigen::MatrixXd>& b_cols) {
    if (a_cols.size() != model.blocks.size() || b_cols.size() != model.blocks.size())
        throw std::invalid_argument("score_matrix: block count mismatch");
    const Eigen::Index na = a_cols.front().cols();
    const Eigen::Index nb = b_cols.front().cols();
    Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(na, nb);
    for (std::size_t t = 0; t < model.blocks.size(); ++t) {
        const Eigen::MatrixXd& a = a_cols[t];
        const Eigen::MatrixXd& b = b_cols[t];
        const MetricBlock& block = model.blocks[t];

        // (x - y)' Wm (x - y) = x'Wm x + y'Wm y - x'(Wm + Wm')y and the
        // bilinear term is x'(Wb + Wb')y; both hold without assuming
        // symmetry of the stored matrices.
        const Eigen::VectorXd qa =
            (a.array() * (block.w_m * a).array()).colwise().sum().transpose();
        const Eigen::VectorXd qb =
            (b.array() * (block.w_m * b).array()).colwise().sum().transpose();
        const Eigen::MatrixXd mixed = block.w_b + block.w_b.transpose() -
                                      block.w_m - block.w_m.transpose();
        scores.noalias() += a.transpose() * (mixed * b);
        scores.colwise() += qa;
        scores.rowwise() += qb.transpose();
    }
    return scores;
}

namespace {

// Brackets of the first constraint: alpha1 - g(X_i, Y_i) + mean_{j != i} g(X_i, Y_j).
Eigen::VectorXd l1_brackets(const MetricModel& model, const BatchMatrices& batch,
                            double alpha1) {
    check_model_batch(model, batch);
    if (batch.n < 2) throw std::invalid_argument("loss_l1: need at least 2 pairs");
    const Eigen::MatrixXd scores =
        score_matrix(model, batch.probe_cols, batch.gallery_cols);
    const Eigen::VectorXd matched = scores.diagonal();
    const Eigen::VectorXd row_sums = scores.rowwise().sum();
    return (alpha1 - matched.array() +
            (row_sums - matched).array() / static_cast<double>(batch.n - 1))
        .matrix();
}

// Brackets of the second constraint: alpha2 - g(X_i, Y_i) + the mean score
// over unordered subset pairs (the same constant for every i).
Eigen::VectorXd l2_brackets(const MetricModel& model, const BatchMatrices& batch,
                            double alpha2, double* inter_class_mean_out) {
    check_model_batch(model, batch);
    const auto m = static_cast<Eigen::Index>(batch.subset.size());
    if (m < 2) throw std::invalid_argument("loss_l2: gallery_subset smaller than 2");
    const Eigen::MatrixXd subset_scores =
        score_matrix(model, batch.subset_cols, batch.subset_cols);
    const double pair_sum =
        0.5 * (subset_scores.sum() - subset_scores.diagonal().sum());
    const double inter_class_mean =
        pair_sum / (static_cast<double>(m) * static_cast<double>(m - 1) / 2.0);
    if (inter_class_mean_out != nullptr) *inter_class_mean_out = inter_class_mean;

    const Eigen::MatrixXd scores =
        score_matrix(model, batch.probe_cols, batch.gallery_cols);
    return (alpha2 - scores.diagonal().array() + inter_class_mean).matrix();
}

HingeLoss hinge_from_brackets(const Eigen::VectorXd& brackets) {
    HingeLoss loss;
    // Extended-precision accumulation keeps the mean of identical brackets
    // exact (the zero-model value must equal the margin to the bit).
    long double total = 0.0L;
    for (Eigen::Index i = 0; i < brackets.size(); ++i) {
        if (brackets[i] > 0.0) {
            total += brackets[i];
            loss.active.push_back(static_cast<int>(i));
        }
    }
    loss.value = static_cast<double>(total / static_cast<long double>(brackets.size()));
    return loss;
}

// Adds sum_ij omega(i,j) * dg(x_i, y_j)/dW to the gradient blocks, where
// dg/dWm = (x - y)(x - y)' and dg/dWb = x y' + y x'.
void accumulate_pair_gradient(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                              const Eigen::MatrixXd& omega, Eigen::MatrixXd& g_m,
                              Eigen::MatrixXd& g_b) {
    const Eigen::MatrixXd cross = x * omega * y.transpose();
    const Eigen::VectorXd row_sums = omega.rowwise().sum();
    const Eigen::VectorXd col_sums = omega.colwise().sum();
    g_m.noalias() += x * row_sums.asDiagonal() * x.transpose();
    g_m.noalias() += y * col_sums.asDiagonal() * y.transpose();
    g_m -= cross + cross.transpose();
    g_b += cross + cross.transpose();
}

}  // namespace

HingeLoss loss_l1(const MetricModel& model, const BatchMatrices& batch, double alpha1) {
    return hinge_from_brackets(l1_brackets(model, batch, alpha1));
}

HingeLoss loss_l1(const MetricModel& model, const TrainBatch& batch, double alpha1) {
    return loss_l1(model, BatchMatrices(batch), alpha1);
}

HingeLoss loss_l2(const MetricModel& model, const BatchMatrices& batch, double alpha2) {
    return hinge_from_brackets(l2_brackets(model, batch, alpha2, nullptr));
}

HingeLoss loss_l2(const MetricModel& model, const TrainBatch& batch, double alpha2) {
    return loss_l2(model, BatchMatrices(batch), alpha2);
}

double l21_regularizer(const MetricModel& model) {
    double total = 0.0;
    for (const auto& block : model.blocks)
        total += block.w_m.rowwise().norm().sum() + block.w_b.rowwise().norm().sum();
    return total;
}

double objective(const MetricModel& model, const BatchMatrices& batch, double alpha1,
                 double alpha2, double lambda) {
    return loss_l1(model, batch, alpha1).value + loss_l2(model, batch, alpha2).value +
           lambda * l21_regularizer(model);
}

double objective(const MetricModel& model, const TrainBatch& batch, double alpha1,
                 double alpha2, double lambda) {
    return objective(model, BatchMatrices(batch), alpha1, alpha2, lambda);
}

LossTerms loss_l1_with_gradient(const MetricModel& model, const BatchMatrices& batch,
                                double alpha1) {
    const Eigen::VectorXd brackets = l1_brackets(model, batch, alpha1);
    const HingeLoss hinge = hinge_from_brackets(brackets);

    LossTerms terms;
    terms.value = hinge.value;
    terms.active = hinge.active;
    terms.gradient = MetricModel::zeros(model.dims());

    if (!hinge.active.empty()) {
        const auto n = static_cast<double>(batch.n);
        Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(batch.n, batch.n);
        for (int i : hinge.active) {
            omega.row(i).setConstant(1.0 / (n * (n - 1.0)));
            omega(i, i) = -1.0 / n;
        }
        for (std::size_t t = 0; t < model.blocks.size(); ++t)
            accumulate_pair_gradient(batch.probe_cols[t], batch.gallery_cols[t], omega,
                                     terms.gradient.blocks[t].w_m,
                                     terms.gradient.blocks[t].w_b);
    }
    return terms;
}

LossTerms loss_l2_with_gradient(const MetricModel& model, const BatchMatrices& batch,
                                double alpha2) {
    const Eigen::VectorXd brackets = l2_brackets(model, batch, alpha2, nullptr);
    const HingeLoss hinge = hinge_from_brackets(brackets);

    LossTerms terms;
    terms.value = hinge.value;
    terms.active = hinge.active;
    terms.gradient = MetricModel::zeros(model.dims());

    if (!hinge.active.empty()) {
        const auto n = static_cast<double>(batch.n);
        const auto m = static_cast<Eigen::Index>(batch.subset.size());

        // Matched-pair part: -g(X_i, Y_i) for each active i.
        Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(batch.n, batch.n);
        for (int i : hinge.active) omega(i, i) = -1.0 / n;

        // Inter-class part: every unordered subset pair enters each active
        // bracket with weight 2 / (m (m - 1)).
        const double pair_weight = static_cast<double>(hinge.active.size()) / n * 2.0 /
                                   (static_cast<double>(m) * static_cast<double>(m - 1));
        Eigen::MatrixXd psi = Eigen::MatrixXd::Constant(m, m, 0.5 * pair_weight);
        psi.diagonal().setZero();

        for (std::size_t t = 0; t < model.blocks.size(); ++t) {
            accumulate_pair_gradient(batch.probe_cols[t], batch.gallery_cols[t], omega,
                                     terms.gradient.blocks[t].w_m,
                                     terms.gradient.blocks[t].w_b);
            accumulate_pair_gradient(batch.subset_cols[t], batch.subset_cols[t], psi,
                                     terms.gradient.blocks[t].w_m,
                                     terms.gradient.blocks[t].w_b);
        }
    }
    return terms;
}

LossGradients loss_gradients(const MetricModel& model, const TrainBatch& batch,
                             double alpha1, double alpha2) {
    const BatchMatrices matrices(batch);
    return LossGradients{loss_l1_with_gradient(model, matrices, alpha1),
                         loss_l2_with_gradient(model, matrices, alpha2)};
}

}  // namespace reid
