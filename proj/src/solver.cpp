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

#include "reidmstc/solver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "reidmstc/common.hpp"

namespace reid {

Eigen::MatrixXd prox_l21(const Eigen::MatrixXd& w, double tau) {
    if (tau < 0.0) throw std::invalid_argument("prox_l21: tau must be non-negative");
    Eigen::MatrixXd out = w;
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        const double norm = out.row(i).norm();
        if (norm <= tau)
            out.row(i).setZero();
        else if (tau > 0.0)
            out.row(i) *= 1.0 - tau / norm;
    }
    return out;
}

Eigen::MatrixXd project_nsd(const Eigen::MatrixXd& w) {
    if (w.rows() != w.cols())
        throw std::invalid_argument("project_nsd: matrix must be square");
    const Eigen::MatrixXd sym = 0.5 * (w + w.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("project_nsd: eigendecomposition failed");
    const Eigen::VectorXd clipped = solver.eigenvalues().cwiseMin(0.0);
    Eigen::MatrixXd out = solver.eigenvectors() * clipped.asDiagonal() *
                          solver.eigenvectors().transpose();
    return 0.5 * (out + out.transpose());
}

MetricModel update_loss_block(const MetricModel& w, LossKind which,
                              const MetricModel& z, const MetricModel& u,
                              const BatchMatrices& batch, const SolverConfig& config,
                              double eta) {
    MetricModel current = w;
    for (int step = 0; step < config.inner_steps; ++step) {
        const LossTerms terms =
            which == LossKind::kL1
                ? loss_l1_with_gradient(current, batch, config.alpha1)
                : loss_l2_with_gradient(current, batch, config.alpha2);
        for (std::size_t t = 0; t < current.blocks.size(); ++t) {
            MetricBlock& block = current.blocks[t];
            const MetricBlock& grad = terms.gradient.blocks[t];
            block.w_m -= eta * (grad.w_m + config.rho * (block.w_m - z.blocks[t].w_m +
                                                         u.blocks[t].w_m));
            block.w_b -= eta * (grad.w_b + config.rho * (block.w_b - z.blocks[t].w_b +
                                                         u.blocks[t].w_b));
        }
        current.symmetrize();
    }
    return current;
}

AdmmState init_admm_state(const std::vector<Eigen::Index>& dims,
                          const BatchMatrices& batch, const SolverConfig& config) {
    AdmmState state;
    state.w1 = MetricModel::zeros(dims);
    state.w2 = state.w1;
    state.w3 = state.w1;
    state.w4 = state.w1;
    state.z = state.w1;
    state.u1 = state.w1;
    state.u2 = state.w1;
    state.u3 = state.w1;
    state.u4 = state.w1;
    state.eta = config.eta;

    TraceRow row;
    row.iteration = 0;
    row.l1 = loss_l1(state.z, batch, config.alpha1).value;
    row.l2 = loss_l2(state.z, batch, config.alpha2).value;
    row.regularizer = l21_regularizer(state.z);
    row.objective = row.l1 + row.l2 + config.lambda * row.regularizer;
    state.trace.push_back(row);
    state.initial_objective = row.objective;
    return state;
}

void admm_iterate(AdmmState& state, const BatchMatrices& batch,
                  const SolverConfig& config) {
    const MetricModel z_prev = state.z;

    state.w1 = update_loss_block(state.w1, LossKind::kL1, state.z, state.u1, batch,
                                 config, state.eta);
    state.w2 = update_loss_block(state.w2, LossKind::kL2, state.z, state.u2, batch,
                                 config, state.eta);

    const double tau = config.lambda / config.rho;
    for (std::size_t t = 0; t < state.z.blocks.size(); ++t) {
        state.w3.blocks[t].w_m =
            prox_l21(state.z.blocks[t].w_m - state.u3.blocks[t].w_m, tau);
        state.w3.blocks[t].w_b =
            prox_l21(state.z.blocks[t].w_b - state.u3.blocks[t].w_b, tau);
        // The spectral constraint only binds the Mahalanobis blocks; the
        // bilinear blocks pass through unchanged.
        state.w4.blocks[t].w_m =
            project_nsd(state.z.blocks[t].w_m - state.u4.blocks[t].w_m);
        state.w4.blocks[t].w_b = state.z.blocks[t].w_b - state.u4.blocks[t].w_b;
    }
    // Row-wise shrinkage can leave the symmetric subspace when row norms
    // differ; the antisymmetric component is invisible to the similarity,
    // so it is projected out here to keep every iterate block-symmetric.
    state.w3.symmetrize();

    for (std::size_t t = 0; t < state.z.blocks.size(); ++t) {
        state.z.blocks[t].w_m =
            0.25 * (state.w1.blocks[t].w_m + state.u1.blocks[t].w_m +
                    state.w2.blocks[t].w_m + state.u2.blocks[t].w_m +
                    state.w3.blocks[t].w_m + state.u3.blocks[t].w_m +
                    state.w4.blocks[t].w_m + state.u4.blocks[t].w_m);
        state.z.blocks[t].w_b =
            0.25 * (state.w1.blocks[t].w_b + state.u1.blocks[t].w_b +
                    state.w2.blocks[t].w_b + state.u2.blocks[t].w_b +
                    state.w3.blocks[t].w_b + state.u3.blocks[t].w_b +
                    state.w4.blocks[t].w_b + state.u4.blocks[t].w_b);
    }

    auto dual_step = [&](MetricModel& u, const MetricModel& w) {
        for (std::size_t t = 0; t < u.blocks.size(); ++t) {
            u.blocks[t].w_m += w.blocks[t].w_m - state.z.blocks[t].w_m;
            u.blocks[t].w_b += w.blocks[t].w_b - state.z.blocks[t].w_b;
        }
    };
    dual_step(state.u1, state.w1);
    dual_step(state.u2, state.w2);
    dual_step(state.u3, state.w3);
    dual_step(state.u4, state.w4);

    const double primal_sq = std::pow(state.w1.frobenius_distance(state.z), 2) +
                             std::pow(state.w2.frobenius_distance(state.z), 2) +
                             std::pow(state.w3.frobenius_distance(state.z), 2) +
                             std::pow(state.w4.frobenius_distance(state.z), 2);
    state.primal_residual = std::sqrt(primal_sq);
    state.dual_residual = config.rho * state.z.frobenius_distance(z_prev);
    state.iteration += 1;

    TraceRow row;
    row.iteration = state.iteration;
    row.l1 = loss_l1(state.z, batch, config.alpha1).value;
    row.l2 = loss_l2(state.z, batch, config.alpha2).value;
    row.regularizer = l21_regularizer(state.z);
    row.objective = row.l1 + row.l2 + config.lambda * row.regularizer;
    row.primal_residual = state.primal_residual;
    row.dual_residual = state.dual_residual;
    state.trace.push_back(row);
}

TrainResult train(const TrainBatch& batch, const SolverConfig& config) {
    if (batch.probes.empty()) throw std::invalid_argument("train: empty batch");
    if (batch.probes.size() < 2)
        throw std::invalid_argument("train: need at least 2 identity pairs");

    TrainBatch working = batch;
    if (working.gallery_subset.empty()) {
        const auto n = static_cast<int>(working.gallery.size());
        if (config.subset_size > 50)
            log_warn("subset_size capped at the 50-image limit");
        const int m = std::min({config.subset_size, 50, n});
        std::vector<int> indices(static_cast<std::size_t>(n));
        std::iota(indices.begin(), indices.end(), 0);
        Rng rng = Rng::substream(config.seed, 0x5e7);
        rng.shuffle(indices);
        working.gallery_subset.assign(indices.begin(), indices.begin() + m);
        std::sort(working.gallery_subset.begin(), working.gallery_subset.end());
    }

    const BatchMatrices matrices(working);
    std::vector<Eigen::Index> dims;
    for (const auto& cols : matrices.probe_cols) dims.push_back(cols.rows());

    AdmmState state = init_admm_state(dims, matrices, config);
    for (int it = 0; it < config.max_iters; ++it) {
        admm_iterate(state, matrices, config);
        if (state.trace.back().objective > 10.0 * state.initial_objective &&
            state.eta > 1e-8) {
            state.eta *= 0.5;
            log_warn("objective exceeded 10x its initial value; halving step size to " +
                     std::to_string(state.eta));
        }
        if (state.primal_residual < config.primal_tol &&
            state.dual_residual < config.dual_tol)
            break;
    }

    TrainResult result;
    result.model = state.z;
    for (auto& block : result.model.blocks) block.w_m = project_nsd(block.w_m);
    result.trace = std::move(state.trace);
    return result;
}

}  // namespace reid
