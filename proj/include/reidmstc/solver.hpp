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
#include <vector>

#include "reidmstc/metric.hpp"

namespace reid {

struct SolverConfig {
    double rho = 1.0;           // consensus penalty
    double eta = 0.1;           // gradient step size for the loss blocks
    int inner_steps = 5;        // gradient steps per loss-block update
    int max_iters = 300;
    double primal_tol = 1e-3;
    double dual_tol = 1e-3;
    double lambda = 3e-4;       // l2,1 regularization weight
    double alpha1 = 1.0;        // margin of the per-probe constraint
    double alpha2 = 1.1;        // margin of the inter-class constraint
    int subset_size = 50;       // gallery subsample for the inter-class average
    std::uint64_t seed = 0;
};

/// One row of the training trace; row 0 describes the zero initialization.
struct TraceRow {
    int iteration = 0;
    double objective = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
    double regularizer = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
};

/// Consensus ADMM state over the four split copies of the metric: one per
/// loss, one for the row-sparsity prox, one for the spectral constraint.
struct AdmmState {
    MetricModel w1, w2, w3, w4;      // split variables
    MetricModel z;                   // consensus
    MetricModel u1, u2, u3, u4;      // scaled duals
    int iteration = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    std::vector<TraceRow> trace;
    double eta = 0.0;                // live step size (halved on divergence)
    double initial_objective = 0.0;
};

/// Row-wise shrinkage row <- row * max(0, 1 - tau / |row|); minimizer of
/// 0.5 |X - w|_F^2 + tau |X|_{2,1}.
Eigen::MatrixXd prox_l21(const Eigen::MatrixXd& w, double tau);

/// Frobenius-nearest symmetric negative semi-definite matrix: symmetrize,
/// eigendecompose, clip positive eigenvalues to zero.
Eigen::MatrixXd project_nsd(const Eigen::MatrixXd& w);

enum class LossKind { kL1, kL2 };

/// inner_steps gradient-descent steps on L(W) + (rho/2) |W - z + u|_F^2
/// starting from w; every block stays symmetric.
MetricModel update_loss_block(const MetricModel& w, LossKind which,
                              const MetricModel& z, const MetricModel& u,
                              const BatchMatrices& batch, const SolverConfig& config,
                              double eta);

AdmmState init_admm_state(const std::vector<Eigen::Index>& dims,
                          const BatchMatrices& batch, const SolverConfig& config);

/// One full sweep: the two gradient blocks, the prox block, the projection
/// block, consensus and dual updates, residuals, and a new trace row.
void admm_iterate(AdmmState& state, const BatchMatrices& batch,
                  const SolverConfig& config);

struct TrainResult {
    MetricModel model;
    std::vector<TraceRow> trace;
};

/// Trains from zero initialization until max_iters or both residuals fall
/// below their tolerances. If batch.gallery_subset is empty, a subset of
/// min(subset_size, N) gallery indices is drawn once from config.seed. The
/// returned model has every Mahalanobis block projected onto the NSD cone.
TrainResult train(const TrainBatch& batch, const SolverConfig& config);

}  // namespace reid
