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

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "oracles.hpp"
#include "reidmstc/solver.hpp"

using namespace reid;
using namespace reid::testing;

namespace {

/// A batch with learnable structure: matched pairs are noisy copies, so a
/// bilinear metric can push matched scores above mismatched ones.
TrainBatch structured_batch(Rng& rng, int n, Eigen::Index d, int blocks) {
    TrainBatch batch;
    for (int i = 0; i < n; ++i) {
        PersonDescriptor p, g;
        for (int t = 0; t < blocks; ++t) {
            const Eigen::VectorXd base = random_vector(rng, d);
            p.regions.push_back(base + 0.1 * random_vector(rng, d));
            g.regions.push_back(base + 0.1 * random_vector(rng, d));
        }
        batch.probes.push_back(std::move(p));
        batch.gallery.push_back(std::move(g));
    }
    for (int i = 0; i < n; ++i) batch.gallery_subset.push_back(i);
    return batch;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("prox_l21: tau zero is the identity") {
    Rng rng(1);
    const Eigen::MatrixXd w = random_matrix(rng, 5, 4);
    CHECK(prox_l21(w, 0.0) == w);
}

TEST_CASE("prox_l21: hand-evaluated row shrinkage") {
    Eigen::MatrixXd w(1, 2);
    w << 3.0, 4.0;  // row norm 5, factor 1 - 1/5
    const Eigen::MatrixXd out = prox_l21(w, 1.0);
    CHECK(out(0, 0) == doctest::Approx(2.4).epsilon(1e-15));
    CHECK(out(0, 1) == doctest::Approx(3.2).epsilon(1e-15));
}

TEST_CASE("prox_l21: rows at or below tau vanish") {
    Eigen::MatrixXd w(2, 2);
    w << 0.3, 0.4,   // norm 0.5 <= tau
         5.0, 0.0;
    const Eigen::MatrixXd out = prox_l21(w, 0.5);
    CHECK(out.row(0).norm() == 0.0);
    CHECK(out.row(1).norm() > 0.0);
}

TEST_CASE("prox_l21: negative tau is an error") {
    CHECK_THROWS_AS(prox_l21(Eigen::MatrixXd::Zero(2, 2), -0.1), std::invalid_argument);
}

TEST_CASE("prox_l21: minimizes the subproblem against random perturbations") {
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXd w = random_matrix(rng, 4, 6, -2.0, 2.0);
        const double tau = rng.uniform(0.0, 1.5);
        const Eigen::MatrixXd prox = prox_l21(w, tau);
        auto subproblem = [&](const Eigen::MatrixXd& x) {
            double rows = 0.0;
            for (Eigen::Index r = 0; r < x.rows(); ++r) rows += x.row(r).norm();
            return 0.5 * (x - w).squaredNorm() + tau * rows;
        };
        const double at_prox = subproblem(prox);
        for (int p = 0; p < 200; ++p) {
            const Eigen::MatrixXd candidate =
                prox + random_matrix(rng, 4, 6, -0.4, 0.4);
            REQUIRE(at_prox <= subproblem(candidate) + 1e-12);
        }
    }
}

TEST_CASE("project_nsd: clips the positive eigenvalue of a diagonal matrix") {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
    w(0, 0) = 2.0;
    w(1, 1) = -3.0;
    const Eigen::MatrixXd out = project_nsd(w);
    CHECK(out(0, 0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(out(1, 1) == doctest::Approx(-3.0).epsilon(1e-14));
    CHECK(std::fabs(out(0, 1)) < 1e-14);
}

TEST_CASE("project_nsd: idempotent on NSD input") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXd a = random_matrix(rng, 5, 5);
        const Eigen::MatrixXd nsd = -a * a.transpose();
        CHECK((project_nsd(nsd) - nsd).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("project_nsd: output is symmetric with no positive spectrum") {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXd out = project_nsd(random_matrix(rng, 5, 5));
        CHECK((out - out.transpose()).cwiseAbs().maxCoeff() < 1e-10);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(out,
                                                              Eigen::EigenvaluesOnly);
        CHECK(solver.eigenvalues().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("project_nsd: closer than random NSD samples") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::MatrixXd w = random_symmetric(rng, 5);
        const Eigen::MatrixXd projected = project_nsd(w);
        const double distance = (w - projected).norm();
        for (int p = 0; p < 100; ++p) {
            const Eigen::MatrixXd a = random_matrix(rng, 5, 5);
            const Eigen::MatrixXd sample = -a * a.transpose();
            REQUIRE(distance <= (w - sample).norm() + 1e-12);
        }
    }
}

TEST_CASE("project_nsd: non-square input is an error") {
    CHECK_THROWS_AS(project_nsd(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("update_loss_block: stationary when gradient vanishes and w = z - u") {
    // strong matched scores keep both hinges inactive
    const std::vector<Eigen::Index> dims{6};
    TrainBatch batch;
    for (int i = 0; i < 6; ++i) {
        PersonDescriptor p, g;
        p.regions = {Eigen::VectorXd::Unit(6, i)};
        g.regions = {Eigen::VectorXd::Unit(6, i)};
        batch.probes.push_back(p);
        batch.gallery.push_back(g);
        batch.gallery_subset.push_back(i);
    }
    const BatchMatrices matrices(batch);

    MetricModel w = MetricModel::zeros(dims);
    w.blocks[0].w_b = 10.0 * Eigen::MatrixXd::Identity(6, 6);
    const MetricModel z = w;                      // z = w
    const MetricModel u = MetricModel::zeros(dims);  // u = 0 so w = z - u

    SolverConfig config;
    config.inner_steps = 3;
    const MetricModel out =
        update_loss_block(w, LossKind::kL1, z, u, matrices, config, config.eta);
    CHECK(out.frobenius_distance(w) == 0.0);
}

TEST_CASE("update_loss_block: single step is one explicit gradient step") {
    Rng rng(6);
    const std::vector<Eigen::Index> dims{4, 4};
    const TrainBatch batch = random_batch(rng, 5, 4, 2);
    const BatchMatrices matrices(batch);

    const MetricModel w = random_model(rng, dims, 0.5);
    const MetricModel z = random_model(rng, dims, 0.5);
    const MetricModel u = random_model(rng, dims, 0.1);

    SolverConfig config;
    config.inner_steps = 1;
    const double eta = config.eta;

    const MetricModel out =
        update_loss_block(w, LossKind::kL1, z, u, matrices, config, eta);

    const LossTerms terms = loss_l1_with_gradient(w, matrices, config.alpha1);
    for (std::size_t t = 0; t < dims.size(); ++t) {
        const Eigen::MatrixXd expected_m =
            w.blocks[t].w_m -
            eta * (terms.gradient.blocks[t].w_m +
                   config.rho * (w.blocks[t].w_m - z.blocks[t].w_m + u.blocks[t].w_m));
        const Eigen::MatrixXd sym_m = 0.5 * (expected_m + expected_m.transpose());
        REQUIRE((out.blocks[t].w_m - sym_m).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("update_loss_block: augmented objective non-increasing for a damped step") {
    Rng rng(7);
    const TrainBatch batch = structured_batch(rng, 8, 4, 2);
    const BatchMatrices matrices(batch);
    const std::vector<Eigen::Index> dims{4, 4};

    SolverConfig config;
    const MetricModel z = MetricModel::zeros(dims);
    const MetricModel u = MetricModel::zeros(dims);
    MetricModel w = random_model(rng, dims, 0.3);

    auto augmented = [&](const MetricModel& m) {
        double coupling = 0.0;
        for (std::size_t t = 0; t < m.blocks.size(); ++t) {
            coupling += (m.blocks[t].w_m - z.blocks[t].w_m + u.blocks[t].w_m).squaredNorm();
            coupling += (m.blocks[t].w_b - z.blocks[t].w_b + u.blocks[t].w_b).squaredNorm();
        }
        return loss_l1(m, matrices, config.alpha1).value + 0.5 * config.rho * coupling;
    };

    const LossTerms terms = loss_l1_with_gradient(w, matrices, config.alpha1);
    const double eta = 0.1 / (1.0 + terms.gradient.frobenius_norm());
    config.inner_steps = 1;
    double previous = augmented(w);
    for (int step = 0; step < 5; ++step) {
        w = update_loss_block(w, LossKind::kL1, z, u, matrices, config, eta);
        const double current = augmented(w);
        REQUIRE(current <= previous + 1e-9);
        previous = current;
    }
}

TEST_CASE("admm_iterate: projection postcondition on the spectral block") {
    Rng rng(8);
    const TrainBatch batch = structured_batch(rng, 6, 4, 2);
    const BatchMatrices matrices(batch);
    SolverConfig config;
    AdmmState state = init_admm_state({4, 4}, matrices, config);
    for (int it = 0; it < 5; ++it) {
        admm_iterate(state, matrices, config);
        for (const auto& block : state.w4.blocks) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
                block.w_m, Eigen::EigenvaluesOnly);
            REQUIRE(solver.eigenvalues().maxCoeff() <= 1e-8);
        }
    }
    CHECK(state.iteration == 5);
    CHECK(state.trace.size() == 6);  // initial row plus one per iterate
}

TEST_CASE("admm_iterate: all variables stay block-symmetric") {
    Rng rng(9);
    const TrainBatch batch = structured_batch(rng, 6, 3, 2);
    const BatchMatrices matrices(batch);
    SolverConfig config;
    AdmmState state = init_admm_state({3, 3}, matrices, config);
    for (int it = 0; it < 10; ++it) admm_iterate(state, matrices, config);
    for (const MetricModel* m :
         {&state.w1, &state.w2, &state.w3, &state.w4, &state.z}) {
        for (const auto& block : m->blocks) {
            REQUIRE((block.w_m - block.w_m.transpose()).cwiseAbs().maxCoeff() < 1e-9);
            REQUIRE((block.w_b - block.w_b.transpose()).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("admm_iterate: zero data keeps the state at zero with finite residuals") {
    TrainBatch batch;
    for (int i = 0; i < 4; ++i) {
        PersonDescriptor p, g;
        p.regions = {Eigen::VectorXd::Zero(3)};
        g.regions = {Eigen::VectorXd::Zero(3)};
        batch.probes.push_back(p);
        batch.gallery.push_back(g);
        batch.gallery_subset.push_back(i);
    }
    const BatchMatrices matrices(batch);
    SolverConfig config;
    AdmmState state = init_admm_state({3}, matrices, config);
    for (int it = 0; it < 3; ++it) admm_iterate(state, matrices, config);
    // hinges are active but every gradient outer product is zero
    CHECK(state.z.frobenius_norm() == 0.0);
    CHECK(state.w1.frobenius_norm() == 0.0);
    CHECK(std::isfinite(state.primal_residual));
    CHECK(state.primal_residual == 0.0);
}

TEST_CASE("admm_iterate: residuals shrink on a toy instance") {
    Rng rng(10);
    const TrainBatch batch = structured_batch(rng, 10, 4, 2);
    const BatchMatrices matrices(batch);
    SolverConfig config;
    AdmmState state = init_admm_state({4, 4}, matrices, config);

    admm_iterate(state, matrices, config);
    const double primal_first = state.primal_residual;
    const double dual_first = state.dual_residual;
    for (int it = 1; it < 100; ++it) admm_iterate(state, matrices, config);
    CHECK(state.primal_residual < primal_first);
    CHECK(state.dual_residual < dual_first);
}

TEST_CASE("train: max_iters zero returns the zero model and the initial trace row") {
    Rng rng(11);
    const TrainBatch batch = random_batch(rng, 4, 3, 2);
    SolverConfig config;
    config.max_iters = 0;
    const TrainResult result = train(batch, config);
    CHECK(result.model.frobenius_norm() == 0.0);
    REQUIRE(result.trace.size() == 1);
    CHECK(result.trace[0].objective == config.alpha1 + config.alpha2);
}

TEST_CASE("train: deterministic bit-for-bit under a fixed seed") {
    Rng rng(12);
    const TrainBatch batch = structured_batch(rng, 8, 4, 2);
    SolverConfig config;
    config.max_iters = 20;
    config.seed = 99;
    const TrainResult a = train(batch, config);
    const TrainResult b = train(batch, config);
    REQUIRE(a.trace.size() == b.trace.size());
    CHECK(a.model.frobenius_distance(b.model) == 0.0);
    for (std::size_t i = 0; i < a.trace.size(); ++i)
        REQUIRE(a.trace[i].objective == b.trace[i].objective);
}

TEST_CASE("train: learns a structured toy batch and satisfies the constraint") {
    Rng rng(13);
    const TrainBatch batch = structured_batch(rng, 12, 4, 2);
    SolverConfig config;
    config.max_iters = 150;
    const TrainResult result = train(batch, config);

    CHECK(result.trace.back().objective < result.trace.front().objective);
    for (const auto& block : result.model.blocks) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block.w_m,
                                                              Eigen::EigenvaluesOnly);
        REQUIRE(solver.eigenvalues().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("train: empty batch is an error") {
    SolverConfig config;
    CHECK_THROWS_AS(train(TrainBatch{}, config), std::invalid_argument);
}

TEST_CASE("train: divergence guard keeps an oversized step finite") {
    Rng rng(14);
    const TrainBatch batch = structured_batch(rng, 8, 4, 2);
    SolverConfig config;
    config.eta = 50.0;  // far past stable
    config.max_iters = 40;
    const TrainResult result = train(batch, config);
    for (const auto& row : result.trace) REQUIRE(std::isfinite(row.objective));
}

TEST_CASE("train: oversized subset request is capped at 50") {
    Rng rng(15);
    TrainBatch batch;
    for (int i = 0; i < 60; ++i) {
        PersonDescriptor p, g;
        p.regions = {random_vector(rng, 3)};
        g.regions = {random_vector(rng, 3)};
        batch.probes.push_back(p);
        batch.gallery.push_back(g);
    }
    SolverConfig config;
    config.subset_size = 60;
    config.max_iters = 1;
    CHECK_NOTHROW(train(batch, config));

    // handing a larger subset to the loss directly violates its contract
    for (int i = 0; i < 51; ++i) batch.gallery_subset.push_back(i);
    CHECK_THROWS_AS((void)BatchMatrices{batch}, std::invalid_argument);
}

}  // TEST_SUITE
