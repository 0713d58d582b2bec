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

#include "reidmstc/selfcheck.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <string>

#include "reidmstc/common.hpp"
#include "reidmstc/pca.hpp"
#include "reidmstc/solver.hpp"

namespace reid {

namespace {

Eigen::VectorXd random_vector(Rng& rng, Eigen::Index dim) {
    Eigen::VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = rng.uniform(-1.0, 1.0);
    return v;
}

Eigen::MatrixXd random_symmetric(Rng& rng, Eigen::Index dim) {
    Eigen::MatrixXd m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = rng.uniform(-1.0, 1.0);
    return 0.5 * (m + m.transpose()).eval();
}

TrainBatch random_batch(Rng& rng, int n, Eigen::Index d, int blocks) {
    TrainBatch batch;
    for (int i = 0; i < n; ++i) {
        PersonDescriptor probe, gallery;
        for (int t = 0; t < blocks; ++t) {
            probe.regions.push_back(random_vector(rng, d));
            gallery.regions.push_back(random_vector(rng, d));
        }
        batch.probes.push_back(std::move(probe));
        batch.gallery.push_back(std::move(gallery));
    }
    for (int i = 0; i < n; ++i) batch.gallery_subset.push_back(i);
    return batch;
}

MetricModel random_model(Rng& rng, Eigen::Index d, int blocks, double scale) {
    MetricModel model = MetricModel::zeros(std::vector<Eigen::Index>(blocks, d));
    for (auto& block : model.blocks) {
        block.w_m = scale * random_symmetric(rng, d);
        block.w_b = scale * random_symmetric(rng, d);
    }
    return model;
}

double model_dot(const MetricModel& a, const MetricModel& b) {
    double dot = 0.0;
    for (std::size_t t = 0; t < a.blocks.size(); ++t) {
        dot += (a.blocks[t].w_m.array() * b.blocks[t].w_m.array()).sum();
        dot += (a.blocks[t].w_b.array() * b.blocks[t].w_b.array()).sum();
    }
    return dot;
}

bool check_gradients(std::uint64_t seed) {
    Rng rng(seed + 11);
    const int n = 6, blocks = 3;
    const Eigen::Index d = 5;
    const TrainBatch batch = random_batch(rng, n, d, blocks);
    const BatchMatrices matrices(batch);
    const double alpha1 = 1.0, alpha2 = 1.1;
    constexpr double kStep = 1e-5, kTolerance = 1e-5;

    int tested = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const MetricModel model = random_model(rng, d, blocks, 0.5);
        MetricModel direction = random_model(rng, d, blocks, 1.0);
        direction.scale(1.0 / direction.frobenius_norm());

        for (const bool use_l1 : {true, false}) {
            const LossTerms terms =
                use_l1 ? loss_l1_with_gradient(model, matrices, alpha1)
                       : loss_l2_with_gradient(model, matrices, alpha2);
            MetricModel plus = model, minus = model;
            plus.add_scaled(direction, kStep);
            minus.add_scaled(direction, -kStep);
            const double f_plus = use_l1 ? loss_l1(plus, matrices, alpha1).value
                                         : loss_l2(plus, matrices, alpha2).value;
            const double f_minus = use_l1 ? loss_l1(minus, matrices, alpha1).value
                                          : loss_l2(minus, matrices, alpha2).value;

            // Skip directions that cross a hinge kink, where the loss is
            // not differentiable and finite differences disagree.
            bool near_kink = false;
            {
                const HingeLoss at_plus = use_l1 ? loss_l1(plus, matrices, alpha1)
                                                 : loss_l2(plus, matrices, alpha2);
                const HingeLoss at_minus = use_l1 ? loss_l1(minus, matrices, alpha1)
                                                  : loss_l2(minus, matrices, alpha2);
                near_kink = at_plus.active != at_minus.active;
            }
            if (near_kink) continue;

            const double numeric = (f_plus - f_minus) / (2.0 * kStep);
            const double analytic = model_dot(terms.gradient, direction);
            const double scale = std::max({1.0, std::fabs(numeric), std::fabs(analytic)});
            worst = std::max(worst, std::fabs(numeric - analytic) / scale);
            ++tested;
        }
    }
    const bool ok = tested >= 10 && worst < kTolerance;
    std::printf("selfcheck gradient-finite-differences: %s (%d directions, max rel err %.3g)\n",
                ok ? "ok" : "FAIL", tested, worst);
    return ok;
}

bool check_prox(std::uint64_t seed) {
    Rng rng(seed + 23);
    bool ok = true;
    for (int trial = 0; trial < 20 && ok; ++trial) {
        const Eigen::Index rows = 3 + static_cast<Eigen::Index>(rng.next_below(5));
        const Eigen::Index cols = 3 + static_cast<Eigen::Index>(rng.next_below(5));
        Eigen::MatrixXd w(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index c = 0; c < cols; ++c) w(r, c) = rng.uniform(-2.0, 2.0);
        const double tau = rng.uniform(0.0, 1.5);
        const Eigen::MatrixXd prox = prox_l21(w, tau);
        auto subproblem = [&](const Eigen::MatrixXd& x) {
            return 0.5 * (x - w).squaredNorm() + tau * x.rowwise().norm().sum();
        };
        const double at_prox = subproblem(prox);
        for (int p = 0; p < 100; ++p) {
            Eigen::MatrixXd candidate = prox;
            for (Eigen::Index r = 0; r < rows; ++r)
                for (Eigen::Index c = 0; c < cols; ++c)
                    candidate(r, c) += rng.uniform(-0.5, 0.5);
            if (subproblem(candidate) < at_prox - 1e-12) {
                ok = false;
                break;
            }
        }
    }
    std::printf("selfcheck prox-l21-optimality: %s\n", ok ? "ok" : "FAIL");
    return ok;
}

bool check_projection(std::uint64_t seed) {
    Rng rng(seed + 37);
    bool ok = true;
    for (int trial = 0; trial < 20 && ok; ++trial) {
        const Eigen::MatrixXd w = random_symmetric(rng, 5);
        const Eigen::MatrixXd projected = project_nsd(w);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(projected,
                                                              Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().maxCoeff() > 1e-9) ok = false;
        if ((project_nsd(projected) - projected).norm() > 1e-10) ok = false;
        const double distance = (w - projected).norm();
        for (int p = 0; p < 100 && ok; ++p) {
            const Eigen::MatrixXd a = random_symmetric(rng, 5);
            const Eigen::MatrixXd nsd_sample = -a * a.transpose();
            if ((w - nsd_sample).norm() < distance - 1e-10) ok = false;
        }
    }
    std::printf("selfcheck nsd-projection-optimality: %s\n", ok ? "ok" : "FAIL");
    return ok;
}

bool check_pca(std::uint64_t seed) {
    Rng rng(seed + 41);
    std::vector<Eigen::VectorXd> samples;
    for (int i = 0; i < 12; ++i) samples.push_back(random_vector(rng, 8));
    const PcaModel model = fit_pca(samples, RegionKind::kGlobal, 5);
    const Eigen::MatrixXd gram = model.basis.transpose() * model.basis;
    const bool orthonormal =
        (gram - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-8;
    const bool centered = pca_project(model, model.mean).norm() < 1e-9;
    const bool ok = orthonormal && centered;
    std::printf("selfcheck pca-orthonormality: %s\n", ok ? "ok" : "FAIL");
    return ok;
}

}  // namespace

bool run_selfcheck(std::uint64_t seed) {
    bool ok = true;
    ok &= check_gradients(seed);
    ok &= check_prox(seed);
    ok &= check_projection(seed);
    ok &= check_pca(seed);
    std::printf("selfcheck: %s\n", ok ? "all checks passed" : "FAILURES detected");
    return ok;
}

}  // namespace reid
