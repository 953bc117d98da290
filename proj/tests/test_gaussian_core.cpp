/*
 * Copyright 2026 The c3msv Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cmath>

#include "c3msv/gaussian_core.hpp"
#include "c3msv/symplectic.hpp"

namespace {

using namespace c3msv;

TEST(SqueezingConfig, TotalPhotonsRoundTrip) {
    const auto cfg = SqueezingConfig::from_total_photons(3.0, 0.4);
    EXPECT_NEAR(cfg.total_photons(), 3.0, 1e-12);
    EXPECT_NEAR(cfg.s() * cfg.s(), 1.5, 1e-12);
}

TEST(SqueezingConfig, RejectsOutOfRangeParameters) {
    EXPECT_THROW(SqueezingConfig(-0.1, 0.0), InvalidArgument);
    EXPECT_THROW(SqueezingConfig(0.5, 2.0), InvalidArgument);
    EXPECT_THROW(SqueezingConfig(0.5, 0.1, std::nan(""), 0.0), InvalidArgument);
    EXPECT_THROW(SqueezingConfig::from_total_photons(-1.0, 0.0), InvalidArgument);
    EXPECT_NO_THROW(SqueezingConfig(0.5, kPi / 2));
}

TEST(SqueezingConfig, OmegaShorthands) {
    const SqueezingConfig cfg(0.9, 0.3);
    const double c2 = std::pow(std::cosh(0.9), 2), s2 = std::pow(std::sinh(0.9), 2);
    EXPECT_NEAR(cfg.omega0(), std::cosh(1.8), 1e-12);
    EXPECT_NEAR(cfg.omega1(), c2 - s2 * std::cos(0.6), 1e-12);
    EXPECT_NEAR(cfg.omega2(), c2 + s2 * std::cos(0.6), 1e-12);
    EXPECT_NEAR(std::abs(cfg.epsilon1()), std::sinh(0.9) * std::cos(0.3), 1e-12);
}

TEST(Covariance, VacuumAtZeroSqueezing) {
    const auto cm = c3msv_covariance(SqueezingConfig(0.0, 0.7, 1.0, 2.0));
    EXPECT_TRUE((cm.entries() - Matrix::Identity(6, 6)).isZero(1e-15));
}

TEST(Covariance, SingleModeMarginalsAreThermal) {
    const SqueezingConfig cfg(1.1, 0.5, 0.3, -0.8);
    const auto cm = c3msv_covariance(cfg);
    const auto n = mean_photon_numbers(cfg);
    const double occ[3] = {n.n1, n.n2, n.n3};
    for (int j = 0; j < 3; ++j) {
        const Eigen::Matrix2d b = cm.block(j, j);
        EXPECT_NEAR(b(0, 0), 1 + 2 * occ[j], 1e-12);
        EXPECT_NEAR(b(1, 1), 1 + 2 * occ[j], 1e-12);
        EXPECT_NEAR(b(0, 1), 0.0, 1e-12);
    }
    EXPECT_NEAR(n.n1 + n.n3, n.n2, 1e-12);
}

TEST(Covariance, GlobalStateIsPure) {
    const auto cm = c3msv_covariance(SqueezingConfig(1.4, 1.1, 2.0, 0.5));
    for (double nu : symplectic_eigenvalues(cm.entries(), 3)) EXPECT_NEAR(nu, 1.0, 1e-10);
}

TEST(Covariance, TwoModeMarginalMirrorsTheThirdMode) {
    // A pure three-mode state: the (i, j) marginal has symplectic spectrum
    // {1, 1 + 2 n_k} with k the remaining mode.
    const SqueezingConfig cfg(0.8, 0.9);
    const auto cm = c3msv_covariance(cfg);
    const auto n = mean_photon_numbers(cfg);
    const double occ[3] = {n.n1, n.n2, n.n3};
    const int pairs[3][3] = {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}};
    for (const auto& p : pairs) {
        const auto nu = symplectic_eigenvalues(sub_cm(cm, {p[0], p[1]}).entries(), 2);
        EXPECT_NEAR(nu[0], 1.0, 1e-10);
        EXPECT_NEAR(nu[1], 1.0 + 2.0 * occ[p[2]], 1e-10);
    }
}

TEST(Covariance, ModesOneAndThreeAreOnlyClassicallyCorrelatedInX) {
    // At θ = 0 the (1,3) block is diag(b, b) with b = 2 s² cosφ sinφ.
    const SqueezingConfig cfg(0.7, 0.6);
    const auto b13 = c3msv_covariance(cfg).block(0, 2);
    const double expect = 2 * std::pow(std::sinh(0.7), 2) * std::cos(0.6) * std::sin(0.6);
    EXPECT_NEAR(b13(0, 0), expect, 1e-12);
    EXPECT_NEAR(b13(1, 1), expect, 1e-12);
}

TEST(Covariance, RejectsBadMatrices) {
    EXPECT_THROW(CovarianceMatrix(Matrix::Identity(3, 3)), InvalidArgument);
    Matrix m = Matrix::Identity(2, 2);
    m(0, 1) = 0.5;
    EXPECT_THROW(CovarianceMatrix{m}, InvalidArgument);
}

TEST(Partition, LabelsAreOneBased) {
    const auto p = Partition::from_labels({2, 3}, {1});
    EXPECT_EQ(p.party_a(), (std::vector<int>{1, 2}));
    EXPECT_EQ(p.party_b(), (std::vector<int>{0}));
    EXPECT_THROW(Partition({0}, {0}), InvalidArgument);
    EXPECT_THROW(Partition({}, {1}), InvalidArgument);
    EXPECT_THROW(Partition({3}, {1}), InvalidArgument);
}

TEST(Partition, SchurComplementOfProductStateIsTheMarginal) {
    Matrix v = Matrix::Identity(4, 4);
    v.diagonal() << 2.0, 2.0, 5.0, 5.0;
    const Matrix s = schur_complement(CovarianceMatrix(v), Partition({0}, {1}, 2));
    EXPECT_TRUE((s - 5.0 * Matrix::Identity(2, 2)).isZero(1e-14));
}

}  // namespace
