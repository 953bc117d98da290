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
#include <random>

#include "c3msv/fock.hpp"

namespace {

using namespace c3msv;

TEST(Fock, TruncationDefectMatchesLostNorm) {
    const SqueezingConfig cfg(0.8, 0.6);
    for (int n : {3, 10, 25}) {
        const auto psi = build_c3msv_fock(cfg, n, 1.0);
        EXPECT_NEAR(1.0 - psi.norm2(), truncation_defect(cfg, n), 1e-14) << n;
    }
}

TEST(Fock, CutoffBudget) {
    const SqueezingConfig cfg(1.0, 0.3);
    const int n = auto_cutoff(cfg, 1e-10);
    EXPECT_LT(truncation_defect(cfg, n), 1e-10);
    EXPECT_GE(truncation_defect(cfg, n - 1), 1e-10);
    EXPECT_THROW(build_c3msv_fock(cfg, 5), CutoffError);
}

TEST(Fock, PhotonNumberConstraint) {
    const auto psi = build_c3msv_fock(SqueezingConfig(0.7, 0.9, 0.4, 1.0), 12, 1.0);
    EXPECT_EQ(psi.amplitude(1, 1, 1), Complex(0.0));
    EXPECT_NE(psi.amplitude(1, 3, 2), Complex(0.0));
}

TEST(Fock, MomentsMatchGeneratingFunction) {
    const SqueezingConfig cfg(0.9, 0.5, 0.7, -1.1);
    const auto psi = build_c3msv_fock(cfg, 0, 1e-15);
    const std::vector<MomentSpec> specs = {
        {{0, 0, 0}, {0, 0, 0}}, {{1, 0, 0}, {1, 0, 0}}, {{0, 1, 0}, {0, 1, 0}}, {{0, 0, 0}, {1, 1, 0}},
        {{1, 1, 0}, {0, 0, 0}}, {{1, 0, 0}, {0, 0, 1}}, {{2, 0, 0}, {2, 0, 0}}, {{1, 0, 1}, {1, 0, 1}},
        {{0, 2, 0}, {1, 0, 1}}, {{0, 0, 0}, {1, 2, 1}}, {{1, 1, 1}, {1, 1, 1}}, {{0, 0, 0}, {1, 0, 0}},
    };
    for (const auto& s : specs) {
        const Complex a = moment_generating(cfg, s);
        const Complex b = moment_fock(psi, s);
        EXPECT_LT(std::abs(a - b), 1e-10 * std::max(1.0, std::abs(a)))
            << s.k[0] << s.k[1] << s.k[2] << s.l[0] << s.l[1] << s.l[2];
    }
}

TEST(Fock, MeanPhotonNumbers) {
    const SqueezingConfig cfg = SqueezingConfig::from_total_photons(2.0, kPi / 4);
    EXPECT_NEAR(moment_generating(cfg, {{0, 1, 0}, {0, 1, 0}}).real(), 1.0, 1e-12);
    EXPECT_NEAR(moment_generating(cfg, {{1, 0, 0}, {1, 0, 0}}).real(), 0.5, 1e-12);
}

TEST(Fock, SecondMomentsReassembleTheCovarianceMatrix) {
    for (const auto& cfg : {SqueezingConfig(0.4, 0.2, 0.0, 0.0), SqueezingConfig(1.1, 1.0, 2.2, -0.4)}) {
        const auto psi = build_c3msv_fock(cfg, 0, 1e-15);
        EXPECT_LT((covariance_from_fock(psi) - c3msv_covariance(cfg).entries()).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(Fock, FullStateIsPure) {
    // Small cutoff keeps the 3-mode density matrix small; the truncated state
    // is still a pure (renormalized) vector.
    const auto psi = build_c3msv_fock(SqueezingConfig(0.3, 0.7), 4, 1.0);
    const auto rho = reduce(psi, {0, 1, 2});
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-14);
    EXPECT_NEAR(rho.purity(), 1.0, 1e-12);
}

TEST(Fock, ReducedStatesArePhysical) {
    const SqueezingConfig cfg(0.8, 0.5, 0.3, 0.1);
    const auto psi = build_c3msv_fock(cfg, 0, 1e-12);
    const auto rho = reduce(psi, {0, 2});
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-13);
    EXPECT_LT(rho.hermiticity_error(), 1e-14);
    EXPECT_GT(rho.min_eigenvalue(), -1e-12);
    EXPECT_LT(rho.purity(), 1.0);
    const auto n = mean_photon_numbers(cfg);
    EXPECT_NEAR(rho.mean_photons(0), n.n1, 1e-9);
    EXPECT_NEAR(rho.mean_photons(1), n.n3, 1e-9);
}

TEST(Fock, SubtractionPrefactorIsTheOccupation) {
    const SqueezingConfig cfg(0.9, 0.4);
    const auto psi = build_c3msv_fock(cfg, 0, 1e-14);
    EXPECT_NEAR(subtract_and_reduce(psi, SubtractionScheme::parse("1a|2")).prefactor, mean_photon_numbers(cfg).n1, 1e-10);
    const double two = moment_generating(cfg, {{1, 0, 1}, {1, 0, 1}}).real();
    EXPECT_NEAR(subtract_and_reduce(psi, SubtractionScheme::parse("1a3a|2")).prefactor, two, 1e-10);
    EXPECT_NEAR(two, 2.0 * std::norm(cfg.epsilon1() * cfg.epsilon2()), 1e-12);
}

TEST(Fock, SubtractingAnEmptyModeThrows) {
    const auto psi = build_c3msv_fock(SqueezingConfig(0.9, 0.0), 0);
    EXPECT_THROW(subtract_and_reduce(psi, SubtractionScheme::parse("3a|12")), ZeroNormError);
}

TEST(Fock, VacuumWignerPeak) {
    const auto psi = build_c3msv_fock(SqueezingConfig(0.0, 0.3), 1, 1.0);
    const auto rho = reduce(psi, {0});
    const auto w = wigner_from_density(rho, {{Complex(0.0, 0.0)}, {Complex(0.5, 0.0)}});
    EXPECT_NEAR(w[0], 2.0 / kPi, 1e-14);
    EXPECT_NEAR(w[1], 2.0 / kPi * std::exp(-0.5), 1e-14);
}

TEST(Fock, DisplacedParityMatchesEveryClosedForm) {
    const auto cfg = SqueezingConfig::from_total_photons(1.0, 0.6, 0.2, 0.9);
    const auto psi = build_c3msv_fock(cfg, 0, 1e-12);
    std::mt19937 rng(7);
    std::normal_distribution<double> n01(0.0, 0.5);
    for (const auto& scheme : SubtractionScheme::all()) {
        const auto rho = subtract_and_reduce(psi, scheme).rho;
        const auto w = wigner_closed_form(cfg, scheme);
        std::vector<std::vector<Complex>> pts;
        for (int k = 0; k < 6; ++k) {
            std::vector<Complex> b;
            for (int m = 0; m < rho.n_modes(); ++m) b.emplace_back(n01(rng), n01(rng));
            pts.push_back(b);
        }
        const auto wf = wigner_from_density(rho, pts);
        for (std::size_t k = 0; k < pts.size(); ++k) EXPECT_NEAR(wf[k], w(pts[k]), 1e-8) << scheme.tag();
    }
}

TEST(Fock, OracleNegativityAgreesWithQuadrature) {
    const auto cfg = SqueezingConfig::from_total_photons(3.0, kPi / 8);
    const auto psi = build_c3msv_fock(cfg, 40);
    for (const char* tag : {"1a|2", "1a3a|2", "2a|1"}) {
        const auto scheme = SubtractionScheme::parse(tag);
        const auto o = negativity_oracle(subtract_and_reduce(psi, scheme).rho);
        EXPECT_NEAR(o.value, negativity(cfg, scheme).value, 2e-3) << tag;
    }
}

}  // namespace
