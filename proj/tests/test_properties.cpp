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

// Randomized invariants. Every generator is seeded so failures reproduce.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "c3msv/c3msv.hpp"

namespace {

using namespace c3msv;

struct Sampler {
    std::mt19937 rng;
    explicit Sampler(unsigned seed) : rng(seed) {}

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
    SqueezingConfig config(double r_max = 2.0) {
        return SqueezingConfig(uniform(0.0, r_max), uniform(0.0, 0.5 * kPi), uniform(-kPi, kPi), uniform(-kPi, kPi));
    }
};

TEST(Properties, CovarianceIsAPureBonaFideState) {
    Sampler s(101);
    for (int i = 0; i < 200; ++i) {
        const auto cm = c3msv_covariance(s.config());
        EXPECT_NEAR(cm.determinant(), 1.0, 1e-9);
        EXPECT_TRUE(cm.is_bona_fide());
        EXPECT_EQ(max_asymmetry(cm.entries()), 0.0);
    }
}

TEST(Properties, SteeringIgnoresPhases) {
    Sampler s(202);
    for (int i = 0; i < 100; ++i) {
        const auto cfg = s.config();
        const SqueezingConfig flat(cfg.r(), cfg.phi());
        const auto a = steering_table(cfg);
        const auto b = steering_table(flat);
        for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k].value, b[k].value, 1e-9);
    }
}

TEST(Properties, SteeringMirrorUnderOuterModeExchange) {
    Sampler s(303);
    auto val = [](const std::vector<SteeringResult>& t, SteeringCase c) { return t[static_cast<std::size_t>(c)].value; };
    for (int i = 0; i < 100; ++i) {
        const double r = s.uniform(0.0, 2.0), phi = s.uniform(0.0, 0.5 * kPi);
        const auto a = steering_table(SqueezingConfig(r, phi));
        const auto b = steering_table(SqueezingConfig(r, 0.5 * kPi - phi));
        EXPECT_NEAR(val(a, SteeringCase::k23to1), val(b, SteeringCase::k12to3), 1e-9);
        EXPECT_NEAR(val(a, SteeringCase::k2to1), val(b, SteeringCase::k2to3), 1e-9);
        EXPECT_NEAR(val(a, SteeringCase::k1to2), val(b, SteeringCase::k3to2), 1e-9);
        EXPECT_NEAR(val(a, SteeringCase::k13to2), val(b, SteeringCase::k13to2), 1e-9);
    }
}

TEST(Properties, MonogamyHolds) {
    Sampler s(404);
    for (int i = 0; i < 200; ++i) EXPECT_GE(monogamy_deficits(s.config()).min(), -1e-9);
}

TEST(Properties, SymplecticEigenvaluesAreInvariant) {
    Sampler s(505);
    for (int i = 0; i < 100; ++i) {
        const auto cm = c3msv_covariance(s.config());
        const Matrix v = sub_cm(cm, {0, 2}).entries();
        Matrix t = Matrix::Identity(4, 4);
        for (int k = 0; k < 4; ++k) {
            const int mode = k % 2;
            t = squeezer(2, mode, s.uniform(-1.0, 1.0)) * phase_rotation(2, mode, s.uniform(0.0, 2 * kPi)) * t;
        }
        const auto a = symplectic_eigenvalues(v, 2);
        const auto b = symplectic_eigenvalues(t * v * t.transpose(), 2);
        for (int k = 0; k < 2; ++k) EXPECT_NEAR(a[k], b[k], 1e-9 * a[k]);
    }
}

TEST(Properties, DampedStatesStayPhysicalAndSteeringNeverRevives) {
    Sampler s(606);
    for (int i = 0; i < 40; ++i) {
        const auto cfg = s.config(1.5);
        const auto ch = ChannelParams::uniform(s.uniform(0.1, 2.0), s.uniform(0.0, 1.5));
        double prev = INFINITY;
        for (double t = 0.0; t < 3.0; t += 0.25) {
            const auto v = evolve_cm(cfg, ch, t);
            EXPECT_TRUE(v.is_bona_fide());
            const double g = gaussian_steering(v, SteeringCase::k23to1).value;
            EXPECT_LE(g, prev + 1e-12);
            prev = g;
        }
    }
}

TEST(Properties, GeneratingFunctionMatchesFockMoments) {
    Sampler s(707);
    std::uniform_int_distribution<int> pw(0, 2);
    for (int i = 0; i < 25; ++i) {
        const auto cfg = s.config(1.0);
        const auto psi = build_c3msv_fock(cfg, 0, 1e-15);
        MomentSpec spec{{pw(s.rng), pw(s.rng), 0}, {0, pw(s.rng), pw(s.rng)}};
        if (spec.degree() > 6) continue;
        const Complex a = moment_generating(cfg, spec);
        const Complex b = moment_fock(psi, spec);
        EXPECT_LT(std::abs(a - b), 1e-9 * std::max(1.0, std::abs(a)));
    }
}

TEST(Properties, ClosedFormWignerIsRealAndBoundedByParity) {
    // |W| ≤ (2/π)ⁿ for any state: Tr[ρ D Π D†] with Π of norm one.
    Sampler s(808);
    const auto schemes = SubtractionScheme::all();
    for (int i = 0; i < 30; ++i) {
        const auto cfg = SqueezingConfig::from_total_photons(s.uniform(0.2, 4.0), s.uniform(0.05, 0.5 * kPi - 0.05));
        const auto& scheme = schemes[static_cast<std::size_t>(i) % schemes.size()];
        const auto w = wigner_closed_form(cfg, scheme);
        const double bound = std::pow(2.0 / kPi, w.n_modes);
        for (int k = 0; k < 20; ++k) {
            std::vector<double> u;
            for (int d = 0; d < 2 * w.n_modes; ++d) u.push_back(s.uniform(-2.0, 2.0));
            EXPECT_LE(std::abs(w.at(u)), bound * (1 + 1e-12)) << scheme.tag();
        }
    }
}

}  // namespace
