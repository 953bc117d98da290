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

#include "c3msv/error.hpp"
#include "c3msv/symplectic.hpp"

namespace {

using c3msv::Matrix;

TEST(Symplectic, FormIsAntisymmetricAndSquaresToMinusIdentity) {
    const Matrix om = c3msv::symplectic_form(3);
    EXPECT_TRUE((om + om.transpose()).isZero());
    EXPECT_TRUE((om * om + Matrix::Identity(6, 6)).isZero());
}

TEST(Symplectic, SqueezerAndRotationPreserveTheForm) {
    const Matrix om = c3msv::symplectic_form(2);
    for (const Matrix& s : {c3msv::squeezer(2, 0, 0.7), c3msv::squeezer(2, 1, -1.3), c3msv::phase_rotation(2, 1, 2.1)}) {
        EXPECT_LT((s * om * s.transpose() - om).cwiseAbs().maxCoeff(), 1e-13);
    }
}

TEST(Symplectic, ThermalStateEigenvaluesAreDiagonal) {
    Matrix v = Matrix::Zero(4, 4);
    v.diagonal() << 3.0, 3.0, 1.5, 1.5;
    const auto nu = c3msv::symplectic_eigenvalues(v, 2);
    ASSERT_EQ(nu.size(), 2u);
    EXPECT_NEAR(nu[0], 1.5, 1e-12);
    EXPECT_NEAR(nu[1], 3.0, 1e-12);
}

TEST(Symplectic, SqueezedThermalKeepsItsEigenvalue) {
    Matrix v = 2.5 * Matrix::Identity(2, 2);
    const Matrix s = c3msv::squeezer(1, 0, 0.9);
    EXPECT_NEAR(c3msv::symplectic_eigenvalues(s * v * s.transpose(), 1)[0], 2.5, 1e-12);
}

TEST(Symplectic, TwoModeSqueezedVacuumIsPure) {
    // cosh 2r on the diagonal, ±sinh 2r on the x/p correlations.
    const double r = 0.8;
    const double a = std::cosh(2 * r), b = std::sinh(2 * r);
    Matrix v(4, 4);
    v << a, 0, b, 0,
         0, a, 0, -b,
         b, 0, a, 0,
         0, -b, 0, a;
    for (double nu : c3msv::symplectic_eigenvalues(v, 2)) EXPECT_NEAR(nu, 1.0, 1e-12);
    EXPECT_TRUE(c3msv::is_bona_fide(v));
}

TEST(Symplectic, SubVacuumMatrixIsNotBonaFide) {
    Matrix v = Matrix::Identity(2, 2);
    v(0, 0) = 0.5;
    v(1, 1) = 0.5;
    EXPECT_FALSE(c3msv::is_bona_fide(v));
    EXPECT_LT(c3msv::uncertainty_margin(v), 0.0);
}

TEST(Symplectic, SpectrumRejectsIndefiniteInput) {
    Matrix v = Matrix::Identity(2, 2);
    v(1, 1) = -1.0;
    EXPECT_THROW(c3msv::symplectic_spectrum(v), c3msv::NotPositiveDefinite);
}

TEST(Symplectic, SizeMismatchThrows) {
    EXPECT_THROW(c3msv::symplectic_eigenvalues(Matrix::Identity(4, 4), 3), c3msv::InvalidArgument);
}

}  // namespace
