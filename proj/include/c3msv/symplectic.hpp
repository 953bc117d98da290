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
#pragma once

// Symplectic linear-algebra kernel over the quadrature ordering
// (x1, p1, x2, p2, ...). Vacuum covariance is the identity.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "c3msv/error.hpp"

namespace c3msv {

using Matrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Largest condition number accepted before a block is treated as singular.
inline constexpr double kMaxCondition = 1e12;

/// Ω^{⊕n}, the block-diagonal symplectic form with Ω = [[0, 1], [-1, 0]].
inline Matrix symplectic_form(int n_modes) {
    Matrix omega = Matrix::Zero(2 * n_modes, 2 * n_modes);
    for (int j = 0; j < n_modes; ++j) {
        omega(2 * j, 2 * j + 1) = 1.0;
        omega(2 * j + 1, 2 * j) = -1.0;
    }
    return omega;
}

inline Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

inline double max_asymmetry(const Matrix& m) {
    return (m - m.transpose()).cwiseAbs().maxCoeff();
}

/// Smallest eigenvalue of the Hermitian matrix V + iΩ^{⊕n}. The state is
/// physical (bona fide) when this is nonnegative up to round-off.
inline double uncertainty_margin(const Matrix& v) {
    const int n = static_cast<int>(v.rows()) / 2;
    const ComplexMatrix h = symmetrized(v).cast<std::complex<double>>() +
                            std::complex<double>(0.0, 1.0) * symplectic_form(n).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

inline bool is_bona_fide(const Matrix& v, double tol = 1e-10) {
    return uncertainty_margin(v) >= -tol;
}

/// Condition number of a symmetric matrix from its eigenvalue moduli.
inline double symmetric_condition(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(m), Eigen::EigenvaluesOnly);
    const auto abs_ev = solver.eigenvalues().cwiseAbs();
    const double lo = abs_ev.minCoeff();
    if (lo == 0.0) return std::numeric_limits<double>::infinity();
    return abs_ev.maxCoeff() / lo;
}

/// All 2n moduli of the eigenvalues of iΩ^{⊕n} m, ascending. For positive
/// definite m they come in equal pairs (±ν); each symplectic eigenvalue
/// therefore appears twice.
inline std::vector<double> symplectic_spectrum(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0) {
        throw InvalidArgument("symplectic_spectrum: matrix must be 2n x 2n");
    }
    const int n = static_cast<int>(m.rows()) / 2;
    const Matrix sym = symmetrized(m);
    Eigen::LLT<Matrix> llt(sym);
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefinite("symplectic_spectrum: matrix is not positive definite");
    }
    // Ω m is real with spectrum ±iν; the real parts are round-off and dropped.
    Eigen::EigenSolver<Matrix> solver(symplectic_form(n) * sym, /*computeEigenvectors=*/false);
    std::vector<double> moduli;
    moduli.reserve(2 * n);
    for (const auto& ev : solver.eigenvalues()) moduli.push_back(std::abs(ev.imag()));
    std::sort(moduli.begin(), moduli.end());
    return moduli;
}

/// The n symplectic (Williamson) eigenvalues of a 2n x 2n positive definite
/// matrix, ascending.
inline std::vector<double> symplectic_eigenvalues(const Matrix& m, int n_modes) {
    if (m.rows() != 2 * n_modes) {
        throw InvalidArgument("symplectic_eigenvalues: size does not match mode count");
    }
    const auto moduli = symplectic_spectrum(m);
    std::vector<double> nu(n_modes);
    for (int k = 0; k < n_modes; ++k) nu[k] = 0.5 * (moduli[2 * k] + moduli[2 * k + 1]);
    return nu;
}

/// Single-mode squeezer S = diag(e^{-r}, e^{r}) acting on mode j.
inline Matrix squeezer(int n_modes, int mode, double r) {
    Matrix s = Matrix::Identity(2 * n_modes, 2 * n_modes);
    s(2 * mode, 2 * mode) = std::exp(-r);
    s(2 * mode + 1, 2 * mode + 1) = std::exp(r);
    return s;
}

/// Phase rotation by angle a on mode j.
inline Matrix phase_rotation(int n_modes, int mode, double a) {
    Matrix s = Matrix::Identity(2 * n_modes, 2 * n_modes);
    s(2 * mode, 2 * mode) = std::cos(a);
    s(2 * mode, 2 * mode + 1) = std::sin(a);
    s(2 * mode + 1, 2 * mode) = -std::sin(a);
    s(2 * mode + 1, 2 * mode + 1) = std::cos(a);
    return s;
}

}  // namespace c3msv
