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

// Coupled three-mode squeezed vacuum: parameters, covariance matrix and the
// block operations (sub-CM, Schur complement) every analysis builds on.
//
// Conventions
//   x = (a + a†)/√2, p = (a - a†)/(i√2); vacuum covariance = identity.
//   Modes are 0-based here. The CLI converts from the 1-based labels.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "c3msv/error.hpp"
#include "c3msv/symplectic.hpp"

namespace c3msv {

inline constexpr double kPi = std::numbers::pi;

/// Squeezing parameters (r, φ, θ1, θ2). The two complex squeezing amplitudes
/// are ξ1 = r cosφ e^{iθ1} and ξ2 = r sinφ e^{iθ2}.
class SqueezingConfig {
public:
    SqueezingConfig() = default;

    SqueezingConfig(double r, double phi, double theta1 = 0.0, double theta2 = 0.0)
        : r_(r), phi_(phi), theta1_(theta1), theta2_(theta2) {
        if (!std::isfinite(r) || r < 0.0) throw InvalidArgument("squeezing r must be finite and >= 0");
        // Allow a few ulps of slack so that phi = pi/2 computed in floating point is accepted.
        if (!std::isfinite(phi) || phi < -1e-15 || phi > 0.5 * kPi + 1e-12) {
            throw InvalidArgument("squeezing angle phi must lie in [0, pi/2]");
        }
        if (!std::isfinite(theta1) || !std::isfinite(theta2)) {
            throw InvalidArgument("phases theta1, theta2 must be finite");
        }
        phi_ = std::clamp(phi, 0.0, 0.5 * kPi);
    }

    /// Build from the total mean photon number n̄_T = 2 sinh²r.
    static SqueezingConfig from_total_photons(double n_total, double phi,
                                              double theta1 = 0.0, double theta2 = 0.0) {
        if (!std::isfinite(n_total) || n_total < 0.0) {
            throw InvalidArgument("total mean photon number must be finite and >= 0");
        }
        return SqueezingConfig(std::asinh(std::sqrt(0.5 * n_total)), phi, theta1, theta2);
    }

    double r() const noexcept { return r_; }
    double phi() const noexcept { return phi_; }
    double theta1() const noexcept { return theta1_; }
    double theta2() const noexcept { return theta2_; }

    double c() const noexcept { return std::cosh(r_); }
    double s() const noexcept { return std::sinh(r_); }
    double r1() const noexcept { return r_ * std::cos(phi_); }
    double r2() const noexcept { return r_ * std::sin(phi_); }
    double total_photons() const noexcept { return 2.0 * s() * s(); }

    std::complex<double> epsilon1() const { return s() * std::cos(phi_) * std::polar(1.0, theta1_); }
    std::complex<double> epsilon2() const { return s() * std::sin(phi_) * std::polar(1.0, theta2_); }

    // Shorthands used throughout the closed forms:
    //   ω0 = c² + s² = cosh 2r,  ω1 = c² - s² cos2φ,  ω2 = c² + s² cos2φ.
    double omega0() const noexcept { return c() * c() + s() * s(); }
    double omega1() const noexcept { return c() * c() - s() * s() * std::cos(2.0 * phi_); }
    double omega2() const noexcept { return c() * c() + s() * s() * std::cos(2.0 * phi_); }

private:
    double r_ = 0.0;
    double phi_ = 0.0;
    double theta1_ = 0.0;
    double theta2_ = 0.0;
};

struct MeanPhotonNumbers {
    double n1 = 0.0;
    double n2 = 0.0;
    double n3 = 0.0;
    double n_total = 0.0;
};

inline MeanPhotonNumbers mean_photon_numbers(const SqueezingConfig& cfg) {
    const double s2 = cfg.s() * cfg.s();
    const double cp = std::cos(cfg.phi());
    const double sp = std::sin(cfg.phi());
    return {s2 * cp * cp, s2, s2 * sp * sp, 2.0 * s2};
}

/// Real symmetric 2n x 2n covariance matrix in (x1, p1, ..., xn, pn) order.
class CovarianceMatrix {
public:
    CovarianceMatrix() = default;

    explicit CovarianceMatrix(Matrix entries) : entries_(std::move(entries)) {
        if (entries_.rows() != entries_.cols() || entries_.rows() == 0 || entries_.rows() % 2 != 0) {
            throw InvalidArgument("covariance matrix must be a non-empty 2n x 2n matrix");
        }
        if (!entries_.allFinite()) throw InvalidArgument("covariance matrix has non-finite entries");
        const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
        if (max_asymmetry(entries_) > 1e-12 * scale) {
            throw InvalidArgument("covariance matrix is not symmetric");
        }
        entries_ = symmetrized(entries_);
    }

    static CovarianceMatrix identity(int n_modes) {
        return CovarianceMatrix(Matrix::Identity(2 * n_modes, 2 * n_modes));
    }

    int n_modes() const noexcept { return static_cast<int>(entries_.rows()) / 2; }
    const Matrix& entries() const noexcept { return entries_; }
    double operator()(int i, int j) const { return entries_(i, j); }

    /// 2x2 block between modes j and k.
    Eigen::Matrix2d block(int j, int k) const { return entries_.block<2, 2>(2 * j, 2 * k); }

    double determinant() const { return entries_.determinant(); }
    double uncertainty_margin() const { return c3msv::uncertainty_margin(entries_); }
    bool is_bona_fide(double tol = 1e-10) const { return c3msv::is_bona_fide(entries_, tol); }

private:
    Matrix entries_;
};

/// Steering party A and steered party B as ordered lists of mode indices.
class Partition {
public:
    Partition() = default;

    Partition(std::vector<int> party_a, std::vector<int> party_b, int n_modes = 3)
        : party_a_(std::move(party_a)), party_b_(std::move(party_b)) {
        if (party_a_.empty() || party_b_.empty()) throw InvalidArgument("partition parties must be non-empty");
        std::set<int> seen;
        for (const auto& party : {party_a_, party_b_}) {
            for (int m : party) {
                if (m < 0 || m >= n_modes) throw InvalidArgument("partition mode index out of range");
                if (!seen.insert(m).second) throw InvalidArgument("partition parties must be disjoint");
            }
        }
    }

    /// Build from 1-based mode labels, as written in the CLI and in tables.
    static Partition from_labels(const std::vector<int>& a, const std::vector<int>& b, int n_modes = 3) {
        auto shift = [](std::vector<int> v) {
            for (int& m : v) --m;
            return v;
        };
        return Partition(shift(a), shift(b), n_modes);
    }

    const std::vector<int>& party_a() const noexcept { return party_a_; }
    const std::vector<int>& party_b() const noexcept { return party_b_; }

private:
    std::vector<int> party_a_;
    std::vector<int> party_b_;
};

inline Eigen::Matrix2d sigma_block(double theta) {
    Eigen::Matrix2d m;
    m << std::cos(theta), std::sin(theta), std::sin(theta), -std::cos(theta);
    return m;
}

inline Eigen::Matrix2d rotation_block(double theta) {
    Eigen::Matrix2d m;
    m << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
    return m;
}

/// Assemble the 6x6 CM from diagonal weights A_j and coupling amplitudes
/// B12, B23, B13. Shared by the pure state and the damped evolution.
inline CovarianceMatrix assemble_c3msv_like(const SqueezingConfig& cfg, const std::array<double, 3>& diag,
                                            double b12, double b23, double b13) {
    Matrix v = Matrix::Zero(6, 6);
    for (int j = 0; j < 3; ++j) v.block<2, 2>(2 * j, 2 * j) = diag[j] * Eigen::Matrix2d::Identity();
    const Eigen::Matrix2d s1 = b12 * sigma_block(cfg.theta1());
    const Eigen::Matrix2d s2 = b23 * sigma_block(cfg.theta2());
    const Eigen::Matrix2d r13 = b13 * rotation_block(cfg.theta2() - cfg.theta1());
    v.block<2, 2>(0, 2) = s1;
    v.block<2, 2>(2, 0) = s1.transpose();
    v.block<2, 2>(2, 4) = s2;
    v.block<2, 2>(4, 2) = s2.transpose();
    v.block<2, 2>(0, 4) = r13;
    v.block<2, 2>(4, 0) = r13.transpose();
    return CovarianceMatrix(std::move(v));
}

/// Covariance matrix of the pure coupled three-mode squeezed vacuum.
inline CovarianceMatrix c3msv_covariance(const SqueezingConfig& cfg) {
    const auto n = mean_photon_numbers(cfg);
    const double s = cfg.s();
    const double c = cfg.c();
    return assemble_c3msv_like(cfg, {1.0 + 2.0 * n.n1, 1.0 + 2.0 * n.n2, 1.0 + 2.0 * n.n3},
                               -2.0 * s * c * std::cos(cfg.phi()), -2.0 * s * c * std::sin(cfg.phi()),
                               s * s * std::sin(2.0 * cfg.phi()));
}

inline std::vector<int> quadrature_indices(const std::vector<int>& modes) {
    std::vector<int> idx;
    idx.reserve(2 * modes.size());
    for (int m : modes) {
        idx.push_back(2 * m);
        idx.push_back(2 * m + 1);
    }
    return idx;
}

inline Matrix select_block(const Matrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
    Matrix out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
    return out;
}

/// Reduced CM over `modes`, in the requested order.
inline CovarianceMatrix sub_cm(const CovarianceMatrix& cm, const std::vector<int>& modes) {
    if (modes.empty()) throw InvalidArgument("sub_cm: empty mode list");
    std::set<int> seen;
    for (int m : modes) {
        if (m < 0 || m >= cm.n_modes()) throw InvalidArgument("sub_cm: mode index out of range");
        if (!seen.insert(m).second) throw InvalidArgument("sub_cm: duplicate mode index");
    }
    const auto idx = quadrature_indices(modes);
    return CovarianceMatrix(select_block(cm.entries(), idx, idx));
}

/// σ_{B|A} = V_B - V_ABᵀ V_A⁻¹ V_AB, with partition indices referring to the
/// modes of `cm`. Modes outside A ∪ B are ignored (traced out).
inline Matrix schur_complement(const CovarianceMatrix& cm, const Partition& partition) {
    for (const auto& party : {partition.party_a(), partition.party_b()}) {
        for (int m : party) {
            if (m >= cm.n_modes()) throw InvalidArgument("schur_complement: partition exceeds CM size");
        }
    }
    const auto ia = quadrature_indices(partition.party_a());
    const auto ib = quadrature_indices(partition.party_b());
    const Matrix va = select_block(cm.entries(), ia, ia);
    const Matrix vb = select_block(cm.entries(), ib, ib);
    const Matrix vab = select_block(cm.entries(), ia, ib);
    const double kappa = symmetric_condition(va);
    if (!(kappa <= kMaxCondition)) throw SingularMatrix("schur_complement: V_A is singular", kappa);
    const Matrix schur = vb - vab.transpose() * va.partialPivLu().solve(vab);
    return symmetrized(schur);
}

}  // namespace c3msv
