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

// Brute-force Fock-basis model of the C3MSV, independent of the Gaussian
// formalism: ladder-operator moments, the moment generating function,
// photon subtraction with partial trace, and Wigner functions by displaced
// parity.
//
// Expanding the squeezing exponential gives
//   |ψ> = Σ c⁻¹ (-ε₁/c)^{n₁} (-ε₂/c)^{n₃} √C(n₁+n₃, n₁) |n₁, n₁+n₃, n₃>,
// so every state met here lives on a slice n₂ = n₁ + n₃ + δ and is stored as
// a 2D array over (n₁, n₃) plus the shift δ.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "c3msv/gaussian_core.hpp"
#include "c3msv/polynomial.hpp"
#include "c3msv/wigner.hpp"

namespace c3msv {

using Complex = std::complex<double>;

inline constexpr double kDefaultDefectBudget = 1e-8;
inline constexpr int kMaxCutoff = 400;

/// Norm lost by keeping n₁ + n₂ + n₃ ≤ 2N, i.e. n₂ ≤ N: tanh^{2(N+1)} r.
inline double truncation_defect(const SqueezingConfig& cfg, int cutoff) {
    const double t2 = std::pow(std::tanh(cfg.r()), 2);
    return std::pow(t2, cutoff + 1);
}

/// Smallest cutoff whose truncation defect is below `budget`.
inline int auto_cutoff(const SqueezingConfig& cfg, double budget = kDefaultDefectBudget) {
    if (!(budget > 0.0)) throw InvalidArgument("defect budget must be > 0");
    for (int n = 1; n <= kMaxCutoff; ++n) {
        if (truncation_defect(cfg, n) < budget) return n;
    }
    throw CutoffError("no cutoff up to " + std::to_string(kMaxCutoff) + " meets the defect budget");
}

class FockState {
public:
    FockState(int cutoff, int shift) : cutoff_(cutoff), shift_(shift), amp_(ComplexMatrix::Zero(cutoff + 1, cutoff + 1)) {}

    int cutoff() const noexcept { return cutoff_; }
    /// δ in n₂ = n₁ + n₃ + δ.
    int shift() const noexcept { return shift_; }
    int n2(int n1, int n3) const noexcept { return n1 + n3 + shift_; }
    bool valid(int n1, int n3) const noexcept {
        const int m = n2(n1, n3);
        return n1 >= 0 && n3 >= 0 && n1 <= cutoff_ && n3 <= cutoff_ && m >= 0 && m <= cutoff_;
    }

    Complex amplitude(int n1, int n2, int n3) const {
        if (n2 != this->n2(n1, n3) || !valid(n1, n3)) return 0.0;
        return amp_(n1, n3);
    }
    Complex& at(int n1, int n3) { return amp_(n1, n3); }
    Complex at(int n1, int n3) const { return amp_(n1, n3); }

    double norm2() const { return amp_.squaredNorm(); }
    double truncation_defect() const { return std::max(0.0, 1.0 - norm2()); }

    /// a_mode |ψ>, unnormalized. mode is 0-based.
    FockState annihilate(int mode) const {
        if (mode < 0 || mode > 2) throw InvalidArgument("annihilate: mode index out of range");
        FockState out(cutoff_, mode == 1 ? shift_ - 1 : shift_ + 1);
        for (int n1 = 0; n1 <= cutoff_; ++n1) {
            for (int n3 = 0; n3 <= cutoff_; ++n3) {
                if (!out.valid(n1, n3)) continue;
                if (mode == 0) {
                    if (valid(n1 + 1, n3)) out.amp_(n1, n3) = std::sqrt(n1 + 1.0) * amp_(n1 + 1, n3);
                } else if (mode == 2) {
                    if (valid(n1, n3 + 1)) out.amp_(n1, n3) = std::sqrt(n3 + 1.0) * amp_(n1, n3 + 1);
                } else {
                    const int m = out.n2(n1, n3) + 1;
                    if (valid(n1, n3)) out.amp_(n1, n3) = std::sqrt(static_cast<double>(m)) * amp_(n1, n3);
                }
            }
        }
        return out;
    }

    FockState annihilate(const std::array<int, 3>& powers) const {
        FockState out = *this;
        for (int m = 0; m < 3; ++m) {
            if (powers[m] > cutoff_) throw CutoffError("moment degree exceeds the Fock cutoff");
            for (int k = 0; k < powers[m]; ++k) out = out.annihilate(m);
        }
        return out;
    }

    /// <this|other>.
    Complex inner(const FockState& other) const {
        if (other.cutoff_ != cutoff_) throw InvalidArgument("inner: cutoff mismatch");
        if (other.shift_ != shift_) return 0.0;
        return amp_.conjugate().cwiseProduct(other.amp_).sum();
    }

    FockState& operator*=(double k) {
        amp_ *= k;
        return *this;
    }

private:
    int cutoff_;
    int shift_;
    ComplexMatrix amp_;
};

/// The C3MSV in a Fock basis with n₂ ≤ cutoff. cutoff = 0 picks the
/// smallest cutoff meeting `budget`; an explicit cutoff that misses it throws.
inline FockState build_c3msv_fock(const SqueezingConfig& cfg, int cutoff = 0,
                                  double budget = kDefaultDefectBudget) {
    if (cutoff == 0) cutoff = auto_cutoff(cfg, budget);
    if (cutoff < 1 || cutoff > kMaxCutoff) throw InvalidArgument("cutoff must lie in [1, 400]");
    if (truncation_defect(cfg, cutoff) > budget) {
        throw CutoffError("cutoff " + std::to_string(cutoff) + " leaves a truncation defect above the budget");
    }
    const double c = cfg.c();
    const Complex z1 = -cfg.epsilon1() / c;
    const Complex z3 = -cfg.epsilon2() / c;
    FockState psi(cutoff, 0);
    for (int n1 = 0; n1 <= cutoff; ++n1) {
        for (int n3 = 0; n1 + n3 <= cutoff; ++n3) {
            const double log_binom =
                0.5 * (std::lgamma(n1 + n3 + 1.0) - std::lgamma(n1 + 1.0) - std::lgamma(n3 + 1.0));
            Complex v = std::exp(log_binom) / c;
            if (n1 > 0) v *= std::pow(z1, n1);
            if (n3 > 0) v *= std::pow(z3, n3);
            psi.at(n1, n3) = v;
        }
    }
    return psi;
}

/// Creation powers k and annihilation powers l on modes 1..3.
struct MomentSpec {
    std::array<int, 3> k{0, 0, 0};
    std::array<int, 3> l{0, 0, 0};

    int degree() const { return k[0] + k[1] + k[2] + l[0] + l[1] + l[2]; }
    void validate() const {
        for (int j = 0; j < 3; ++j) {
            if (k[j] < 0 || l[j] < 0) throw InvalidArgument("moment powers must be >= 0");
        }
    }
};

/// <a₁†^{k₁} a₂†^{k₂} a₃†^{k₃} a₁^{l₁} a₂^{l₂} a₃^{l₃}> on the (renormalized) truncated state.
inline Complex moment_fock(const FockState& psi, const MomentSpec& spec) {
    spec.validate();
    if (spec.degree() > 2 * psi.cutoff()) throw CutoffError("moment degree exceeds twice the Fock cutoff");
    const FockState left = psi.annihilate(spec.k);
    const FockState right = psi.annihilate(spec.l);
    return left.inner(right) / psi.norm2();
}

/// Same moment from the generating function: coefficient of Πμ^k Πν^l in
/// exp(Q(μ, ν)), times Πk! Πl!, with the exponential expanded as a truncated
/// power series.
inline Complex moment_generating(const SqueezingConfig& cfg, const MomentSpec& spec) {
    spec.validate();
    const int degree = spec.degree();
    const Complex e1 = cfg.epsilon1();
    const Complex e2 = cfg.epsilon2();
    const double c = cfg.c();
    const double s2 = cfg.s() * cfg.s();
    auto mu = [](int j) { return ComplexPolynomial::variable(6, j); };
    auto nu = [](int j) { return ComplexPolynomial::variable(6, 3 + j); };

    const ComplexPolynomial q = Complex(std::norm(e1)) * (mu(0) * nu(0)) + Complex(s2) * (mu(1) * nu(1)) +
                                Complex(std::norm(e2)) * (mu(2) * nu(2)) + std::conj(e1) * e2 * (mu(0) * nu(2)) +
                                e1 * std::conj(e2) * (mu(2) * nu(0)) - c * std::conj(e1) * (mu(0) * mu(1)) -
                                c * e1 * (nu(0) * nu(1)) - c * std::conj(e2) * (mu(1) * mu(2)) -
                                c * e2 * (nu(1) * nu(2));

    ComplexPolynomial series = ComplexPolynomial::constant(6, 1.0);
    ComplexPolynomial power = ComplexPolynomial::constant(6, 1.0);
    for (int m = 1; 2 * m <= degree; ++m) {
        power = power.multiply_truncated(q, degree) * Complex(1.0 / m);
        series += power;
    }
    Exponent e{};
    double factorials = 1.0;
    for (int j = 0; j < 3; ++j) {
        e[j] = static_cast<std::uint8_t>(spec.k[j]);
        e[3 + j] = static_cast<std::uint8_t>(spec.l[j]);
        factorials *= std::tgamma(spec.k[j] + 1.0) * std::tgamma(spec.l[j] + 1.0);
    }
    return series.coefficient(e) * factorials;
}

/// Covariance matrix reassembled from Fock second moments.
inline Matrix covariance_from_fock(const FockState& psi) {
    auto mom = [&](std::array<int, 3> k, std::array<int, 3> l) { return moment_fock(psi, {k, l}); };
    auto unit = [](int j) {
        std::array<int, 3> a{0, 0, 0};
        a[j] = 1;
        return a;
    };
    auto add = [](std::array<int, 3> a, const std::array<int, 3>& b) {
        for (int j = 0; j < 3; ++j) a[j] += b[j];
        return a;
    };
    const std::array<int, 3> none{0, 0, 0};
    // x = (a + a†)/√2, p = (a - a†)/(i√2) and V_ij = <{ξ_i, ξ_j}>, so with
    // A = <a_j a_k> and B = <a_j† a_k>:
    //   V_xx = 2Re A + 2Re B + δ_jk,  V_pp = -2Re A + 2Re B + δ_jk,
    //   V_xp = 2Im A + 2Im B,         V_px = 2Im A - 2Im B.
    Matrix v(6, 6);
    for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
            const Complex a = mom(none, add(unit(j), unit(k)));
            const Complex b = mom(unit(j), unit(k));
            const double delta = j == k ? 1.0 : 0.0;
            v(2 * j, 2 * k) = 2.0 * a.real() + 2.0 * b.real() + delta;
            v(2 * j + 1, 2 * k + 1) = -2.0 * a.real() + 2.0 * b.real() + delta;
            v(2 * j, 2 * k + 1) = 2.0 * a.imag() + 2.0 * b.imag();
            v(2 * j + 1, 2 * k) = 2.0 * a.imag() - 2.0 * b.imag();
        }
    }
    return v;
}

/// Dense density matrix on 1–3 modes, basis index Σ n_j (N+1)^{n-1-j}.
class DensityMatrix {
public:
    DensityMatrix(int n_modes, int cutoff, ComplexMatrix entries)
        : n_modes_(n_modes), cutoff_(cutoff), entries_(std::move(entries)) {}

    int n_modes() const noexcept { return n_modes_; }
    int cutoff() const noexcept { return cutoff_; }
    int dim_per_mode() const noexcept { return cutoff_ + 1; }
    const ComplexMatrix& entries() const noexcept { return entries_; }

    Complex trace() const { return entries_.trace(); }
    double purity() const { return (entries_ * entries_).trace().real(); }
    double hermiticity_error() const { return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff(); }
    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (entries_ + entries_.adjoint()), Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }
    double mean_photons(int mode) const {
        const int d = dim_per_mode();
        double n = 0.0;
        for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
            Eigen::Index rest = i;
            for (int m = n_modes_ - 1; m > mode; --m) rest /= d;
            n += static_cast<double>(rest % d) * entries_(i, i).real();
        }
        return n;
    }

private:
    int n_modes_;
    int cutoff_;
    ComplexMatrix entries_;
};

/// Partial trace of |ψ><ψ| onto `kept` (0-based, ascending), normalized to unit trace.
inline DensityMatrix reduce(const FockState& psi, const std::vector<int>& kept) {
    if (kept.empty() || kept.size() > 3 || !std::is_sorted(kept.begin(), kept.end()) ||
        std::adjacent_find(kept.begin(), kept.end()) != kept.end() || kept.front() < 0 || kept.back() > 2) {
        throw InvalidArgument("reduce: kept modes must be distinct, ascending, in [0, 2]");
    }
    const int n = psi.cutoff();
    const int d = n + 1;
    Eigen::Index dim = 1;
    for (std::size_t i = 0; i < kept.size(); ++i) dim *= d;

    std::vector<int> traced;
    for (int m = 0; m < 3; ++m) {
        if (!std::binary_search(kept.begin(), kept.end(), m)) traced.push_back(m);
    }
    std::map<std::array<int, 2>, std::vector<std::pair<Eigen::Index, Complex>>> groups;
    for (int n1 = 0; n1 <= n; ++n1) {
        for (int n3 = 0; n3 <= n; ++n3) {
            if (!psi.valid(n1, n3)) continue;
            const Complex a = psi.at(n1, n3);
            if (a == 0.0) continue;
            const std::array<int, 3> occ{n1, psi.n2(n1, n3), n3};
            std::array<int, 2> key{-1, -1};
            for (std::size_t t = 0; t < traced.size(); ++t) key[t] = occ[traced[t]];
            Eigen::Index idx = 0;
            for (int m : kept) idx = idx * d + occ[m];
            groups[key].emplace_back(idx, a);
        }
    }
    ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
    for (const auto& [key, entries] : groups) {
        for (const auto& [i, ai] : entries) {
            for (const auto& [j, aj] : entries) rho(i, j) += ai * std::conj(aj);
        }
    }
    const double tr = rho.trace().real();
    if (!(tr > 0.0)) throw ZeroNormError("reduce: state has zero norm");
    rho /= tr;
    return DensityMatrix(static_cast<int>(kept.size()), n, std::move(rho));
}

struct SubtractionResult {
    DensityMatrix rho;
    /// ||a...|ψ>||² / <ψ|ψ>, the normalization the subtraction consumed.
    double prefactor;
};

inline SubtractionResult subtract_and_reduce(const FockState& psi, const SubtractionScheme& scheme) {
    FockState out = psi;
    for (int m : scheme.subtracted_modes()) out = out.annihilate(m);
    const double ratio = out.norm2() / psi.norm2();
    if (!(ratio > 1e-14)) {
        throw ZeroNormError("subtraction on scheme " + scheme.tag() + " annihilates the state");
    }
    return {reduce(out, scheme.kept_modes()), ratio};
}

namespace detail {

/// ⟨m|D(α)|n⟩ (−1)^n for m, n ≤ cutoff.
inline ComplexMatrix displaced_parity_kernel(Complex alpha, int cutoff) {
    const int d = cutoff + 1;
    ComplexMatrix x(d, d);
    const double x2 = std::norm(alpha);
    const double log_abs = x2 > 0.0 ? 0.5 * std::log(x2) : -std::numeric_limits<double>::infinity();
    const double arg = std::arg(alpha);
    std::vector<double> lag(d);
    for (int k = 0; k < d; ++k) {
        // L_n^{(k)}(x2) for n = 0 .. cutoff - k.
        const int nmax = cutoff - k;
        lag[0] = 1.0;
        if (nmax >= 1) lag[1] = 1.0 + k - x2;
        for (int n = 1; n < nmax; ++n) lag[n + 1] = ((2.0 * n + 1.0 + k - x2) * lag[n] - (n + k) * lag[n - 1]) / (n + 1.0);
        for (int n = 0; n <= nmax; ++n) {
            const int m = n + k;
            double log_mag = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)) - 0.5 * x2;
            if (k > 0) log_mag += k * log_abs;
            const double mag = (k > 0 && x2 == 0.0) ? 0.0 : std::exp(log_mag) * lag[n];
            // m >= n: α^{k}; m < n: (−α*)^{k}.
            const Complex lower = std::polar(mag, k * arg);
            const Complex upper = std::polar(mag, k * (kPi - arg));
            const double sign_n = (n % 2 == 0) ? 1.0 : -1.0;
            const double sign_m = (m % 2 == 0) ? 1.0 : -1.0;
            x(m, n) = lower * sign_n;
            if (k > 0) x(n, m) = upper * sign_m;
        }
    }
    return x;
}

struct SparseEntry {
    Eigen::Index row;
    Eigen::Index col;
    Complex value;
};

inline std::vector<SparseEntry> nonzeros(const DensityMatrix& rho, double threshold = 1e-300) {
    std::vector<SparseEntry> out;
    const auto& e = rho.entries();
    for (Eigen::Index j = 0; j < e.cols(); ++j) {
        for (Eigen::Index i = 0; i < e.rows(); ++i) {
            if (std::abs(e(i, j)) > threshold) out.push_back({i, j, e(i, j)});
        }
    }
    return out;
}

}  // namespace detail

/// W at each point by displaced parity, W(β) = (2/π)ⁿ Tr[ρ D(2β) Π].
/// Each point holds one complex β per mode of ρ.
inline std::vector<double> wigner_from_density(const DensityMatrix& rho,
                                               const std::vector<std::vector<Complex>>& points) {
    const int n = rho.n_modes();
    if (n > 2) throw InvalidArgument("wigner_from_density: only 1- and 2-mode states are supported");
    const int d = rho.dim_per_mode();
    const auto nz = detail::nonzeros(rho);
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& beta : points) {
        if (static_cast<int>(beta.size()) != n) throw InvalidArgument("wigner_from_density: wrong point arity");
        Complex w = 0.0;
        if (n == 1) {
            const auto x = detail::displaced_parity_kernel(2.0 * beta[0], rho.cutoff());
            for (const auto& e : nz) w += e.value * x(e.col, e.row);
            out.push_back(2.0 / kPi * w.real());
        } else {
            const auto x1 = detail::displaced_parity_kernel(2.0 * beta[0], rho.cutoff());
            const auto x2 = detail::displaced_parity_kernel(2.0 * beta[1], rho.cutoff());
            for (const auto& e : nz) {
                const auto n1 = e.row / d, n2 = e.row % d, m1 = e.col / d, m2 = e.col % d;
                w += e.value * x1(m1, n1) * x2(m2, n2);
            }
            out.push_back(4.0 / (kPi * kPi) * w.real());
        }
    }
    return out;
}

/// True when |β|² stays inside the radius the cutoff comfortably resolves.
inline bool within_fock_support(const std::vector<Complex>& beta, int cutoff) {
    for (const auto& b : beta) {
        if (std::norm(b) > cutoff / 4.0) return false;
    }
    return true;
}

struct OracleGridSpec {
    double half_width = 6.0;  // grid half-size in thermal standard deviations
    int points = 48;          // per real axis (per radius for phase-covariant modes)
    double tol = 2e-4;
    int max_refinements = 2;
};

struct OracleNegativity {
    double value = 0.0;
    double previous = 0.0;
    double last_delta = 0.0;
    int points = 0;
    bool converged = false;
};

namespace detail {

// Whether ρ commutes with a phase rotation e^{iχ(n₁ ± n₂)} (either sign).
// Then W depends on the phase of β₁ only through a rotation of β₂, and the
// first mode can be integrated along the positive real axis.
inline bool phase_covariant(const DensityMatrix& rho) {
    const int d = rho.dim_per_mode();
    bool joint = true;
    bool opposite = rho.n_modes() == 2;
    for (const auto& e : nonzeros(rho, 1e-14)) {
        std::array<int, 2> a{0, 0}, b{0, 0};
        Eigen::Index ra = e.row, rb = e.col;
        for (int m = rho.n_modes() - 1; m >= 0; --m) {
            a[m] = static_cast<int>(ra % d);
            b[m] = static_cast<int>(rb % d);
            ra /= d;
            rb /= d;
        }
        joint = joint && (a[0] + a[1] == b[0] + b[1]);
        opposite = opposite && (a[0] - a[1] == b[0] - b[1]);
        if (!joint && !opposite) return false;
    }
    return true;
}

struct Node {
    Complex beta;
    double weight;
};

// Midpoint nodes over a disk of radius `radius` either on the positive real
// axis (weight 2πr dr, for phase-covariant states) or on the full square.
inline std::vector<Node> oracle_nodes(double radius, int points, bool radial) {
    std::vector<Node> nodes;
    if (radial) {
        const double h = radius / points;
        for (int i = 0; i < points; ++i) {
            const double r = (i + 0.5) * h;
            nodes.push_back({Complex(r, 0.0), 2.0 * kPi * r * h});
        }
        return nodes;
    }
    const double h = 2.0 * radius / points;
    for (int i = 0; i < points; ++i) {
        for (int j = 0; j < points; ++j) {
            nodes.push_back({Complex(-radius + (i + 0.5) * h, -radius + (j + 0.5) * h), h * h});
        }
    }
    return nodes;
}

inline double oracle_abs_integral(const DensityMatrix& rho, const std::vector<double>& radius, int points) {
    const int n = rho.n_modes();
    const int d = rho.dim_per_mode();
    const bool radial = phase_covariant(rho);
    // A radial line is cheap; give it more nodes when it is the whole integral.
    const auto first = oracle_nodes(radius[0], radial && n == 1 ? 16 * points : points, radial);
    // Kernel rows: flat (m, n) index → value at each node of the first mode.
    auto kernel_rows = [&](const std::vector<Node>& nodes) {
        ComplexMatrix k(nodes.size(), d * d);
        for (std::size_t p = 0; p < nodes.size(); ++p) {
            const auto x = displaced_parity_kernel(2.0 * nodes[p].beta, rho.cutoff());
            for (int m = 0; m < d; ++m)
                for (int q = 0; q < d; ++q) k(p, m * d + q) = x(m, q);
        }
        return k;
    };
    const ComplexMatrix k1 = kernel_rows(first);
    if (n == 1) {
        // W(p) = (2/π) Σ ρ_{nm} X_{mn}
        Eigen::VectorXcd flat(d * d);
        for (int m = 0; m < d; ++m)
            for (int q = 0; q < d; ++q) flat(m * d + q) = rho.entries()(q, m);
        const Eigen::VectorXcd w = k1 * flat;
        double total = 0.0;
        for (std::size_t p = 0; p < first.size(); ++p) total += first[p].weight * std::abs(2.0 / kPi * w(p).real());
        return total;
    }
    // Two modes: W(p, p') = (4/π²) Σ ρ_{(n n'),(m m')} X1_{mn}(p) X2_{m'n'}(p').
    // T[(m n), p'] = Σ_{n', m'} ρ_{(n n'),(m m')} X2_{m'n'}(p') using the sparse ρ.
    const auto second = oracle_nodes(radius[1], points, false);
    const auto nz = nonzeros(rho);
    double total = 0.0;
    constexpr std::size_t chunk = 256;
    for (std::size_t start = 0; start < second.size(); start += chunk) {
        const std::size_t len = std::min(chunk, second.size() - start);
        std::vector<Node> block(second.begin() + start, second.begin() + start + len);
        const ComplexMatrix k2 = kernel_rows(block);  // len × d²
        ComplexMatrix t = ComplexMatrix::Zero(d * d, len);
        for (const auto& e : nz) {
            const auto n1 = e.row / d, n2 = e.row % d, m1 = e.col / d, m2 = e.col % d;
            t.row(m1 * d + n1) += e.value * k2.col(m2 * d + n2).transpose();
        }
        const ComplexMatrix w = k1 * t;  // first × len
        for (Eigen::Index p = 0; p < w.rows(); ++p) {
            for (Eigen::Index q = 0; q < w.cols(); ++q) {
                total += first[p].weight * block[q].weight * std::abs(4.0 / (kPi * kPi) * w(p, q).real());
            }
        }
    }
    return total;
}

}  // namespace detail

/// 𝒩 = ∫|W| − 1 of a Fock-basis state, on midpoint grids sized from the
/// measured mode occupations and doubled until two estimates agree to tol.
inline OracleNegativity negativity_oracle(const DensityMatrix& rho, const OracleGridSpec& spec = {}) {
    if (rho.n_modes() > 2) throw InvalidArgument("negativity_oracle: only 1- and 2-mode states are supported");
    if (spec.points < 8 || !(spec.tol > 0.0) || !(spec.half_width > 0.0)) {
        throw InvalidArgument("negativity_oracle: bad grid spec");
    }
    std::vector<double> radius;
    for (int m = 0; m < rho.n_modes(); ++m) {
        // Re β of a thermal state with occupation n̄ has variance (2n̄ + 1)/4.
        const double sigma = 0.5 * std::sqrt(2.0 * rho.mean_photons(m) + 1.0);
        radius.push_back(spec.half_width * sigma);
    }
    OracleNegativity out;
    int points = spec.points;
    double prev = detail::oracle_abs_integral(rho, radius, points) - 1.0;
    out.value = prev;
    out.points = points;
    for (int k = 0; k < spec.max_refinements; ++k) {
        points *= 2;
        const double cur = detail::oracle_abs_integral(rho, radius, points) - 1.0;
        out.previous = prev;
        out.value = cur;
        out.last_delta = std::abs(cur - prev);
        out.points = points;
        if (out.last_delta < spec.tol) {
            out.converged = true;
            break;
        }
        prev = cur;
    }
    if (std::abs(out.value) < spec.tol) out.value = 0.0;
    return out;
}

}  // namespace c3msv
