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

// Deterministic quadrature for integrals of the form
//
//     ∫ k · P(u) · exp(-uᵀ M u) d^d u      or      ∫ k · |P(u)| · exp(-uᵀ M u) d^d u
//
// with P a low-degree polynomial and M positive definite.
//
// The coordinates are whitened (u = Q Λ^{-1/2} y, so uᵀMu = |y|²) and then
// rotated so that P depends only on the first k of them; the other d - k
// directions integrate to √π each. Of the k active axes the last is
// integrated exactly: the real roots of the 1D polynomial split it into
// pieces of constant sign, and each piece is a sum of truncated Gaussian
// moments. The remaining k - 1 axes use a midpoint grid over ±half_width
// standard deviations, doubled until two estimates agree to tol.
//
// Slices are summed in a fixed order per outer index and the per-index
// partial sums are combined pairwise, so the result does not depend on the
// number of worker threads.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "c3msv/error.hpp"
#include "c3msv/polynomial.hpp"
#include "c3msv/symplectic.hpp"

namespace c3msv {

struct QuadratureSpec {
    double half_width = 6.0;  // in standard deviations of the whitened Gaussian
    int points_per_dim = 96;
    double tol = 1e-5;
    int max_refinements = 4;
    unsigned threads = 0;  // 0: hardware concurrency

    void validate() const {
        if (!(half_width > 0.0) || !std::isfinite(half_width)) throw InvalidArgument("quadrature: half_width must be > 0");
        if (points_per_dim < 16) throw InvalidArgument("quadrature: points_per_dim must be >= 16");
        if (!(tol > 0.0)) throw InvalidArgument("quadrature: tol must be > 0");
        if (max_refinements < 1) throw InvalidArgument("quadrature: max_refinements must be >= 1");
    }
};

struct QuadratureResult {
    double value = 0.0;
    double previous = 0.0;
    double last_delta = 0.0;
    int refinements = 0;  // number of grid doublings performed
    int points_per_dim = 0;
};

namespace detail {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double pairwise_sum(const double* x, std::size_t n) {
    if (n == 0) return 0.0;
    if (n == 1) return x[0];
    const std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

/// I_k = ∫_a^b y^k e^{-y²} dy for k = 0..kmax; a, b may be infinite.
inline void gaussian_piece_moments(double a, double b, int kmax, double* out) {
    constexpr double half_sqrt_pi = 0.5 * 1.7724538509055160273;
    double i0;
    if (a >= 0.0) {
        i0 = half_sqrt_pi * (std::erfc(a) - std::erfc(b));
    } else if (b <= 0.0) {
        i0 = half_sqrt_pi * (std::erfc(-b) - std::erfc(-a));
    } else {
        i0 = half_sqrt_pi * (std::erf(b) - std::erf(a));
    }
    auto boundary = [](double y, int p) {
        if (std::isinf(y)) return 0.0;
        return std::pow(y, p) * std::exp(-y * y);
    };
    out[0] = i0;
    if (kmax >= 1) out[1] = 0.5 * (boundary(a, 0) - boundary(b, 0));
    for (int k = 2; k <= kmax; ++k) {
        out[k] = 0.5 * (boundary(a, k - 1) - boundary(b, k - 1)) + 0.5 * (k - 1) * out[k - 2];
    }
}

/// ∫_R P(y) e^{-y²} dy or ∫_R |P(y)| e^{-y²} dy for coefficients c (lowest first).
inline double inner_integral(const Coefficients1D& c, bool absolute) {
    const int deg = static_cast<int>(c.size()) - 1;
    if (deg < 0) return 0.0;
    constexpr double inf = std::numeric_limits<double>::infinity();
    double m[16];
    if (!absolute) {
        gaussian_piece_moments(-inf, inf, deg, m);
        double v = 0.0;
        for (int k = 0; k <= deg; ++k) v += c[k] * m[k];
        return v;
    }
    const auto roots = real_roots(c);
    double total = 0.0;
    double lo = -inf;
    for (std::size_t i = 0; i <= roots.size(); ++i) {
        const double hi = i < roots.size() ? roots[i] : inf;
        if (hi > lo) {
            gaussian_piece_moments(lo, hi, deg, m);
            double v = 0.0;
            for (int k = 0; k <= deg; ++k) v += c[k] * m[k];
            total += std::abs(v);
        }
        lo = hi;
    }
    return total;
}

struct SplitTerm {
    double coeff;
    int inner_power;
    std::array<std::uint8_t, kMaxPolyVars> outer{};
};

// One midpoint-grid estimate with n points per outer axis.
inline double grid_estimate(const std::vector<SplitTerm>& terms, int dims, int inner_degree, int n, double half_len,
                            bool absolute, unsigned threads) {
    const int outer_dims = dims - 1;
    const double h = 2.0 * half_len / n;
    std::vector<double> nodes(n);
    for (int i = 0; i < n; ++i) nodes[i] = -half_len + (i + 0.5) * h;

    int max_pow = 0;
    for (const auto& t : terms) {
        for (int d = 0; d < outer_dims; ++d) max_pow = std::max<int>(max_pow, t.outer[d]);
    }
    // powers[i][p] = nodes[i]^p
    std::vector<std::vector<double>> powers(n, std::vector<double>(max_pow + 1, 1.0));
    std::vector<double> weight(n);
    for (int i = 0; i < n; ++i) {
        for (int p = 1; p <= max_pow; ++p) powers[i][p] = powers[i][p - 1] * nodes[i];
        weight[i] = std::exp(-nodes[i] * nodes[i]) * h;
    }

    long long rest = 1;
    for (int d = 1; d < outer_dims; ++d) rest *= n;

    std::vector<double> per_index(n, 0.0);
    auto work = [&](unsigned worker, unsigned n_workers) {
        std::vector<int> idx(std::max(outer_dims, 1), 0);
        Coefficients1D c(inner_degree + 1);
        for (int i0 = static_cast<int>(worker); i0 < n; i0 += static_cast<int>(n_workers)) {
            CompensatedSum acc;
            for (long long flat = 0; flat < rest; ++flat) {
                idx[0] = i0;
                long long f = flat;
                double w = weight[i0];
                for (int d = outer_dims - 1; d >= 1; --d) {
                    idx[d] = static_cast<int>(f % n);
                    f /= n;
                    w *= weight[idx[d]];
                }
                if (w < 1e-300) continue;
                std::fill(c.begin(), c.end(), 0.0);
                for (const auto& t : terms) {
                    double v = t.coeff;
                    for (int d = 0; d < outer_dims; ++d) v *= powers[idx[d]][t.outer[d]];
                    c[t.inner_power] += v;
                }
                acc.add(w * inner_integral(c, absolute));
            }
            per_index[i0] = acc.value();
        }
    };

    if (outer_dims == 0) {
        Coefficients1D c(inner_degree + 1, 0.0);
        for (const auto& t : terms) c[t.inner_power] += t.coeff;
        return inner_integral(c, absolute);
    }

    unsigned n_workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    n_workers = std::min<unsigned>(n_workers, static_cast<unsigned>(n));
    if (n_workers <= 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(work, w, n_workers);
        for (auto& th : pool) th.join();
    }
    return pairwise_sum(per_index.data(), per_index.size());
}

}  // namespace detail

/// Images x_i = Σ_j a(i, j) y_j for Polynomial::compose, in `n_out` variables.
inline std::vector<RealPolynomial> linear_images(const Matrix& a, int n_out = -1) {
    if (n_out < 0) n_out = static_cast<int>(a.cols());
    std::vector<RealPolynomial> images;
    images.reserve(a.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        RealPolynomial img(n_out);
        for (int j = 0; j < n_out; ++j) img += a(i, j) * RealPolynomial::variable(n_out, j);
        images.push_back(img);
    }
    return images;
}

namespace detail {

/// ∫ y^e e^{-|y|²} dy over R^n for a monomial.
inline double gaussian_monomial(const Exponent& e) {
    double v = 1.0;
    for (int k : e) {
        if (k % 2 != 0) return 0.0;
        v *= std::tgamma(0.5 * (k + 1));
    }
    return v;
}

/// Orthonormal directions (as columns) spanning the subspace P actually
/// depends on, from the Gaussian-weighted gradient covariance
/// G_ij = ∫ ∂_iP ∂_jP e^{-|y|²}. Columns ascend in G eigenvalue, so the
/// direction of strongest dependence comes last.
inline Matrix dependence_rotation(const RealPolynomial& p) {
    const int n = p.n_vars();
    std::vector<RealPolynomial> grad;
    for (int i = 0; i < n; ++i) grad.push_back(p.partial(i));
    Matrix g = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const RealPolynomial prod = grad[i] * grad[j];
            double v = 0.0;
            for (const auto& [e, c] : prod.terms()) v += c * gaussian_monomial(e);
            g(i, j) = g(j, i) = v;
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(g);
    const auto& ev = eig.eigenvalues();
    const double top = ev.maxCoeff();
    std::vector<int> keep;
    for (int i = 0; i < n; ++i) {
        if (top > 0.0 && ev(i) > 1e-13 * top) keep.push_back(i);
    }
    Matrix r(n, keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) r.col(k) = eig.eigenvectors().col(keep[k]);
    return r;
}

}  // namespace detail

/// ∫ norm · P(u) · exp(-uᵀMu) du (or with |P|) over R^d, d = M.rows().
inline QuadratureResult integrate_gauss_poly(const Matrix& quad_form, const RealPolynomial& poly, double norm,
                                             bool absolute, const QuadratureSpec& spec = {}) {
    spec.validate();
    const int dims = static_cast<int>(quad_form.rows());
    if (dims < 1 || dims > kMaxPolyVars || quad_form.cols() != dims || poly.n_vars() != dims) {
        throw InvalidArgument("quadrature: dimension mismatch");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(quad_form));
    const auto& lambda = eig.eigenvalues();
    if (lambda.minCoeff() <= 0.0) throw NotPositiveDefinite("quadrature: quadratic form is not positive definite");

    // u = T y with T = Q Λ^{-1/2}, then y = R z where the columns of R are
    // ordered so that P depends only on the last k coordinates of z and the
    // direction it varies along most is the very last (integrated exactly).
    const Matrix whiten = eig.eigenvectors() * lambda.cwiseSqrt().cwiseInverse().asDiagonal();
    const RealPolynomial p_white = poly.compose(linear_images(whiten));
    const Matrix rot = detail::dependence_rotation(p_white);
    const int active = static_cast<int>(rot.cols());
    const double jacobian = 1.0 / std::sqrt(lambda.prod());
    constexpr double sqrt_pi = 1.7724538509055160273;
    const double free_factor = std::pow(sqrt_pi, dims - std::max(active, 1));

    std::vector<detail::SplitTerm> terms;
    int inner_degree = 0;
    const int n_active = std::max(active, 1);
    if (active == 0) {
        terms.push_back({p_white.coefficient(Exponent{}), 0, {}});
    } else {
        const RealPolynomial pz = p_white.compose(linear_images(rot, active));
        for (const auto& [e, c] : pz.terms()) {
            detail::SplitTerm st{c, e[active - 1], {}};
            for (int d = 0; d + 1 < active; ++d) st.outer[d] = e[d];
            inner_degree = std::max(inner_degree, st.inner_power);
            terms.push_back(st);
        }
    }
    if (inner_degree > 15) throw InvalidArgument("quadrature: polynomial degree too high");
    const int dims_left = n_active;
    const double half_len = spec.half_width / std::numbers::sqrt2;
    const double scale = norm * jacobian * free_factor;
    QuadratureResult res;
    int n = spec.points_per_dim;
    double prev = scale * detail::grid_estimate(terms, dims_left, inner_degree, n, half_len, absolute, spec.threads);
    if (dims_left == 1) {
        res.value = res.previous = prev;
        res.points_per_dim = n;
        return res;
    }
    for (int k = 1; k <= spec.max_refinements; ++k) {
        n *= 2;
        const double cur = scale * detail::grid_estimate(terms, dims_left, inner_degree, n, half_len, absolute, spec.threads);
        res.value = cur;
        res.previous = prev;
        res.last_delta = std::abs(cur - prev);
        res.refinements = k;
        res.points_per_dim = n;
        if (res.last_delta < spec.tol) return res;
        prev = cur;
    }
    throw ConvergenceError("quadrature did not reach tolerance", res.previous, res.value);
}

}  // namespace c3msv
