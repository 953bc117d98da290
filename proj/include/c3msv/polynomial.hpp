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

// Sparse multivariate polynomials in up to six variables. Used for the
// prefactors of the closed-form Wigner functions (real coefficients) and for
// the truncated exponential of the moment generating function (complex).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "c3msv/error.hpp"

namespace c3msv {

inline constexpr int kMaxPolyVars = 6;

using Exponent = std::array<std::uint8_t, kMaxPolyVars>;

inline int total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

template <typename Scalar>
class Polynomial {
public:
    using Terms = std::map<Exponent, Scalar>;

    Polynomial() = default;

    explicit Polynomial(int n_vars) : n_vars_(n_vars) {
        if (n_vars < 0 || n_vars > kMaxPolyVars) throw InvalidArgument("polynomial: unsupported variable count");
    }

    static Polynomial constant(int n_vars, Scalar value) {
        Polynomial p(n_vars);
        p.add_term(Exponent{}, value);
        return p;
    }

    static Polynomial variable(int n_vars, int index) {
        if (index < 0 || index >= n_vars) throw InvalidArgument("polynomial: variable index out of range");
        Polynomial p(n_vars);
        Exponent e{};
        e[index] = 1;
        p.add_term(e, Scalar(1));
        return p;
    }

    int n_vars() const noexcept { return n_vars_; }
    const Terms& terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }

    int degree() const {
        int d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
        return d;
    }

    Scalar coefficient(const Exponent& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Scalar(0) : it->second;
    }

    void add_term(const Exponent& e, Scalar c) {
        if (c == Scalar(0)) return;
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == Scalar(0)) terms_.erase(it);
        }
    }

    template <typename Point>
    Scalar evaluate(const Point& x) const {
        Scalar sum(0);
        for (const auto& [e, c] : terms_) {
            Scalar term = c;
            for (int i = 0; i < n_vars_; ++i) {
                for (int k = 0; k < e[i]; ++k) term *= x[i];
            }
            sum += term;
        }
        return sum;
    }

    /// ∂/∂x_var.
    Polynomial partial(int var) const {
        if (var < 0 || var >= n_vars_) throw InvalidArgument("polynomial: variable index out of range");
        Polynomial out(n_vars_);
        for (const auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            Exponent d = e;
            --d[var];
            out.add_term(d, c * Scalar(e[var]));
        }
        return out;
    }

    /// Drop every term of total degree above max_degree.
    Polynomial truncated(int max_degree) const {
        Polynomial out(n_vars_);
        for (const auto& [e, c] : terms_) {
            if (total_degree(e) <= max_degree) out.terms_.emplace(e, c);
        }
        return out;
    }

    /// Product with terms above max_degree never formed.
    Polynomial multiply_truncated(const Polynomial& rhs, int max_degree) const {
        check_compatible(rhs);
        Polynomial out(n_vars_);
        for (const auto& [ea, ca] : terms_) {
            const int da = total_degree(ea);
            for (const auto& [eb, cb] : rhs.terms_) {
                if (da + total_degree(eb) > max_degree) continue;
                Exponent e{};
                for (int i = 0; i < kMaxPolyVars; ++i) e[i] = static_cast<std::uint8_t>(ea[i] + eb[i]);
                out.add_term(e, ca * cb);
            }
        }
        return out;
    }

    /// Substitute x_i := images[i], each image a polynomial in a new set of variables.
    Polynomial compose(const std::vector<Polynomial>& images) const {
        if (static_cast<int>(images.size()) != n_vars_) throw InvalidArgument("polynomial: compose arity mismatch");
        const int m = images.empty() ? 0 : images.front().n_vars();
        for (const auto& img : images) {
            if (img.n_vars() != m) throw InvalidArgument("polynomial: compose images disagree on variable count");
        }
        Polynomial out(m);
        for (const auto& [e, c] : terms_) {
            Polynomial term = constant(m, c);
            for (int i = 0; i < n_vars_; ++i) {
                for (int k = 0; k < e[i]; ++k) term = term * images[i];
            }
            out += term;
        }
        return out;
    }

    Polynomial& operator+=(const Polynomial& rhs) {
        check_compatible(rhs);
        for (const auto& [e, c] : rhs.terms_) add_term(e, c);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& rhs) {
        check_compatible(rhs);
        for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
        return *this;
    }

    Polynomial& operator*=(Scalar k) {
        if (k == Scalar(0)) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= k;
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, Scalar k) { return a *= k; }
    friend Polynomial operator*(Scalar k, Polynomial a) { return a *= k; }
    friend Polynomial operator-(Polynomial a) { return a *= Scalar(-1); }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        return a.multiply_truncated(b, 255 * kMaxPolyVars);
    }

    friend Polynomial operator+(Polynomial a, Scalar k) {
        a.add_term(Exponent{}, k);
        return a;
    }
    friend Polynomial operator-(Polynomial a, Scalar k) {
        a.add_term(Exponent{}, -k);
        return a;
    }

private:
    void check_compatible(const Polynomial& rhs) const {
        if (rhs.n_vars_ != n_vars_) throw InvalidArgument("polynomial: variable count mismatch");
    }

    int n_vars_ = 0;
    Terms terms_;
};

using RealPolynomial = Polynomial<double>;
using ComplexPolynomial = Polynomial<std::complex<double>>;

/// Complex-valued polynomial in real variables, kept as (Re, Im) parts.
struct ComplexForm {
    RealPolynomial re;
    RealPolynomial im;

    explicit ComplexForm(int n_vars) : re(n_vars), im(n_vars) {}
    ComplexForm(RealPolynomial r, RealPolynomial i) : re(std::move(r)), im(std::move(i)) {}

    ComplexForm conj() const { return {re, -im}; }
    RealPolynomial abs2() const { return re * re + im * im; }

    friend ComplexForm operator+(const ComplexForm& a, const ComplexForm& b) { return {a.re + b.re, a.im + b.im}; }
    friend ComplexForm operator-(const ComplexForm& a, const ComplexForm& b) { return {a.re - b.re, a.im - b.im}; }
    friend ComplexForm operator*(const ComplexForm& a, const ComplexForm& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend ComplexForm operator*(std::complex<double> k, const ComplexForm& a) {
        return {k.real() * a.re - k.imag() * a.im, k.real() * a.im + k.imag() * a.re};
    }
};

/// Real 1D polynomial coefficients, lowest degree first.
using Coefficients1D = std::vector<double>;

inline double horner(const Coefficients1D& p, double x) {
    double v = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + *it;
    return v;
}

inline Coefficients1D derivative(const Coefficients1D& p) {
    Coefficients1D d;
    for (std::size_t k = 1; k < p.size(); ++k) d.push_back(static_cast<double>(k) * p[k]);
    return d;
}

inline Coefficients1D trimmed(Coefficients1D p, double rel = 1e-14) {
    double scale = 0.0;
    for (double c : p) scale = std::max(scale, std::abs(c));
    while (!p.empty() && std::abs(p.back()) <= rel * scale) p.pop_back();
    return p;
}

/// Real roots of a low-degree polynomial, ascending. Works by splitting the
/// line at the critical points (roots of the derivative, recursively) and
/// bisecting every monotone piece that changes sign.
inline std::vector<double> real_roots(const Coefficients1D& coeffs) {
    const auto p = trimmed(coeffs);
    if (p.size() <= 1) return {};
    if (p.size() == 2) return {-p[0] / p[1]};

    // Cauchy bound on root magnitude.
    double bound = 0.0;
    for (std::size_t k = 0; k + 1 < p.size(); ++k) bound = std::max(bound, std::abs(p[k] / p.back()));
    bound += 1.0;

    std::vector<double> knots{-bound};
    for (double x : real_roots(derivative(p))) {
        if (x > -bound && x < bound) knots.push_back(x);
    }
    knots.push_back(bound);

    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        double lo = knots[i];
        double hi = knots[i + 1];
        double flo = horner(p, lo);
        const double fhi = horner(p, hi);
        if (flo == 0.0) {
            if (roots.empty() || roots.back() != lo) roots.push_back(lo);
            continue;
        }
        if ((flo < 0.0) == (fhi < 0.0) || fhi == 0.0) continue;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = horner(p, mid);
            if (fm == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((fm < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        roots.push_back(0.5 * (lo + hi));
    }
    if (horner(p, bound) == 0.0) roots.push_back(bound);
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace c3msv
