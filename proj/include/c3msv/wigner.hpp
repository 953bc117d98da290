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

// Closed-form Wigner functions of the C3MSV and of its photon-subtracted
// reduced states, and their Wigner negativity 𝒩 = ∫|W| d²ⁿβ - 1.
//
// Phase-space point β_j = (x_j + i p_j)/√2 with d²β = dRe(β) dIm(β); the
// real coordinates of a k-mode function are (Re β_1, Im β_1, ..., Re β_k, Im β_k).
// Vacuum: W = (2/π) e^{-2|β|²}.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "c3msv/gaussian_core.hpp"
#include "c3msv/polynomial.hpp"
#include "c3msv/quadrature.hpp"

namespace c3msv {

/// W(u) = norm_const · poly(u) · exp(-uᵀ M u).
struct GaussPolyWigner {
    int n_modes = 0;
    Matrix quad_form;
    RealPolynomial poly;
    double norm_const = 0.0;

    double at(const std::vector<double>& u) const {
        Eigen::Map<const Eigen::VectorXd> v(u.data(), static_cast<Eigen::Index>(u.size()));
        return norm_const * poly.evaluate(u) * std::exp(-v.dot(quad_form * v));
    }

    double operator()(const std::vector<std::complex<double>>& beta) const {
        if (static_cast<int>(beta.size()) != n_modes) throw InvalidArgument("wigner: wrong number of modes");
        std::vector<double> u;
        for (const auto& b : beta) {
            u.push_back(b.real());
            u.push_back(b.imag());
        }
        return at(u);
    }
};

/// A remote photon-subtracted state ρ_{B_a|A}: annihilate on `subtracted`,
/// trace out every mode not in `kept`. Mode indices are 0-based.
class SubtractionScheme {
public:
    /// Parse tags such as "1a|23", "1a3|2" or the shell-friendly "1a3_2".
    static SubtractionScheme parse(std::string_view tag) {
        std::string t(tag);
        std::replace(t.begin(), t.end(), '_', '|');
        const auto bar = t.find('|');
        if (bar == std::string::npos || t.find('|', bar + 1) != std::string::npos) {
            throw InvalidArgument("unknown subtraction scheme '" + std::string(tag) + "'");
        }
        SubtractionScheme s;
        const std::string left = t.substr(0, bar);
        const std::string right = t.substr(bar + 1);
        std::vector<bool> seen(3, false);
        auto take = [&](char ch) {
            const int m = ch - '1';
            if (m < 0 || m > 2 || seen[m]) throw InvalidArgument("unknown subtraction scheme '" + std::string(tag) + "'");
            seen[m] = true;
            return m;
        };
        for (std::size_t i = 0; i < left.size(); ++i) {
            const int m = take(left[i]);
            if (i + 1 < left.size() && left[i + 1] == 'a') {
                s.subtracted_.push_back(m);
                ++i;
            } else {
                s.traced_.push_back(m);
            }
        }
        for (char ch : right) s.kept_.push_back(take(ch));
        if (s.subtracted_.empty() || s.kept_.empty() || !std::is_sorted(s.kept_.begin(), s.kept_.end())) {
            throw InvalidArgument("unknown subtraction scheme '" + std::string(tag) + "'");
        }
        s.tag_ = canonical(s);
        bool listed = false;
        for (auto known : all_tags()) listed = listed || known == s.tag_;
        if (!listed) throw InvalidArgument("unknown subtraction scheme '" + std::string(tag) + "'");
        return s;
    }

    static const std::vector<std::string_view>& all_tags() {
        static const std::vector<std::string_view> tags = {
            "1a|23", "2a|13", "3a|12", "2a3a|1", "1a3a|2", "1a2a|3", "1a|2",  "1a|3",  "2a|1",
            "2a|3",  "3a|1",  "3a|2",  "1a3|2",  "13a|2",  "2a3|1",  "23a|1", "1a2|3", "12a|3",
        };
        return tags;
    }

    static std::vector<SubtractionScheme> all() {
        std::vector<SubtractionScheme> out;
        for (auto t : all_tags()) out.push_back(parse(t));
        return out;
    }

    const std::string& tag() const noexcept { return tag_; }
    /// Tag with '|' replaced by '_', as accepted on the command line.
    std::string cli_tag() const {
        std::string t = tag_;
        std::replace(t.begin(), t.end(), '|', '_');
        return t;
    }
    const std::vector<int>& subtracted_modes() const noexcept { return subtracted_; }
    const std::vector<int>& kept_modes() const noexcept { return kept_; }
    const std::vector<int>& traced_modes() const noexcept { return traced_; }

    friend bool operator==(const SubtractionScheme& a, const SubtractionScheme& b) { return a.tag_ == b.tag_; }

private:
    static std::string canonical(const SubtractionScheme& s) {
        std::vector<std::pair<int, bool>> left;
        for (int m : s.subtracted_) left.emplace_back(m, true);
        for (int m : s.traced_) left.emplace_back(m, false);
        std::sort(left.begin(), left.end());
        std::string t;
        for (auto [m, sub] : left) {
            t += static_cast<char>('1' + m);
            if (sub) t += 'a';
        }
        t += '|';
        for (int m : s.kept_) t += static_cast<char>('1' + m);
        return t;
    }

    std::string tag_;
    std::vector<int> subtracted_;
    std::vector<int> traced_;
    std::vector<int> kept_;
};

namespace detail {

struct WignerBuilder {
    int n_vars;

    ComplexForm beta(int slot) const {
        return {RealPolynomial::variable(n_vars, 2 * slot), RealPolynomial::variable(n_vars, 2 * slot + 1)};
    }
    RealPolynomial constant(double v) const { return RealPolynomial::constant(n_vars, v); }

    /// Turn a homogeneous quadratic exponent polynomial into its matrix M.
    Matrix matrix_of(const RealPolynomial& q) const {
        Matrix m = Matrix::Zero(n_vars, n_vars);
        for (const auto& [e, c] : q.terms()) {
            std::vector<int> idx;
            for (int i = 0; i < n_vars; ++i) {
                for (int k = 0; k < e[i]; ++k) idx.push_back(i);
            }
            if (idx.size() != 2) throw InvalidArgument("wigner: exponent is not a quadratic form");
            if (idx[0] == idx[1]) {
                m(idx[0], idx[0]) += c;
            } else {
                m(idx[0], idx[1]) += 0.5 * c;
                m(idx[1], idx[0]) += 0.5 * c;
            }
        }
        return m;
    }

    GaussPolyWigner make(double norm, const RealPolynomial& exponent, const RealPolynomial& poly) const {
        return {n_vars / 2, matrix_of(exponent), poly, norm};
    }
};

}  // namespace detail

/// Wigner function of the unreduced C3MSV as a Gaussian.
inline GaussPolyWigner wigner_c3msv_form(const SqueezingConfig& cfg) {
    const detail::WignerBuilder b{6};
    const auto n = mean_photon_numbers(cfg);
    const auto c = cfg.c();
    const auto e1 = cfg.epsilon1();
    const auto e2 = cfg.epsilon2();
    const auto b1 = b.beta(0);
    const auto b2 = b.beta(1);
    const auto b3 = b.beta(2);
    const RealPolynomial q = 2.0 * ((2.0 * n.n1 + 1.0) * b1.abs2() + (2.0 * n.n2 + 1.0) * b2.abs2() +
                                    (2.0 * n.n3 + 1.0) * b3.abs2()) +
                             8.0 * ((c * std::conj(e1)) * (b1 * b2)).re + 8.0 * (std::conj(e1) * e2 * (b1 * b3.conj())).re +
                             8.0 * ((c * std::conj(e2)) * (b2 * b3)).re;
    return b.make(8.0 / (kPi * kPi * kPi), q, b.constant(1.0));
}

/// Point evaluation of the unreduced C3MSV Wigner function.
inline double wigner_c3msv(const SqueezingConfig& cfg, std::complex<double> beta1, std::complex<double> beta2,
                           std::complex<double> beta3) {
    const auto n = mean_photon_numbers(cfg);
    const double c = cfg.c();
    const auto e1 = cfg.epsilon1();
    const auto e2 = cfg.epsilon2();
    const double diag = (2.0 * n.n1 + 1.0) * std::norm(beta1) + (2.0 * n.n2 + 1.0) * std::norm(beta2) +
                        (2.0 * n.n3 + 1.0) * std::norm(beta3);
    const double cross = (c * std::conj(e1) * beta1 * beta2).real() +
                         (std::conj(e1) * e2 * beta1 * std::conj(beta3)).real() +
                         (c * std::conj(e2) * beta2 * beta3).real();
    return 8.0 / (kPi * kPi * kPi) * std::exp(-2.0 * diag - 8.0 * cross);
}

/// Closed-form Wigner function of a subtracted reduced state, over its kept
/// modes in ascending order. The formula is evaluated as published.
inline GaussPolyWigner wigner_closed_form(const SqueezingConfig& cfg, const SubtractionScheme& scheme) {
    const double c = cfg.c();
    const double s = cfg.s();
    const double c2 = c * c;
    const double w0 = cfg.omega0();
    const double w1 = cfg.omega1();
    const double w2 = cfg.omega2();
    const auto e1 = cfg.epsilon1();
    const auto e2 = cfg.epsilon2();
    const double cos2 = std::cos(2.0 * cfg.phi());
    const double cos_sq = std::pow(std::cos(cfg.phi()), 2);
    const double sin_sq = std::pow(std::sin(cfg.phi()), 2);
    const double pi2 = kPi * kPi;
    const std::string& tag = scheme.tag();

    if (scheme.kept_modes().size() == 2) {
        const detail::WignerBuilder b{4};
        const auto x = b.beta(0);  // first kept mode
        const auto y = b.beta(1);  // second kept mode
        if (tag == "1a|23") {
            // x = β2, y = β3
            const RealPolynomial q =
                (2.0 / w2) * (w1 * x.abs2() + w0 * y.abs2() + 4.0 * ((c * std::conj(e2)) * (x * y)).re);
            const auto lin = std::complex<double>(c) * x + e2 * y.conj();
            return b.make(4.0 / (pi2 * std::pow(w2, 3)), q, 4.0 * lin.abs2() - w2);
        }
        if (tag == "2a|13") {
            // x = β1, y = β3
            if (s == 0.0) throw ZeroNormError("wigner_closed_form: mode 2 is in vacuum");
            const RealPolynomial q =
                (2.0 / w0) * (w1 * x.abs2() + w2 * y.abs2() - 4.0 * (std::conj(e1) * e2 * (x * y.conj())).re);
            const auto lin = std::conj(e1) * x + std::conj(e2) * y;
            return b.make(4.0 / (pi2 * s * s * std::pow(w0, 3)), q, 4.0 * c2 * lin.abs2() - w0 * s * s);
        }
        if (tag == "3a|12") {
            // x = β1, y = β2
            const RealPolynomial q =
                (2.0 / w1) * (w2 * y.abs2() + w0 * x.abs2() + 4.0 * ((c * std::conj(e1)) * (x * y)).re);
            const auto lin = std::complex<double>(c) * y + e1 * x.conj();
            return b.make(4.0 / (pi2 * std::pow(w1, 3)), q, 4.0 * lin.abs2() - w1);
        }
        throw InvalidArgument("wigner_closed_form: no closed form for " + tag);
    }

    const detail::WignerBuilder b{2};
    const RealPolynomial u = b.beta(0).abs2();  // |β_kept|²
    auto gaussian = [&](double width) { return (2.0 / width) * u; };
    if (tag == "2a3a|1") {
        const RealPolynomial e = std::norm(e1) * u;
        return b.make(2.0 / (kPi * w0 * std::pow(w2, 5)), gaussian(w2),
                      b.constant(w2 * w2 * w1) + 4.0 * e * (b.constant(4.0 * c2 * c2) + 4.0 * c2 * e - w1 * w1));
    }
    if (tag == "1a3a|2") {
        return b.make(2.0 / (kPi * std::pow(w0, 5)), gaussian(w0),
                      b.constant(w0 * w0) + 8.0 * c2 * c2 * (u * u) - 8.0 * w0 * c2 * u);
    }
    if (tag == "1a2a|3") {
        const RealPolynomial e = std::norm(e2) * u;
        return b.make(2.0 / (kPi * w0 * std::pow(w1, 5)), gaussian(w1),
                      b.constant(w1 * w1 * w2) + 4.0 * e * (b.constant(4.0 * c2 * c2) + 4.0 * c2 * e - w2 * w2));
    }
    if (tag == "1a|2" || tag == "1a3|2" || tag == "3a|2" || tag == "13a|2") {
        return b.make(2.0 / (kPi * std::pow(w0, 3)), gaussian(w0), 4.0 * c2 * u - w0);
    }
    if (tag == "3a|1" || tag == "23a|1") {
        return b.make(2.0 / (kPi * std::pow(w2, 3)), gaussian(w2), 4.0 * std::norm(e1) * u + w2);
    }
    if (tag == "2a|1" || tag == "2a3|1") {
        return b.make(2.0 / (kPi * std::pow(w2, 3)), gaussian(w2), 4.0 * c2 * cos_sq * u - w2 * cos2);
    }
    if (tag == "1a|3" || tag == "1a2|3") {
        return b.make(2.0 / (kPi * std::pow(w1, 3)), gaussian(w1), 4.0 * std::norm(e2) * u + w1);
    }
    if (tag == "2a|3" || tag == "12a|3") {
        return b.make(2.0 / (kPi * std::pow(w1, 3)), gaussian(w1), 4.0 * c2 * sin_sq * u + w1 * cos2);
    }
    throw InvalidArgument("wigner_closed_form: no closed form for " + tag);
}

/// ∫ W over phase space; 1 for a correctly normalized function.
inline QuadratureResult wigner_integral(const GaussPolyWigner& w, const QuadratureSpec& spec = {}) {
    return integrate_gauss_poly(w.quad_form, w.poly, w.norm_const, false, spec);
}

struct NegativityResult {
    double value = 0.0;
    QuadratureResult quadrature;
};

inline NegativityResult negativity(const GaussPolyWigner& w, const QuadratureSpec& spec = {}) {
    NegativityResult out;
    out.quadrature = integrate_gauss_poly(w.quad_form, w.poly, w.norm_const, true, spec);
    out.value = out.quadrature.value - 1.0;
    if (std::abs(out.value) < spec.tol) out.value = 0.0;
    return out;
}

inline NegativityResult negativity(const SqueezingConfig& cfg, const SubtractionScheme& scheme,
                                   const QuadratureSpec& spec = {}) {
    return negativity(wigner_closed_form(cfg, scheme), spec);
}

struct NegativityPoint {
    double parameter = 0.0;
    NegativityResult result;
};

/// 𝒩 along a monotone family of configurations; `parameters` labels each point.
inline std::vector<NegativityPoint> negativity_scan(const std::vector<SqueezingConfig>& configs,
                                                    const std::vector<double>& parameters,
                                                    const SubtractionScheme& scheme, const QuadratureSpec& spec = {}) {
    if (configs.size() != parameters.size()) throw InvalidArgument("negativity_scan: size mismatch");
    const bool up = std::is_sorted(parameters.begin(), parameters.end());
    const bool down = std::is_sorted(parameters.rbegin(), parameters.rend());
    if (!up && !down) throw InvalidArgument("negativity_scan: parameter grid must be monotone");
    std::vector<NegativityPoint> out;
    out.reserve(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i) out.push_back({parameters[i], negativity(configs[i], scheme, spec)});
    return out;
}

}  // namespace c3msv
