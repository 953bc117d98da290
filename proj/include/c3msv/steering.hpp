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

// Gaussian steerability G^{A→B} of bipartitions of the C3MSV.
//
// Two routes are provided and kept independent of each other:
//   * gaussian_steering: Schur complement + symplectic spectrum of any CM;
//   * steering_closed_form / closed_form_nu_bar: the published per-case
//     expressions in (c, s, φ), evaluated literally.
//
// G = max{0, -Σ ln ν̄} where the sum runs over the 2 n_B eigenvalue moduli
// of iΩσ_{B|A} below one, i.e. every symplectic eigenvalue counts twice.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "c3msv/gaussian_core.hpp"

namespace c3msv {

/// Eigenvalues within this distance below one are treated as non-steering.
inline constexpr double kSteeringTolerance = 1e-12;

/// The twelve bipartite assignments of the three modes.
enum class SteeringCase {
    k23to1,
    k13to2,
    k12to3,
    k1to23,
    k2to13,
    k3to12,
    k2to1,
    k1to3,
    k2to3,
    k1to2,
    k3to1,
    k3to2,
};

inline constexpr std::array<SteeringCase, 12> kAllSteeringCases = {
    SteeringCase::k23to1, SteeringCase::k13to2, SteeringCase::k12to3, SteeringCase::k1to23,
    SteeringCase::k2to13, SteeringCase::k3to12, SteeringCase::k2to1,  SteeringCase::k1to3,
    SteeringCase::k2to3,  SteeringCase::k1to2,  SteeringCase::k3to1,  SteeringCase::k3to2,
};

namespace detail {

struct CaseInfo {
    SteeringCase id;
    std::string_view tag;  // "23to1"
    std::vector<int> a;    // 1-based labels
    std::vector<int> b;
};

inline const std::array<CaseInfo, 12>& case_table() {
    static const std::array<CaseInfo, 12> table = {{
        {SteeringCase::k23to1, "23to1", {2, 3}, {1}},
        {SteeringCase::k13to2, "13to2", {1, 3}, {2}},
        {SteeringCase::k12to3, "12to3", {1, 2}, {3}},
        {SteeringCase::k1to23, "1to23", {1}, {2, 3}},
        {SteeringCase::k2to13, "2to13", {2}, {1, 3}},
        {SteeringCase::k3to12, "3to12", {3}, {1, 2}},
        {SteeringCase::k2to1, "2to1", {2}, {1}},
        {SteeringCase::k1to3, "1to3", {1}, {3}},
        {SteeringCase::k2to3, "2to3", {2}, {3}},
        {SteeringCase::k1to2, "1to2", {1}, {2}},
        {SteeringCase::k3to1, "3to1", {3}, {1}},
        {SteeringCase::k3to2, "3to2", {3}, {2}},
    }};
    return table;
}

inline const CaseInfo& case_info(SteeringCase c) { return case_table()[static_cast<std::size_t>(c)]; }

}  // namespace detail

/// Short tag, e.g. "23to1".
inline std::string to_string(SteeringCase c) { return std::string(detail::case_info(c).tag); }

inline Partition partition_of(SteeringCase c) {
    const auto& info = detail::case_info(c);
    return Partition::from_labels(info.a, info.b);
}

/// Parse "23to1", "23->1" or "23→1".
inline SteeringCase parse_steering_case(std::string_view text) {
    std::string norm(text);
    for (const std::string_view arrow : {"->", "\xE2\x86\x92"}) {
        if (auto pos = norm.find(arrow); pos != std::string::npos) norm.replace(pos, arrow.size(), "to");
    }
    for (const auto& info : detail::case_table()) {
        if (info.tag == norm) return info.id;
    }
    throw InvalidArgument("unknown steering case '" + std::string(text) + "'");
}

struct SteeringResult {
    double value = 0.0;
    std::vector<double> nu_bars;  // 2 n_B moduli, ascending
    Partition partition;
    std::optional<SteeringCase> steering_case;
};

/// G from a list of eigenvalue moduli.
inline double steering_from_nu_bars(const std::vector<double>& nu_bars) {
    double sum = 0.0;
    for (double nu : nu_bars) {
        if (nu < 1.0 - kSteeringTolerance) sum -= std::log(nu);
    }
    return std::max(0.0, sum);
}

inline SteeringResult gaussian_steering(const CovarianceMatrix& cm, const Partition& partition) {
    SteeringResult out;
    out.partition = partition;
    out.nu_bars = symplectic_spectrum(schur_complement(cm, partition));
    out.value = steering_from_nu_bars(out.nu_bars);
    return out;
}

inline SteeringResult gaussian_steering(const CovarianceMatrix& cm, SteeringCase c) {
    auto out = gaussian_steering(cm, partition_of(c));
    out.steering_case = c;
    return out;
}

namespace detail {

struct KappaTerms {
    double k0, k1, k2;
};

// ϰ terms for 1→23. The mirrored ι terms for 3→12 are the same expressions
// with cos2φ → -cos2φ and cos²φ → sin²φ.
inline KappaTerms kappa_terms(const SqueezingConfig& cfg, bool mirrored) {
    const double c2 = cfg.c() * cfg.c();
    const double s2 = cfg.s() * cfg.s();
    const double sign = mirrored ? -1.0 : 1.0;
    const double cos2 = sign * std::cos(2.0 * cfg.phi());
    const double cos4 = std::cos(4.0 * cfg.phi());
    const double trig2 = mirrored ? std::pow(std::sin(cfg.phi()), 2) : std::pow(std::cos(cfg.phi()), 2);
    KappaTerms t{};
    t.k0 = 4.0 + 8.0 * s2 * trig2;
    t.k1 = 1.0 + 3.0 * c2 + (3.0 - 2.0 * cos2) * s2;
    t.k2 = (19.0 - 12.0 * cos2) * c2 * s2 + (19.0 - 12.0 * cos2 + 2.0 * cos4) * s2 * s2 + (13.0 - 20.0 * cos2) * s2;
    t.k2 = std::max(0.0, t.k2);
    return t;
}

inline double clamp_log2(double x) { return std::max(0.0, 2.0 * std::log(x)); }

}  // namespace detail

/// Published closed-form ν̄ for each case, duplicated to 2 n_B entries and
/// sorted ascending.
inline std::vector<double> closed_form_nu_bar(const SqueezingConfig& cfg, SteeringCase c) {
    const double w0 = cfg.omega0();
    const double w1 = cfg.omega1();
    const double w2 = cfg.omega2();
    const double s2 = cfg.s() * cfg.s();
    const double cos_sq = std::pow(std::cos(cfg.phi()), 2);
    const double sin_sq = std::pow(std::sin(cfg.phi()), 2);
    auto twice = [](double v) { return std::vector<double>{v, v}; };
    auto two_pairs = [](double lo, double hi) {
        std::vector<double> v{lo, lo, hi, hi};
        std::sort(v.begin(), v.end());
        return v;
    };
    switch (c) {
        case SteeringCase::k23to1: return twice(1.0 / w2);
        case SteeringCase::k13to2: return twice(1.0 / w0);
        case SteeringCase::k12to3: return twice(1.0 / w1);
        case SteeringCase::k1to23:
        case SteeringCase::k3to12: {
            const auto t = detail::kappa_terms(cfg, c == SteeringCase::k3to12);
            return two_pairs((t.k1 - std::sqrt(t.k2)) / t.k0, (t.k1 + std::sqrt(t.k2)) / t.k0);
        }
        case SteeringCase::k2to13: return two_pairs(1.0 / w0, 1.0);
        case SteeringCase::k2to1: return twice(w1 / w0);
        case SteeringCase::k1to3: return twice(w0 / (1.0 + 2.0 * s2 * cos_sq));
        case SteeringCase::k2to3: return twice(w2 / w0);
        case SteeringCase::k1to2: return twice(w1 / (1.0 + 2.0 * s2 * cos_sq));
        case SteeringCase::k3to1: return twice(w0 / (1.0 + 2.0 * s2 * sin_sq));
        case SteeringCase::k3to2: return twice(w2 / (1.0 + 2.0 * s2 * sin_sq));
    }
    throw InvalidArgument("closed_form_nu_bar: unknown case");
}

/// Published closed-form steering value for each case, clamped at zero.
/// Cases 1→3, 1→2, 3→1 and 3→2 are published as identically zero.
inline double steering_closed_form(const SqueezingConfig& cfg, SteeringCase c) {
    const double w0 = cfg.omega0();
    const double w1 = cfg.omega1();
    const double w2 = cfg.omega2();
    switch (c) {
        case SteeringCase::k23to1: return detail::clamp_log2(w2);
        case SteeringCase::k13to2: return detail::clamp_log2(w0);
        case SteeringCase::k12to3: return detail::clamp_log2(w1);
        case SteeringCase::k1to23:
        case SteeringCase::k3to12: {
            const auto t = detail::kappa_terms(cfg, c == SteeringCase::k3to12);
            return detail::clamp_log2(t.k0 / (t.k1 - std::sqrt(t.k2)));
        }
        case SteeringCase::k2to13: return detail::clamp_log2(w0);
        case SteeringCase::k2to1: return detail::clamp_log2(w0 / w1);
        case SteeringCase::k2to3: return detail::clamp_log2(w0 / w2);
        case SteeringCase::k1to3:
        case SteeringCase::k1to2:
        case SteeringCase::k3to1:
        case SteeringCase::k3to2: return 0.0;
    }
    throw InvalidArgument("steering_closed_form: unknown case");
}

/// All twelve cases through the generic pipeline, in kAllSteeringCases order.
inline std::vector<SteeringResult> steering_table(const SqueezingConfig& cfg) {
    const auto cm = c3msv_covariance(cfg);
    std::vector<SteeringResult> out;
    out.reserve(kAllSteeringCases.size());
    for (auto c : kAllSteeringCases) out.push_back(gaussian_steering(cm, c));
    return out;
}

struct SteeringComparison {
    SteeringCase steering_case;
    double generic = 0.0;
    double closed_form = 0.0;
    double abs_diff() const { return std::abs(generic - closed_form); }
};

/// Generic pipeline next to the closed form for all twelve cases.
inline std::vector<SteeringComparison> steering_cross_check(const SqueezingConfig& cfg) {
    const auto table = steering_table(cfg);
    std::vector<SteeringComparison> out;
    out.reserve(table.size());
    for (const auto& row : table) {
        const auto c = *row.steering_case;
        out.push_back({c, row.value, steering_closed_form(cfg, c)});
    }
    return out;
}

/// The six monogamy deficits. Index i (0-based mode) with cycle ⟨i, j, k⟩:
///   into[i] = G^{(jk)→i} - G^{j→i} - G^{k→i}
///   from[i] = G^{i→(jk)} - G^{i→j} - G^{i→k}
struct MonogamyDeficits {
    std::array<double, 3> into{};
    std::array<double, 3> from{};

    double min() const {
        return std::min(*std::min_element(into.begin(), into.end()), *std::min_element(from.begin(), from.end()));
    }
};

inline MonogamyDeficits monogamy_deficits(const CovarianceMatrix& cm) {
    MonogamyDeficits d;
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        const int k = (i + 2) % 3;
        auto g = [&](std::vector<int> a, std::vector<int> b) {
            return gaussian_steering(cm, Partition(std::move(a), std::move(b))).value;
        };
        d.into[i] = g({j, k}, {i}) - g({j}, {i}) - g({k}, {i});
        d.from[i] = g({i}, {j, k}) - g({i}, {j}) - g({i}, {k});
    }
    return d;
}

inline MonogamyDeficits monogamy_deficits(const SqueezingConfig& cfg) {
    return monogamy_deficits(c3msv_covariance(cfg));
}

struct RgsResult {
    double value = 0.0;
    /// Cycle ⟨i, j, k⟩ (0-based) attaining the minimum.
    std::array<int, 3> argmin_permutation{0, 1, 2};
    /// True when the minimum comes from the G^{i→(jk)} family.
    bool argmin_from_family = false;
    MonogamyDeficits all_deficits;
    double into_branch = 0.0;  // min over the G^{(jk)→i} family
    double from_branch = 0.0;  // min over the G^{i→(jk)} family
    double branch_gap() const { return std::abs(into_branch - from_branch); }
};

/// Residual Gaussian steering: the minimum monogamy deficit over cycles.
/// Both deficit families are evaluated and kept; they agree for the C3MSV.
inline RgsResult residual_gaussian_steering(const SqueezingConfig& cfg) {
    RgsResult out;
    out.all_deficits = monogamy_deficits(cfg);
    const auto& d = out.all_deficits;
    const auto into_it = std::min_element(d.into.begin(), d.into.end());
    const auto from_it = std::min_element(d.from.begin(), d.from.end());
    out.into_branch = *into_it;
    out.from_branch = *from_it;
    const bool from_wins = *from_it < *into_it;
    const int i = static_cast<int>(from_wins ? from_it - d.from.begin() : into_it - d.into.begin());
    out.argmin_permutation = {i, (i + 1) % 3, (i + 2) % 3};
    out.argmin_from_family = from_wins;
    out.value = std::max(0.0, std::min(out.into_branch, out.from_branch));
    return out;
}

}  // namespace c3msv
