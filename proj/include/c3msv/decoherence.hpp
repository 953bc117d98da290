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

// Evolution of the C3MSV through three independent thermal-loss channels,
// and the time at which a steering quantity first reaches zero.
//
// Second moments obey, per mode j with rate γ_j and bath occupation n_Rj,
//   <a_j† a_j>(t) = e^{-2γ_j t} <a_j† a_j>(0) + (1 - e^{-2γ_j t}) n_Rj
//   <a_j a_k>(t)  = e^{-(γ_j + γ_k) t} <a_j a_k>(0)            (j ≠ k)
// which fixes the covariance matrix at time t.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "c3msv/gaussian_core.hpp"
#include "c3msv/steering.hpp"

namespace c3msv {

struct ChannelParams {
    std::array<double, 3> gamma{0.0, 0.0, 0.0};
    std::array<double, 3> n_r{0.0, 0.0, 0.0};

    ChannelParams() = default;
    ChannelParams(std::array<double, 3> g, std::array<double, 3> n) : gamma(g), n_r(n) { validate(); }

    /// Same rate and bath occupation on every mode.
    static ChannelParams uniform(double g, double n) { return ChannelParams({g, g, g}, {n, n, n}); }

    double max_gamma() const { return *std::max_element(gamma.begin(), gamma.end()); }

    void validate() const {
        for (int j = 0; j < 3; ++j) {
            if (!std::isfinite(gamma[j]) || gamma[j] < 0.0) throw InvalidArgument("loss rates must be finite and >= 0");
            if (!std::isfinite(n_r[j]) || n_r[j] < 0.0) {
                throw InvalidArgument("reservoir occupations must be finite and >= 0");
            }
        }
    }
};

/// Which diagonal law to use.
///   MomentLaw: 1 + 2 n̄_j e^{-2γt} + 2 n_R (1 - e^{-2γt}), from the moment equations.
///   PrintedEq: 1 + 2 n̄_j + 2 n_R (1 - e^{-2γt}), the alternative diagonal law (no decay of the initial occupation).
enum class DecoherenceVariant { MomentLaw, PrintedEq };

inline std::string to_string(DecoherenceVariant v) {
    return v == DecoherenceVariant::MomentLaw ? "moment-law" : "printed-eq";
}

/// Apply the damping laws to an arbitrary 3-mode CM. Used directly for the
/// semigroup check; evolve_cm builds on it.
inline CovarianceMatrix evolve_moments(const CovarianceMatrix& v0, const ChannelParams& ch, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("evolution time must be finite and >= 0");
    if (v0.n_modes() != 3) throw InvalidArgument("evolve_moments expects a three-mode CM");
    ch.validate();
    Matrix v = v0.entries();
    for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
            const double damp = std::exp(-(ch.gamma[j] + ch.gamma[k]) * t);
            v.block<2, 2>(2 * j, 2 * k) *= damp;
        }
        const double heat = (1.0 - std::exp(-2.0 * ch.gamma[j] * t)) * (1.0 + 2.0 * ch.n_r[j]);
        v.block<2, 2>(2 * j, 2 * j) += heat * Eigen::Matrix2d::Identity();
    }
    return CovarianceMatrix(std::move(v));
}

inline CovarianceMatrix evolve_cm(const SqueezingConfig& cfg, const ChannelParams& ch, double t,
                                  DecoherenceVariant variant = DecoherenceVariant::MomentLaw) {
    if (variant == DecoherenceVariant::MomentLaw) return evolve_moments(c3msv_covariance(cfg), ch, t);

    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("evolution time must be finite and >= 0");
    ch.validate();
    const auto n = mean_photon_numbers(cfg);
    const std::array<double, 3> nbar{n.n1, n.n2, n.n3};
    std::array<double, 3> diag{};
    for (int j = 0; j < 3; ++j) {
        diag[j] = 1.0 + 2.0 * nbar[j] + 2.0 * ch.n_r[j] * (1.0 - std::exp(-2.0 * ch.gamma[j] * t));
    }
    const double s = cfg.s();
    const double c = cfg.c();
    const auto& g = ch.gamma;
    return assemble_c3msv_like(cfg, diag, -2.0 * s * c * std::exp(-(g[0] + g[1]) * t) * std::cos(cfg.phi()),
                               -2.0 * s * c * std::exp(-(g[1] + g[2]) * t) * std::sin(cfg.phi()),
                               s * s * std::exp(-(g[0] + g[2]) * t) * std::sin(2.0 * cfg.phi()));
}

struct SteeringTrajectory {
    std::vector<double> times;
    std::vector<double> values;
    SteeringCase steering_case = SteeringCase::k23to1;
    ChannelParams channel;
};

inline SteeringTrajectory steering_vs_time(const SqueezingConfig& cfg, const ChannelParams& ch, SteeringCase c,
                                           const std::vector<double>& times,
                                           DecoherenceVariant variant = DecoherenceVariant::MomentLaw) {
    if (!std::is_sorted(times.begin(), times.end())) throw InvalidArgument("time grid must be ascending");
    SteeringTrajectory out;
    out.times = times;
    out.steering_case = c;
    out.channel = ch;
    out.values.reserve(times.size());
    for (double t : times) out.values.push_back(gaussian_steering(evolve_cm(cfg, ch, t, variant), c).value);
    return out;
}

namespace detail {

// Smallest eigenvalue modulus of iΩσ_{B|A} minus one. Steering is zero
// exactly when this is nonnegative, and unlike G it changes sign.
inline double steering_margin(const SqueezingConfig& cfg, const ChannelParams& ch, SteeringCase c, double t,
                              DecoherenceVariant variant) {
    const auto r = gaussian_steering(evolve_cm(cfg, ch, t, variant), c);
    return r.nu_bars.front() - 1.0;
}

}  // namespace detail

/// First time steering vanishes. Returns 0 if there is no steering at t=0,
/// and nullopt if it survives to 10^4 / γ_max (or if every γ is zero).
inline std::optional<double> sudden_death_time(const SqueezingConfig& cfg, const ChannelParams& ch, SteeringCase c,
                                               double tol = 1e-8,
                                               DecoherenceVariant variant = DecoherenceVariant::MomentLaw,
                                               double initial_bracket = 0.0) {
    if (!(tol > 0.0)) throw InvalidArgument("sudden_death_time: tol must be > 0");
    ch.validate();
    auto margin = [&](double t) { return detail::steering_margin(cfg, ch, c, t, variant); };
    if (margin(0.0) >= -kSteeringTolerance) return 0.0;
    const double gmax = ch.max_gamma();
    if (gmax <= 0.0) return std::nullopt;

    const double cap = 1e4 / gmax;
    double hi = initial_bracket > 0.0 ? initial_bracket : 1.0 / gmax;
    double lo = 0.0;
    while (margin(hi) < -kSteeringTolerance) {
        lo = hi;
        hi *= 2.0;
        if (hi > cap) return std::nullopt;
    }
    // Keep lo inside the steerable region so the bracket does not depend on
    // the initial guess beyond tol.
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (margin(mid) < -kSteeringTolerance) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

}  // namespace c3msv
