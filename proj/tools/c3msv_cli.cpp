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

// c3msv: command-line front end. Every subcommand evaluates a parameter grid
// and writes one CSV record (or JSON object) per grid point.
//
// Exit codes: 0 ok, 1 selftest failure, 2 bad configuration, 3 numeric
// failure, 4 quadrature non-convergence, 5 cross-check mismatch.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "c3msv/acceptance.hpp"
#include "c3msv/c3msv.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace c3msv;

constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kSelftestFailed = 1, kConfig = 2, kNumeric = 3, kNoConvergence = 4, kMismatch = 5 };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Run configuration

struct RunConfig {
    std::vector<double> nbar;
    std::string nbar_grid;
    std::vector<double> r;
    std::vector<double> phi;
    std::string phi_grid;
    std::vector<std::string> phi_frac;
    double theta1 = 0.0;
    double theta2 = 0.0;

    std::vector<std::string> cases;
    bool all_cases = false;
    bool rgs = false;

    std::vector<double> nr;
    double gamma = 1.0;
    std::string t_grid = "0:1:101";
    bool sudden_death = false;
    std::string variant = "moment-law";

    std::vector<std::string> schemes;
    bool all_schemes = false;
    bool oracle = false;
    int cutoff = 0;
    double tol = 1e-5;
    double oracle_tol = 2e-3;
    int points = 96;
    double half_width = 6.0;

    bool c3msv = false;
    std::vector<int> modes;
    int grid = 64;
    double range = 4.0;

    std::vector<std::string> specs;
    std::vector<int> criteria;

    std::string out;
    std::string format = "csv";
    std::string config;
    int threads = 0;
};

std::vector<double> parse_grid(const std::string& text, const char* what) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ConfigError(std::string(what) + ": expected a:b:n, got '" + text + "'");
    double a = 0.0, b = 0.0;
    long n = 0;
    try {
        a = std::stod(parts[0]);
        b = std::stod(parts[1]);
        n = std::stol(parts[2]);
    } catch (const std::exception&) {
        throw ConfigError(std::string(what) + ": cannot parse '" + text + "'");
    }
    if (n < 1 || !std::isfinite(a) || !std::isfinite(b)) throw ConfigError(std::string(what) + ": bad grid '" + text + "'");
    std::vector<double> out;
    for (long i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    return out;
}

double parse_frac(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return std::stod(text) * kPi;
        const double k = std::stod(text.substr(0, slash));
        const double n = std::stod(text.substr(slash + 1));
        if (n == 0.0) throw ConfigError("--phi-frac: zero denominator");
        return k * kPi / n;
    } catch (const std::invalid_argument&) {
        throw ConfigError("--phi-frac: cannot parse '" + text + "'");
    }
}

template <typename T>
void assign(const json& j, const char* key, T& dst) {
    if (!j.contains(key)) return;
    try {
        dst = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

// Scalars are accepted wherever a list is expected.
template <typename T>
void assign_list(const json& j, const char* key, std::vector<T>& dst) {
    if (!j.contains(key)) return;
    try {
        const auto& v = j.at(key);
        dst = v.is_array() ? v.get<std::vector<T>>() : std::vector<T>{v.get<T>()};
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

/// Values in the config file override command-line flags.
void apply_config_file(RunConfig& rc) {
    if (rc.config.empty()) return;
    std::ifstream in(rc.config);
    if (!in) throw ConfigError("cannot open config file '" + rc.config + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file: " + std::string(e.what()));
    }
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    static const std::vector<std::string> known = {
        "nbar", "nbar_grid", "r", "phi", "phi_grid", "phi_frac", "theta1", "theta2", "case", "all_cases", "rgs",
        "nr", "gamma", "t_grid", "sudden_death", "variant", "scheme", "all_schemes", "oracle", "cutoff", "tol",
        "oracle_tol", "points", "half_width", "c3msv", "modes", "grid", "range", "spec", "criterion", "out",
        "format", "threads"};
    for (const auto& [k, v] : j.items()) {
        if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError("unknown config key '" + k + "'");
    }
    assign_list(j, "nbar", rc.nbar);
    assign(j, "nbar_grid", rc.nbar_grid);
    assign_list(j, "r", rc.r);
    assign_list(j, "phi", rc.phi);
    assign(j, "phi_grid", rc.phi_grid);
    assign_list(j, "phi_frac", rc.phi_frac);
    assign(j, "theta1", rc.theta1);
    assign(j, "theta2", rc.theta2);
    assign_list(j, "case", rc.cases);
    assign(j, "all_cases", rc.all_cases);
    assign(j, "rgs", rc.rgs);
    assign_list(j, "nr", rc.nr);
    assign(j, "gamma", rc.gamma);
    assign(j, "t_grid", rc.t_grid);
    assign(j, "sudden_death", rc.sudden_death);
    assign(j, "variant", rc.variant);
    assign_list(j, "scheme", rc.schemes);
    assign(j, "all_schemes", rc.all_schemes);
    assign(j, "oracle", rc.oracle);
    assign(j, "cutoff", rc.cutoff);
    assign(j, "tol", rc.tol);
    assign(j, "oracle_tol", rc.oracle_tol);
    assign(j, "points", rc.points);
    assign(j, "half_width", rc.half_width);
    assign(j, "c3msv", rc.c3msv);
    assign_list(j, "modes", rc.modes);
    assign(j, "grid", rc.grid);
    assign(j, "range", rc.range);
    assign_list(j, "spec", rc.specs);
    assign_list(j, "criterion", rc.criteria);
    assign(j, "out", rc.out);
    assign(j, "format", rc.format);
    assign(j, "threads", rc.threads);
}

json config_echo(const RunConfig& rc) {
    json j;
    j["nbar"] = rc.nbar;
    j["nbar_grid"] = rc.nbar_grid;
    j["r"] = rc.r;
    j["phi"] = rc.phi;
    j["phi_grid"] = rc.phi_grid;
    j["phi_frac"] = rc.phi_frac;
    j["theta1"] = rc.theta1;
    j["theta2"] = rc.theta2;
    return j;
}

struct GridPoint {
    double nbar_t = 0.0;
    SqueezingConfig cfg;
};

/// n̄_T (or r) × φ, in that nesting order. Defaults: n̄_T = 3, φ = π/8.
std::vector<GridPoint> parameter_grid(const RunConfig& rc) {
    const bool by_nbar = !rc.nbar.empty() || !rc.nbar_grid.empty();
    if (by_nbar && !rc.r.empty()) throw ConfigError("--nbar and --r are mutually exclusive");
    std::vector<double> sizes = rc.nbar;
    if (!rc.nbar_grid.empty()) {
        const auto g = parse_grid(rc.nbar_grid, "--nbar-grid");
        sizes.insert(sizes.end(), g.begin(), g.end());
    }
    if (!rc.r.empty()) sizes = rc.r;
    if (sizes.empty()) sizes = {3.0};

    std::vector<double> phis = rc.phi;
    if (!rc.phi_grid.empty()) {
        const auto g = parse_grid(rc.phi_grid, "--phi-grid");
        phis.insert(phis.end(), g.begin(), g.end());
    }
    for (const auto& f : rc.phi_frac) phis.push_back(parse_frac(f));
    if (phis.empty()) phis = {kPi / 8};

    std::vector<GridPoint> out;
    try {
        for (double size : sizes) {
            for (double phi : phis) {
                auto cfg = rc.r.empty() ? SqueezingConfig::from_total_photons(size, phi, rc.theta1, rc.theta2)
                                        : SqueezingConfig(size, phi, rc.theta1, rc.theta2);
                out.push_back({cfg.total_photons(), cfg});
            }
        }
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    return out;
}

QuadratureSpec quadrature_spec(const RunConfig& rc) {
    QuadratureSpec q;
    q.tol = rc.tol;
    q.points_per_dim = rc.points;
    q.half_width = rc.half_width;
    try {
        q.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    return q;
}

// ---------------------------------------------------------------------------
// Tables

using Cell = std::variant<double, long long, std::string>;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string format_6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + '"';
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    json meta = json::object();
};

struct Status {
    int code = kOk;
    std::string message;
};

void write_table(const Table& t, const RunConfig& rc, const Status& status, const std::string& command) {
    std::ofstream file;
    if (!rc.out.empty()) {
        file.open(rc.out, std::ios::binary);
        if (!file) throw ConfigError("cannot open output file '" + rc.out + "'");
    }
    std::ostream& os = rc.out.empty() ? std::cout : file;
    if (rc.format == "csv") {
        for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
        os << "\r\n";
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) os << ',';
                std::visit(
                    [&](const auto& v) {
                        using V = std::decay_t<decltype(v)>;
                        if constexpr (std::is_same_v<V, double>) {
                            os << format_double(v);
                        } else if constexpr (std::is_same_v<V, long long>) {
                            os << v;
                        } else {
                            os << csv_field(v);
                        }
                    },
                    row[i]);
            }
            os << "\r\n";
        }
    } else {
        json doc;
        json meta = t.meta;
        meta["version"] = kVersion;
        meta["command"] = command;
        doc["meta"] = meta;
        json rows = json::array();
        for (const auto& row : t.rows) {
            json obj = json::object();
            for (std::size_t i = 0; i < row.size(); ++i) {
                std::visit(
                    [&](const auto& v) {
                        using V = std::decay_t<decltype(v)>;
                        if constexpr (std::is_same_v<V, double>) {
                            // Round through the fixed text format so output is reproducible.
                            obj[t.columns[i]] = std::isfinite(v) ? json(std::stod(format_double(v))) : json(nullptr);
                        } else {
                            obj[t.columns[i]] = v;
                        }
                    },
                    row[i]);
            }
            rows.push_back(std::move(obj));
        }
        doc["rows"] = std::move(rows);
        doc["status"] = {{"exit_code", status.code}, {"message", status.message}, {"complete", status.code == kOk || status.code == kMismatch}};
        os << doc.dump(2) << '\n';
    }
    os.flush();
}

int exit_code_of(const std::exception_ptr& e, std::string& message) {
    try {
        std::rethrow_exception(e);
    } catch (const ConfigError& x) {
        message = x.what();
        return kConfig;
    } catch (const InvalidArgument& x) {
        message = x.what();
        return kConfig;
    } catch (const ConvergenceError& x) {
        message = x.what();
        return kNoConvergence;
    } catch (const std::exception& x) {
        message = x.what();
        return kNumeric;
    }
}

/// Evaluate fn(i) for i < n on a worker pool. Results keep grid order; the
/// first failing index (in grid order) stops output there.
template <typename R, typename F>
std::pair<std::vector<R>, std::optional<std::pair<std::size_t, std::exception_ptr>>> run_pool(std::size_t n, int threads,
                                                                                              F&& fn) {
    std::vector<std::optional<R>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    unsigned hw = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
    hw = std::min<unsigned>(hw, static_cast<unsigned>(std::max<std::size_t>(n, 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < hw; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<R> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i]) return {std::move(out), std::make_pair(i, errors[i])};
        out.push_back(std::move(*slots[i]));
    }
    return {std::move(out), std::nullopt};
}

std::vector<SteeringCase> selected_cases(const RunConfig& rc, std::vector<SteeringCase> fallback) {
    if (rc.all_cases) return {kAllSteeringCases.begin(), kAllSteeringCases.end()};
    if (rc.cases.empty()) return fallback;
    std::vector<SteeringCase> out;
    try {
        for (const auto& c : rc.cases) out.push_back(parse_steering_case(c));
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    return out;
}

std::vector<SubtractionScheme> selected_schemes(const RunConfig& rc) {
    if (rc.all_schemes) return SubtractionScheme::all();
    if (rc.schemes.empty()) throw ConfigError("--scheme is required (or --all-schemes)");
    std::vector<SubtractionScheme> out;
    try {
        for (const auto& s : rc.schemes) out.push_back(SubtractionScheme::parse(s));
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    return out;
}

std::vector<Cell> point_cells(const GridPoint& g) {
    return {g.nbar_t, g.cfg.r(), g.cfg.phi(), g.cfg.theta1(), g.cfg.theta2()};
}

const std::vector<std::string> kPointColumns = {"nbar_T", "r", "phi", "theta1", "theta2"};

// ---------------------------------------------------------------------------
// Subcommands. Each fills the table and returns the exit status.

Status cmd_steering(const RunConfig& rc, Table& t) {
    const auto grid = parameter_grid(rc);
    const auto cases = selected_cases(rc, {kAllSteeringCases.begin(), kAllSteeringCases.end()});
    t.columns = kPointColumns;
    for (const char* c : {"case", "G_generic", "G_closed_form", "abs_diff"}) t.columns.emplace_back(c);

    auto [rows, err] = run_pool<std::vector<std::vector<Cell>>>(grid.size(), rc.threads, [&](std::size_t i) {
        const auto cm = c3msv_covariance(grid[i].cfg);
        std::vector<std::vector<Cell>> out;
        for (auto c : cases) {
            const double g = gaussian_steering(cm, c).value;
            const double cf = steering_closed_form(grid[i].cfg, c);
            auto row = point_cells(grid[i]);
            row.insert(row.end(), {to_string(c), g, cf, std::abs(g - cf)});
            out.push_back(std::move(row));
        }
        return out;
    });
    double worst = 0.0;
    for (auto& block : rows) {
        for (auto& row : block) {
            worst = std::max(worst, std::get<double>(row.back()));
            t.rows.push_back(std::move(row));
        }
    }
    t.meta["max_abs_diff"] = worst;
    Status st;
    if (err) {
        st.code = exit_code_of(err->second, st.message);
    } else if (worst > 1e-9) {
        st.code = kMismatch;
        st.message = "closed form and generic pipeline differ by " + format_double(worst);
    }
    return st;
}

Status cmd_rgs(const RunConfig& rc, Table& t) {
    const auto grid = parameter_grid(rc);
    t.columns = kPointColumns;
    for (const char* c : {"rgs", "into_branch", "from_branch", "argmin_cycle", "argmin_family", "deficit_23to1",
                          "deficit_13to2", "deficit_12to3", "deficit_1to23", "deficit_2to13", "deficit_3to12"}) {
        t.columns.emplace_back(c);
    }
    auto [rows, err] = run_pool<std::vector<Cell>>(grid.size(), rc.threads, [&](std::size_t i) {
        const auto r = residual_gaussian_steering(grid[i].cfg);
        auto row = point_cells(grid[i]);
        std::string cycle;
        for (int m : r.argmin_permutation) cycle += static_cast<char>('1' + m);
        row.insert(row.end(), {r.value, r.into_branch, r.from_branch, cycle,
                               std::string(r.argmin_from_family ? "from" : "into")});
        // into[i] is (jk)->i with i the 0-based mode; reorder to 23to1, 13to2, 12to3.
        for (int m = 0; m < 3; ++m) row.push_back(r.all_deficits.into[m]);
        for (int m = 0; m < 3; ++m) row.push_back(r.all_deficits.from[m]);
        return row;
    });
    t.rows = std::move(rows);
    Status st;
    if (err) st.code = exit_code_of(err->second, st.message);
    return st;
}

DecoherenceVariant parse_variant(const std::string& v) {
    if (v == "moment-law") return DecoherenceVariant::MomentLaw;
    if (v == "printed-eq") return DecoherenceVariant::PrintedEq;
    throw ConfigError("--variant must be moment-law or printed-eq");
}

Status cmd_decoherence(const RunConfig& rc, Table& t) {
    const auto grid = parameter_grid(rc);
    const auto cases = selected_cases(rc, {SteeringCase::k23to1});
    const auto variant = parse_variant(rc.variant);
    const std::vector<double> nrs = rc.nr.empty() ? std::vector<double>{0.0} : rc.nr;
    if (!std::isfinite(rc.gamma) || rc.gamma < 0.0) throw ConfigError("--gamma must be finite and >= 0");
    for (double n : nrs) {
        if (!std::isfinite(n) || n < 0.0) throw ConfigError("--nr must be finite and >= 0");
    }
    t.meta["variant"] = to_string(variant);

    struct Job {
        const GridPoint* point;
        double nr;
        SteeringCase c;
    };
    std::vector<Job> jobs;
    for (const auto& g : grid)
        for (double n : nrs)
            for (auto c : cases) jobs.push_back({&g, n, c});

    t.columns = {"nbar_T", "phi", "gamma", "n_R", "case"};
    if (rc.sudden_death) {
        for (const char* c : {"variant", "gamma_t_star", "death"}) t.columns.emplace_back(c);
        auto [rows, err] = run_pool<std::vector<Cell>>(jobs.size(), rc.threads, [&](std::size_t i) {
            const auto& j = jobs[i];
            const auto ch = ChannelParams::uniform(rc.gamma, j.nr);
            const auto ts = sudden_death_time(j.point->cfg, ch, j.c, 1e-10, variant);
            std::vector<Cell> row{j.point->nbar_t, j.point->cfg.phi(), rc.gamma, j.nr, to_string(j.c), to_string(variant)};
            if (ts) {
                row.emplace_back(format_6(rc.gamma * *ts));
                row.emplace_back(std::string(*ts == 0.0 ? "no-steering" : "death"));
            } else {
                row.emplace_back(std::string(""));
                row.emplace_back(std::string("no-death"));
            }
            return row;
        });
        t.rows = std::move(rows);
        Status st;
        if (err) st.code = exit_code_of(err->second, st.message);
        return st;
    }

    const auto times = parse_grid(rc.t_grid, "--t-grid");
    if (!std::is_sorted(times.begin(), times.end()) || times.front() < 0.0) {
        throw ConfigError("--t-grid must be ascending and start at t >= 0");
    }
    for (const char* c : {"t", "gamma_t", "G"}) t.columns.emplace_back(c);
    auto [rows, err] = run_pool<std::vector<std::vector<Cell>>>(jobs.size(), rc.threads, [&](std::size_t i) {
        const auto& j = jobs[i];
        const auto traj = steering_vs_time(j.point->cfg, ChannelParams::uniform(rc.gamma, j.nr), j.c, times, variant);
        std::vector<std::vector<Cell>> out;
        for (std::size_t k = 0; k < times.size(); ++k) {
            out.push_back({j.point->nbar_t, j.point->cfg.phi(), rc.gamma, j.nr, to_string(j.c), times[k],
                           rc.gamma * times[k], traj.values[k]});
        }
        return out;
    });
    for (auto& block : rows)
        for (auto& row : block) t.rows.push_back(std::move(row));
    Status st;
    if (err) st.code = exit_code_of(err->second, st.message);
    return st;
}

Status cmd_negativity(const RunConfig& rc, Table& t) {
    const auto grid = parameter_grid(rc);
    const auto schemes = selected_schemes(rc);
    const auto quad = quadrature_spec(rc);
    if (rc.cutoff < 0 || rc.cutoff > kMaxCutoff) throw ConfigError("--cutoff out of range");
    t.columns = kPointColumns;
    for (const char* c : {"scheme", "N_analytic", "refinements", "last_delta"}) t.columns.emplace_back(c);
    if (rc.oracle) {
        for (const char* c : {"N_oracle", "oracle_cutoff", "oracle_points", "oracle_delta", "abs_diff"}) t.columns.emplace_back(c);
    }
    t.meta["quadrature"] = {{"half_width", quad.half_width}, {"points_per_dim", quad.points_per_dim}, {"tol", quad.tol}};

    struct Job {
        const GridPoint* point;
        const SubtractionScheme* scheme;
    };
    std::vector<Job> jobs;
    for (const auto& g : grid)
        for (const auto& s : schemes) jobs.push_back({&g, &s});

    auto [rows, err] = run_pool<std::vector<Cell>>(jobs.size(), rc.threads, [&](std::size_t i) {
        const auto& j = jobs[i];
        const auto n = negativity(j.point->cfg, *j.scheme, quad);
        auto row = point_cells(*j.point);
        row.insert(row.end(), {j.scheme->tag(), n.value, static_cast<long long>(n.quadrature.refinements),
                               n.quadrature.last_delta});
        if (rc.oracle) {
            const auto psi = build_c3msv_fock(j.point->cfg, rc.cutoff);
            const auto o = negativity_oracle(subtract_and_reduce(psi, *j.scheme).rho);
            row.insert(row.end(), {o.value, static_cast<long long>(psi.cutoff()), static_cast<long long>(o.points),
                                   o.last_delta, std::abs(o.value - n.value)});
        }
        return row;
    });
    double worst = 0.0;
    if (rc.oracle) {
        for (const auto& row : rows) worst = std::max(worst, std::get<double>(row.back()));
        t.meta["max_abs_diff"] = worst;
    }
    t.rows = std::move(rows);
    Status st;
    if (err) {
        st.code = exit_code_of(err->second, st.message);
    } else if (worst > rc.oracle_tol) {
        st.code = kMismatch;
        st.message = "Fock oracle and analytic negativity differ by " + format_double(worst);
    }
    return st;
}

Status cmd_wigner(const RunConfig& rc, Table& t) {
    const auto grid = parameter_grid(rc);
    if (grid.size() != 1) throw ConfigError("wigner takes a single (nbar or r, phi) point");
    const auto& cfg = grid.front().cfg;
    if (rc.grid < 1 || !(rc.range > 0.0)) throw ConfigError("--grid must be >= 1 and --range > 0");
    const auto axis = parse_grid(format_double(-rc.range) + ":" + format_double(rc.range) + ":" + std::to_string(rc.grid), "--grid");

    // Either a closed form for a subtraction scheme or a Gaussian marginal of
    // the unsubtracted state. Variables are (Re β_j, Im β_j) per kept mode.
    std::function<double(const std::vector<double>&)> w;
    std::optional<SubtractionScheme> scheme;
    std::vector<int> labels;
    if (rc.c3msv) {
        if (!rc.schemes.empty()) throw ConfigError("--c3msv and --scheme are mutually exclusive");
        std::vector<int> modes = rc.modes.empty() ? std::vector<int>{1, 2, 3} : rc.modes;
        std::sort(modes.begin(), modes.end());
        if (std::adjacent_find(modes.begin(), modes.end()) != modes.end() || modes.front() < 1 || modes.back() > 3) {
            throw ConfigError("--modes must be distinct labels in 1..3");
        }
        labels = modes;
        if (modes.size() == 3) {
            const auto form = wigner_c3msv_form(cfg);
            w = [form](const std::vector<double>& u) { return form.at(u); };
        } else {
            std::vector<int> zero_based;
            for (int m : modes) zero_based.push_back(m - 1);
            const Matrix v = sub_cm(c3msv_covariance(cfg), zero_based).entries();
            const Matrix vinv = v.inverse();
            const double norm = std::pow(2.0 / kPi, static_cast<double>(modes.size())) / std::sqrt(v.determinant());
            // W(u) = (2/π)^n det(V)^{-1/2} exp(-2 uᵀ V⁻¹ u), u the real β coordinates.
            w = [vinv, norm](const std::vector<double>& u) {
                const Eigen::Map<const Eigen::VectorXd> x(u.data(), static_cast<Eigen::Index>(u.size()));
                return norm * std::exp(-2.0 * x.dot(vinv * x));
            };
        }
    } else {
        const auto schemes = selected_schemes(rc);
        if (schemes.size() != 1) throw ConfigError("wigner takes exactly one --scheme");
        scheme = schemes.front();
        const auto form = wigner_closed_form(cfg, *scheme);
        w = [form](const std::vector<double>& u) { return form.at(u); };
        for (int m : scheme->kept_modes()) labels.push_back(m + 1);
    }
    for (int m : labels) {
        t.columns.push_back("re_beta" + std::to_string(m));
        t.columns.push_back("im_beta" + std::to_string(m));
    }
    t.columns.emplace_back("W");

    const std::size_t dims = 2 * labels.size();
    std::size_t total = 1;
    for (std::size_t d = 0; d < dims; ++d) total *= axis.size();
    if (total > 50'000'000) throw ConfigError("wigner grid too large; reduce --grid");

    std::optional<DensityMatrix> rho;
    if (rc.oracle) {
        if (!scheme) throw ConfigError("--oracle needs --scheme");
        rho = subtract_and_reduce(build_c3msv_fock(cfg, rc.cutoff), *scheme).rho;
        t.columns.emplace_back("W_oracle");
    }
    double lo = 1e300, hi = -1e300, worst = 0.0;
    std::vector<double> u(dims);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (std::size_t d = dims; d-- > 0;) {
            u[d] = axis[rest % axis.size()];
            rest /= axis.size();
        }
        std::vector<Cell> row(u.begin(), u.end());
        const double val = w(u);
        lo = std::min(lo, val);
        hi = std::max(hi, val);
        row.emplace_back(val);
        if (rho) {
            std::vector<Complex> beta;
            for (std::size_t d = 0; d < dims; d += 2) beta.emplace_back(u[d], u[d + 1]);
            const double wo = wigner_from_density(*rho, {beta}).front();
            worst = std::max(worst, std::abs(wo - val));
            row.emplace_back(wo);
        }
        t.rows.push_back(std::move(row));
    }
    t.meta["min_W"] = lo;
    t.meta["max_W"] = hi;
    Status st;
    if (rho) {
        t.meta["max_abs_diff"] = worst;
        if (worst > 1e-5) {
            st.code = kMismatch;
            st.message = "Fock oracle and closed-form W differ by " + format_double(worst);
        }
    }
    return st;
}

MomentSpec parse_moment_spec(const std::string& text) {
    std::vector<int> v;
    std::stringstream ss(text);
    try {
        for (std::string p; std::getline(ss, p, ',');) v.push_back(std::stoi(p));
    } catch (const std::exception&) {
        throw ConfigError("--spec: cannot parse '" + text + "'");
    }
    if (v.size() != 6) throw ConfigError("--spec needs six comma-separated powers k1,k2,k3,l1,l2,l3");
    MomentSpec s{{v[0], v[1], v[2]}, {v[3], v[4], v[5]}};
    for (int x : v) {
        if (x < 0) throw ConfigError("--spec powers must be >= 0");
    }
    if (s.degree() > 6) throw ConfigError("--spec total degree must be <= 6");
    return s;
}

Status cmd_moments(const RunConfig& rc, Table& t) {
    const auto grid = parameter_grid(rc);
    std::vector<std::string> spec_text = rc.specs.empty() ? std::vector<std::string>{"0,0,0,0,0,0"} : rc.specs;
    std::vector<MomentSpec> specs;
    for (const auto& s : spec_text) specs.push_back(parse_moment_spec(s));
    t.columns = kPointColumns;
    for (const char* c : {"spec", "generating_re", "generating_im", "fock_re", "fock_im", "abs_diff", "cutoff"}) {
        t.columns.emplace_back(c);
    }
    auto [rows, err] = run_pool<std::vector<std::vector<Cell>>>(grid.size(), rc.threads, [&](std::size_t i) {
        const auto& cfg = grid[i].cfg;
        const auto psi = build_c3msv_fock(cfg, rc.cutoff, rc.cutoff > 0 ? kDefaultDefectBudget : 1e-15);
        std::vector<std::vector<Cell>> out;
        for (std::size_t k = 0; k < specs.size(); ++k) {
            const Complex g = moment_generating(cfg, specs[k]);
            const Complex f = moment_fock(psi, specs[k]);
            auto row = point_cells(grid[i]);
            row.insert(row.end(), {spec_text[k], g.real(), g.imag(), f.real(), f.imag(), std::abs(g - f),
                                   static_cast<long long>(psi.cutoff())});
            out.push_back(std::move(row));
        }
        return out;
    });
    double worst = 0.0;
    for (auto& block : rows) {
        for (auto& row : block) {
            const double scale = std::max(1.0, std::hypot(std::get<double>(row[6]), std::get<double>(row[7])));
            worst = std::max(worst, std::get<double>(row[10]) / scale);
            t.rows.push_back(std::move(row));
        }
    }
    t.meta["max_rel_diff"] = worst;
    Status st;
    if (err) {
        st.code = exit_code_of(err->second, st.message);
    } else if (worst > (rc.cutoff > 0 ? 1e-6 : 1e-9)) {
        st.code = kMismatch;
        st.message = "generating-function and Fock moments differ by " + format_double(worst);
    }
    return st;
}

int cmd_selftest(const RunConfig& rc) {
    std::vector<int> ids = rc.criteria;
    if (ids.empty()) {
        for (int i = 1; i <= acceptance::kCriterionCount; ++i) ids.push_back(i);
    }
    bool ok = true;
    Table t;
    t.columns = {"criterion", "name", "passed", "seconds", "failed_checks"};
    for (int id : ids) {
        if (id < 1 || id > acceptance::kCriterionCount) throw ConfigError("no acceptance criterion " + std::to_string(id));
        const auto r = acceptance::run_criterion(id);
        ok = ok && r.passed();
        std::cerr << acceptance::report(r, true);
        std::string failed;
        for (const auto& c : r.checks) {
            if (!c.passed) failed += (failed.empty() ? "" : "; ") + c.what;
        }
        t.rows.push_back({static_cast<long long>(id), r.name, std::string(r.passed() ? "PASS" : "FAIL"), r.seconds, failed});
    }
    Status st;
    if (!ok) {
        st.code = kSelftestFailed;
        st.message = "one or more criteria failed";
    }
    write_table(t, rc, st, "selftest");
    return st.code;
}

// ---------------------------------------------------------------------------

void add_grid_options(CLI::App* app, RunConfig& rc) {
    auto* nbar = app->add_option("--nbar", rc.nbar, "Total mean photon number(s) nbar_T");
    auto* nbar_grid = app->add_option("--nbar-grid", rc.nbar_grid, "nbar_T grid a:b:n");
    auto* r = app->add_option("--r", rc.r, "Squeezing parameter(s) r");
    r->excludes(nbar)->excludes(nbar_grid);
    app->add_option("--phi", rc.phi, "Squeezing angle(s) phi in radians");
    app->add_option("--phi-grid", rc.phi_grid, "phi grid a:b:n (radians)");
    app->add_option("--phi-frac", rc.phi_frac, "phi = k*pi/n, written k/n");
    app->add_option("--theta1", rc.theta1, "Phase theta1 (radians)");
    app->add_option("--theta2", rc.theta2, "Phase theta2 (radians)");
}

void add_io_options(CLI::App* app, RunConfig& rc) {
    app->add_option("--out", rc.out, "Write output to PATH instead of stdout");
    app->add_option("--format", rc.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--config", rc.config, "JSON config file; its values override flags");
    app->add_option("--threads", rc.threads, "Worker threads (0 = hardware concurrency)");
}

void add_oracle_options(CLI::App* app, RunConfig& rc) {
    app->add_flag("--oracle", rc.oracle, "Cross-check against the Fock-basis oracle");
    app->add_option("--cutoff", rc.cutoff, "Fock cutoff per mode (0 = automatic)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"c3msv: steering, decoherence and Wigner negativity of the coupled three-mode squeezed vacuum"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    RunConfig rc;

    auto* steering = app.add_subcommand("steering", "Gaussian steering per bipartition: generic vs closed form");
    add_grid_options(steering, rc);
    add_io_options(steering, rc);
    steering->add_option("--case", rc.cases, "Steering case(s), e.g. 23to1");
    steering->add_flag("--all-cases", rc.all_cases, "All twelve cases (default)");
    steering->add_flag("--rgs", rc.rgs, "Emit residual Gaussian steering instead");

    auto* rgs = app.add_subcommand("rgs", "Monogamy deficits and residual Gaussian steering");
    add_grid_options(rgs, rc);
    add_io_options(rgs, rc);

    auto* decoherence = app.add_subcommand("decoherence", "Steering under thermal loss");
    add_grid_options(decoherence, rc);
    add_io_options(decoherence, rc);
    decoherence->add_option("--case", rc.cases, "Steering case(s) (default 23to1)");
    decoherence->add_flag("--all-cases", rc.all_cases, "All twelve cases");
    decoherence->add_option("--nr", rc.nr, "Reservoir occupation(s) n_R");
    decoherence->add_option("--gamma", rc.gamma, "Loss rate, equal on all modes");
    decoherence->add_option("--t-grid", rc.t_grid, "Time grid a:b:n");
    decoherence->add_flag("--sudden-death", rc.sudden_death, "Emit sudden-death thresholds gamma*t*");
    decoherence->add_option("--variant", rc.variant, "moment-law or printed-eq");

    auto* neg = app.add_subcommand("negativity", "Wigner negativity of photon-subtracted reductions");
    add_grid_options(neg, rc);
    add_io_options(neg, rc);
    add_oracle_options(neg, rc);
    neg->add_option("--scheme", rc.schemes, "Scheme tag(s), e.g. 1a_2 or '1a|2'");
    neg->add_flag("--all-schemes", rc.all_schemes, "All eighteen schemes");
    neg->add_option("--tol", rc.tol, "Quadrature tolerance");
    neg->add_option("--points", rc.points, "Initial quadrature points per dimension");
    neg->add_option("--half-width", rc.half_width, "Quadrature half-width in whitened units");
    neg->add_option("--oracle-tol", rc.oracle_tol, "Allowed oracle/analytic difference");

    auto* wig = app.add_subcommand("wigner", "Wigner function on a grid");
    add_grid_options(wig, rc);
    add_io_options(wig, rc);
    add_oracle_options(wig, rc);
    wig->add_option("--scheme", rc.schemes, "Scheme tag");
    wig->add_flag("--c3msv", rc.c3msv, "Unsubtracted state (all modes or --modes marginal)");
    wig->add_option("--modes", rc.modes, "Modes of the marginal with --c3msv (1-based)");
    wig->add_option("--grid", rc.grid, "Points per real axis");
    wig->add_option("--range", rc.range, "Axis half-range in Re/Im beta");

    auto* mom = app.add_subcommand("moments", "Normally ordered moments: generating function vs Fock basis");
    add_grid_options(mom, rc);
    add_io_options(mom, rc);
    mom->add_option("--spec", rc.specs, "Powers k1,k2,k3,l1,l2,l3 of a-dagger and a");
    mom->add_option("--cutoff", rc.cutoff, "Fock cutoff per mode (0 = automatic)");

    auto* self = app.add_subcommand("selftest", "Run the acceptance criteria");
    add_io_options(self, rc);
    self->add_option("--criterion", rc.criteria, "Criterion number(s); default all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfig;
    }

    Table table;
    Status status;
    std::string command = app.get_subcommands().front()->get_name();
    try {
        apply_config_file(rc);
        if (rc.format != "csv" && rc.format != "json") throw ConfigError("--format must be csv or json");
        if (command == "selftest") return cmd_selftest(rc);
        if (command == "steering" && rc.rgs) command = "rgs";
        table.meta["config"] = config_echo(rc);
        if (command == "steering") status = cmd_steering(rc, table);
        else if (command == "rgs") status = cmd_rgs(rc, table);
        else if (command == "decoherence") status = cmd_decoherence(rc, table);
        else if (command == "negativity") status = cmd_negativity(rc, table);
        else if (command == "wigner") status = cmd_wigner(rc, table);
        else if (command == "moments") status = cmd_moments(rc, table);
    } catch (...) {
        status.code = exit_code_of(std::current_exception(), status.message);
        if (status.code == kConfig) {
            std::cerr << "c3msv: " << status.message << '\n';
            return status.code;
        }
    }
    try {
        write_table(table, rc, status, command);
    } catch (const std::exception& e) {
        std::cerr << "c3msv: " << e.what() << '\n';
        return kConfig;
    }
    if (status.code != kOk) std::cerr << "c3msv: " << status.message << '\n';
    return status.code;
}
