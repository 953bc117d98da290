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

// End-to-end runs of the command-line tool.

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(C3MSV_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> cells(1);
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char ch = line[i];
            if (ch == '"') {
                if (quoted && i + 1 < line.size() && line[i + 1] == '"') {
                    cells.back() += '"';
                    ++i;
                } else {
                    quoted = !quoted;
                }
            } else if (ch == ',' && !quoted) {
                cells.emplace_back();
            } else {
                cells.back() += ch;
            }
        }
        rows.push_back(cells);
    }
    return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    ADD_FAILURE() << "no column " << name;
    return 0;
}

TEST(Cli, SuddenDeathThresholds) {
    const double want[] = {0.346574, 0.11903, 0.0729227};
    const char* nr[] = {"0", "0.5", "1"};
    for (int i = 0; i < 3; ++i) {
        const auto r = run(std::string("decoherence --nbar 3 --phi 0.39269908169872414 --nr ") + nr[i] +
                           " --case 23to1 --sudden-death");
        ASSERT_EQ(r.code, 0);
        const auto rows = csv(r.out);
        ASSERT_EQ(rows.size(), 2u);
        EXPECT_NEAR(std::stod(rows[1][column(rows[0], "gamma_t_star")]), want[i], 1e-3);
    }
}

TEST(Cli, NoLossMeansNoDeath) {
    const auto r = run("decoherence --nbar 3 --phi-frac 1/8 --gamma 0 --sudden-death");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("no-death"), std::string::npos);
}

TEST(Cli, VacuumSteeringIsZero) {
    const auto r = run("steering --nbar 0");
    ASSERT_EQ(r.code, 0);
    const auto rows = csv(r.out);
    ASSERT_EQ(rows.size(), 13u);
    const auto g = column(rows[0], "G_generic");
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][g], "0");
}

TEST(Cli, SteeringTableHasTwelveRowsAndZeroCases) {
    const auto r = run("steering --nbar 3 --phi 0.3927 --all-cases");
    const auto rows = csv(r.out);
    ASSERT_EQ(rows.size(), 13u);
    const auto c = column(rows[0], "case");
    const auto g = column(rows[0], "G_generic");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i][c] == "1to3" || rows[i][c] == "3to1" || rows[i][c] == "3to2") {
            EXPECT_EQ(rows[i][g], "0");
        }
    }
    // Closed forms that disagree with the generic pipeline are reported as a mismatch.
    EXPECT_TRUE(r.code == 0 || r.code == 5);
}

TEST(Cli, ResidualSteeringPeaksAtBisymmetricRow) {
    const auto r = run("steering --rgs --nbar 3 --phi-grid 0:1.5707963267948966:33");
    ASSERT_EQ(r.code, 0);
    const auto rows = csv(r.out);
    ASSERT_EQ(rows.size(), 34u);
    const auto k = column(rows[0], "rgs");
    std::size_t best = 1;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (std::stod(rows[i][k]) > std::stod(rows[best][k]) + 1e-12) best = i;
    }
    EXPECT_EQ(best, 17u);
}

TEST(Cli, MomentsAgree) {
    auto r = run("moments --spec 0,1,0,0,1,0 --nbar 2");
    ASSERT_EQ(r.code, 0);
    auto rows = csv(r.out);
    EXPECT_NEAR(std::stod(rows[1][column(rows[0], "generating_re")]), 1.0, 1e-12);
    EXPECT_NEAR(std::stod(rows[1][column(rows[0], "fock_re")]), 1.0, 1e-9);
    r = run("moments --spec 1,0,0,1,0,0 --nbar 2 --phi 0.7854");
    ASSERT_EQ(r.code, 0);
    rows = csv(r.out);
    EXPECT_NEAR(std::stod(rows[1][column(rows[0], "generating_re")]), 0.5, 1e-4);
    EXPECT_NEAR(std::stod(rows[1][column(rows[0], "fock_re")]), 0.5, 1e-4);
    r = run("moments --spec 0,0,0,0,0,0 --nbar 2");
    rows = csv(r.out);
    EXPECT_EQ(rows[1][column(rows[0], "generating_re")], "1");
}

TEST(Cli, NegativityScanWithOracle) {
    const auto r = run("negativity --nbar 3 --scheme 1a_2 --phi-grid 0.2:1.2:3 --oracle --cutoff 40");
    ASSERT_EQ(r.code, 0);
    const auto rows = csv(r.out);
    ASSERT_EQ(rows.size(), 4u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_NEAR(std::stod(rows[i][column(rows[0], "N_analytic")]), 0.04682, 1e-3);
        EXPECT_LT(std::stod(rows[i][column(rows[0], "abs_diff")]), 2e-3);
    }
}

TEST(Cli, NegativityZeroScheme) {
    const auto r = run("negativity --nbar 3 --scheme 2a3a_1 --phi-grid 0.2:1.2:4");
    ASSERT_EQ(r.code, 0);
    const auto rows = csv(r.out);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][column(rows[0], "N_analytic")], "0");
}

TEST(Cli, WignerFields) {
    auto r = run("wigner --nbar 3 --phi-frac 1/8 --scheme 1a_2 --grid 64 --range 4 --format json");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\"min_W\": -"), std::string::npos);
    r = run("wigner --nbar 3 --phi-frac 1/8 --scheme 2a3a_1 --grid 33 --range 4");
    ASSERT_EQ(r.code, 0);
    const auto rows = csv(r.out);
    ASSERT_EQ(rows.size(), 33u * 33u + 1);
    const auto w = column(rows[0], "W");
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GE(std::stod(rows[i][w]), -1e-12);
    r = run("wigner --r 0 --c3msv --modes 1 --grid 5 --range 1");
    ASSERT_EQ(r.code, 0);
    const auto v = csv(r.out);
    EXPECT_NEAR(std::stod(v[13][column(v[0], "W")]), 2.0 / 3.14159265358979, 1e-9);
}

TEST(Cli, PartialOutputOnNonConvergence) {
    const auto r = run("negativity --nbar 3 --scheme 2a3a_1 --scheme 1a3a_2 --points 16 --tol 1e-10 --half-width 8 --threads 1 --format json");
    EXPECT_EQ(r.code, 4);
    EXPECT_NE(r.out.find("\"exit_code\": 4"), std::string::npos);
    EXPECT_NE(r.out.find("2a3a|1"), std::string::npos);
}

TEST(Cli, JsonHasMetaRowsAndStatus) {
    const auto r = run("rgs --nbar 2 --phi 0.7853981633974483 --format json");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\"meta\""), std::string::npos);
    EXPECT_NE(r.out.find("\"rows\""), std::string::npos);
    EXPECT_NE(r.out.find("\"status\""), std::string::npos);
}

TEST(Cli, OutputIsDeterministic) {
    const std::string args = "negativity --nbar 3 --scheme 1a3a_2 --phi-grid 0.1:1.4:5 --format json";
    EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, ConfigFileOverridesFlags) {
    const auto r = run(std::string("decoherence --nbar 1 --config ") + C3MSV_DEMOS_DIR + "/sudden_death.json");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("0.346574"), std::string::npos);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("steering --nbar 1 --r 1").code, 2);
    EXPECT_EQ(run("steering --phi-grid 0:1").code, 2);
    EXPECT_EQ(run("negativity --scheme 4a_1").code, 2);
    EXPECT_EQ(run("steering --phi 3").code, 2);
    EXPECT_EQ(run("negativity --r 0 --scheme 2a_13").code, 3);
    EXPECT_EQ(run("negativity --nbar 3 --scheme 1a3a_2 --points 16 --tol 1e-14").code, 4);
    EXPECT_EQ(run("moments --spec 2,1,1,1,1,1").code, 2);
    EXPECT_EQ(run("moments --spec 1,1,1,1,1,1").code, 0);
}

}  // namespace
