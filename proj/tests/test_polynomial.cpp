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

#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "c3msv/polynomial.hpp"

namespace {

using namespace c3msv;

RealPolynomial x(int i) { return RealPolynomial::variable(2, i); }

TEST(Polynomial, ArithmeticAndEvaluation) {
    const auto p = x(0) * x(0) - 2.0 * x(0) * x(1) + 3.0;
    const std::array<double, 2> at{1.5, -2.0};
    EXPECT_DOUBLE_EQ(p.evaluate(at), 2.25 + 6.0 + 3.0);
    EXPECT_EQ(p.degree(), 2);
    EXPECT_TRUE((p - p).empty());
}

TEST(Polynomial, PartialDerivative) {
    const auto p = x(0) * x(0) * x(1) + 4.0 * x(1);
    const auto dx = p.partial(0);
    const auto dy = p.partial(1);
    const std::array<double, 2> at{2.0, 3.0};
    EXPECT_DOUBLE_EQ(dx.evaluate(at), 12.0);
    EXPECT_DOUBLE_EQ(dy.evaluate(at), 8.0);
}

TEST(Polynomial, TruncatedProductDropsHighDegree) {
    const auto p = x(0) + x(0) * x(0);
    const auto q = p.multiply_truncated(p, 3);
    EXPECT_EQ(q.degree(), 3);
    EXPECT_DOUBLE_EQ(q.coefficient(Exponent{3, 0}), 2.0);
    EXPECT_DOUBLE_EQ(q.coefficient(Exponent{4, 0}), 0.0);
}

TEST(Polynomial, ComposeWithLinearMap) {
    // p(u, v) = u v with u = a + b, v = a - b gives a² - b².
    const auto p = x(0) * x(1);
    const auto q = p.compose({x(0) + x(1), x(0) - x(1)});
    const std::array<double, 2> at{3.0, 2.0};
    EXPECT_DOUBLE_EQ(q.evaluate(at), 5.0);
}

TEST(Polynomial, ComplexFormAbsSquared) {
    const ComplexForm z(x(0), x(1));
    const auto m = z.abs2();
    const std::array<double, 2> at{3.0, 4.0};
    EXPECT_DOUBLE_EQ(m.evaluate(at), 25.0);
    const auto w = z * z.conj();
    EXPECT_DOUBLE_EQ(w.re.evaluate(at), 25.0);
    EXPECT_DOUBLE_EQ(w.im.evaluate(at), 0.0);
}

TEST(Polynomial, MismatchedArityThrows) {
    EXPECT_THROW(RealPolynomial(7), InvalidArgument);
    EXPECT_THROW(RealPolynomial::variable(2, 2), InvalidArgument);
    EXPECT_THROW(x(0) + RealPolynomial::variable(3, 0), InvalidArgument);
}

TEST(RealRoots, CubicWithThreeRoots) {
    // (x - 1)(x + 2)(x - 3) = x³ - 2x² - 5x + 6
    const auto r = real_roots({6.0, -5.0, -2.0, 1.0});
    ASSERT_EQ(r.size(), 3u);
    EXPECT_NEAR(r[0], -2.0, 1e-12);
    EXPECT_NEAR(r[1], 1.0, 1e-12);
    EXPECT_NEAR(r[2], 3.0, 1e-12);
}

TEST(RealRoots, NoRealRoots) {
    EXPECT_TRUE(real_roots({1.0, 0.0, 1.0}).empty());
    EXPECT_TRUE(real_roots({2.0}).empty());
}

TEST(RealRoots, QuarticWithCloseRoots) {
    // (x² - 1)(x² - 1.0001)
    const auto r = real_roots({1.0001, 0.0, -2.0001, 0.0, 1.0});
    ASSERT_EQ(r.size(), 4u);
    EXPECT_NEAR(r[2], 1.0, 1e-10);
    EXPECT_NEAR(r[3], std::sqrt(1.0001), 1e-10);
}

TEST(RealRoots, TrailingZeroCoefficientsAreIgnored) {
    const auto r = real_roots({-4.0, 2.0, 0.0, 0.0});
    ASSERT_EQ(r.size(), 1u);
    EXPECT_DOUBLE_EQ(r[0], 2.0);
}

}  // namespace
