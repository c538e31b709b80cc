/*
* Copyright (C) 2026 The mtd Authors
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
#include "mtd/measures.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace mtd;

namespace
{

DiscreteMeasure line(std::vector<double> xs, std::vector<double> ws)
{
    PointList points;
    for (double x : xs) {
        points.push_back(Vector::Constant(1, x));
    }
    return DiscreteMeasure(1, std::move(points), std::move(ws));
}

} // namespace

TEST(Measures, RejectsMismatchedShapes)
{
    EXPECT_THROW(DiscreteMeasure(1, {Vector::Zero(2)}, {1.0}), std::invalid_argument);
    EXPECT_THROW(DiscreteMeasure(1, {Vector::Zero(1)}, {}), std::invalid_argument);
}

TEST(Measures, TotalVariationHandSum)
{
    EXPECT_DOUBLE_EQ(total_variation(line({0.5, 1.0, 1.5}, {2.0, -4.0, 2.0})), 8.0);
}

TEST(Measures, CanonicalizeMergesAndDropsCancelledAtoms)
{
    const auto mu = canonicalize(line({1.0, 0.0, 1.0 + 1e-13, 2.0, 2.0}, {1.0, 2.0, 1.0, 3.0, -3.0}));
    ASSERT_EQ(mu.size(), 2u);
    EXPECT_DOUBLE_EQ(mu.point(0)[0], 0.0);
    EXPECT_DOUBLE_EQ(mu.weight(0), 2.0);
    EXPECT_NEAR(mu.point(1)[0], 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(mu.weight(1), 2.0);
}

TEST(Measures, CanonicalizeIsIdempotent)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> xs, ws;
        for (int i = 0; i < 10; ++i) {
            xs.push_back(std::round(4.0 * u(rng)) / 4.0);
            ws.push_back(u(rng));
        }
        const auto once = canonicalize(line(xs, ws));
        EXPECT_TRUE(approx_equal(canonicalize(once), once, 0.0));
    }
}

TEST(Measures, IntegrationIsLinear)
{
    const auto mu  = line({0.1, 0.7}, {1.5, -0.5});
    const auto nu  = line({0.7, -2.0}, {2.0, 0.25});
    const auto mix = linear_combine(0.3, mu, -1.7, nu);
    auto f         = [](const Vector& x) { return std::sin(3.0 * x[0]) + x[0] * x[0]; };
    EXPECT_NEAR(mix.integrate(f), 0.3 * mu.integrate(f) - 1.7 * nu.integrate(f), 1e-14);
}

TEST(Measures, PushForwardMovesAtomsAndKeepsWeights)
{
    const auto mu  = line({0.0, 1.0}, {1.0, -2.0});
    const auto out = push_forward(mu, [](const Vector& x) { return Vector(x.array() + 1.2); });
    EXPECT_TRUE(approx_equal(out, line({1.2, 2.2}, {1.0, -2.0}), 1e-15));
    // A non-injective map can only lose total variation.
    const auto folded = push_forward(mu, [](const Vector&) { return Vector::Zero(1); });
    EXPECT_LE(total_variation(folded), total_variation(mu));
    EXPECT_DOUBLE_EQ(folded.weight(0), -1.0);
}

TEST(Measures, DiracApproximationSnapsToLattice)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto mu        = line({u(rng), u(rng), u(rng)}, {u(rng), u(rng), 0.5});
        const double eps     = 0.05;
        const double spacing = eps / (2.0 * total_variation(mu));
        EXPECT_DOUBLE_EQ(lattice_spacing(mu, eps), spacing);
        const auto nu = dirac_approximate(mu, eps, 0.5);
        ASSERT_EQ(nu.size(), mu.size());
        for (std::size_t i = 0; i < mu.size(); ++i) {
            const double k = nu.point(i)[0] / spacing;
            EXPECT_NEAR(k, std::round(k), 1e-6);
            EXPECT_LE(std::abs(nu.point(i)[0] - mu.point(i)[0]), 0.5 * spacing * (1 + 1e-12));
            EXPECT_EQ(nu.weight(i), mu.weight(i));
        }
        // Each atom moves at most spacing/2, so the displacement bound is at most eps/4.
        EXPECT_LE(displacement_bound(mu, nu), 0.25 * eps * (1 + 1e-12));
    }
}

TEST(Measures, DiracApproximationKeepsLatticeMeasures)
{
    const auto mu = line({0.0, 0.25}, {1.0, 1.0});
    // spacing = 0.05 / 4 = 0.0125 divides 0.25
    EXPECT_TRUE(approx_equal(dirac_approximate(mu, 0.05, 0.5), mu, 1e-15));
}

TEST(Measures, DiracApproximationRejectsBadInput)
{
    EXPECT_THROW(dirac_approximate(line({0.0}, {1.0}), 0.0, 0.5), std::invalid_argument);
    EXPECT_THROW(dirac_approximate(DiscreteMeasure(1), 0.1, 0.5), std::invalid_argument);
}
