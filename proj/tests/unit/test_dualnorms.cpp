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
#include "mtd/config.hpp"
#include "mtd/dualnorms.hpp"
#include "mtd/functional.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
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

/**
 * Exact flat norm (|f| <= 1, Lip f <= 1) for atoms on the lattice Z/8, by
 * dynamic programming over f values in Z/8 along the sorted chain. On a line
 * only consecutive Lipschitz constraints matter, and every vertex of the LP
 * takes values in the lattice generated by 1 and the gaps, so the grid
 * search is exact.
 */
double flat_norm_dp(const DiscreteMeasure& nu)
{
    const DiscreteMeasure mu = canonicalize(nu);
    std::vector<double> value(17, 0.0); // index k <-> f = (k - 8) / 8
    for (std::size_t i = 0; i < mu.size(); ++i) {
        std::vector<double> next(17, -1e300);
        const int reach = i == 0 ? 16 : int(std::lround(8.0 * (mu.point(i)[0] - mu.point(i - 1)[0])));
        for (int k = 0; k <= 16; ++k) {
            double best = -1e300;
            for (int j = std::max(0, k - reach); j <= std::min(16, k + reach); ++j) {
                best = std::max(best, value[j]);
            }
            next[k] = best + mu.weight(i) * (k - 8) / 8.0;
        }
        value = next;
    }
    return *std::max_element(value.begin(), value.end());
}

DiscreteMeasure random_lattice_measure(std::mt19937_64& rng, int atoms)
{
    std::uniform_int_distribution<int> where(-24, 24);
    std::uniform_real_distribution<double> w(-1.0, 1.0);
    std::vector<double> xs, ws;
    for (int i = 0; i < atoms; ++i) {
        xs.push_back(where(rng) / 8.0);
        ws.push_back(w(rng));
    }
    return line(xs, ws);
}

DiscreteMeasure random_measure(std::mt19937_64& rng, int atoms, double support)
{
    std::uniform_real_distribution<double> x(-support, support);
    std::uniform_real_distribution<double> w(-1.0, 1.0);
    std::vector<double> xs, ws;
    for (int i = 0; i < atoms; ++i) {
        xs.push_back(x(rng));
        ws.push_back(w(rng));
    }
    return line(xs, ws);
}

NormOptions with_alpha(double alpha)
{
    NormOptions o;
    o.alpha = alpha;
    return o;
}

} // namespace

TEST(FlatNorm, DiracPairClosedForms)
{
    for (double d : {0.1, 0.5, 1.0, 1.7, 3.0}) {
        const auto nu = line({0.0, d}, {1.0, -1.0});
        // max convention: sup f(0) - f(d) over |f| <= 1, Lip f <= 1.
        EXPECT_NEAR(flat_norm(nu, FlatConvention::max).upper, std::min(2.0, d), 1e-9);
        // sum convention: max over a + L = 1 of min(2a, L d) = 2d / (2 + d).
        EXPECT_NEAR(flat_norm(nu, FlatConvention::sum).upper, 2.0 * d / (2.0 + d), 1e-9);
    }
    EXPECT_NEAR(flat_norm(DiscreteMeasure::dirac(0.0)).upper, 1.0, 1e-12);
    EXPECT_NEAR(flat_norm(DiscreteMeasure::dirac(0.0), FlatConvention::sum).upper, 1.0, 1e-12);
}

TEST(FlatNorm, CounterexampleQuotientValues)
{
    const auto nu = line({0.5, 1.0, 1.5}, {2.0, -4.0, 2.0});
    EXPECT_NEAR(flat_norm(nu, FlatConvention::max).upper, 2.0, 1e-9);
    EXPECT_NEAR(flat_norm(nu, FlatConvention::sum).upper, 1.6, 1e-9);
}

TEST(FlatNorm, MatchesLatticeDynamicProgram)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 60; ++trial) {
        const auto nu = random_lattice_measure(rng, 2 + trial % 9);
        const auto r  = flat_norm(nu, FlatConvention::max);
        const double exact = flat_norm_dp(nu);
        EXPECT_NEAR(r.upper, exact, 1e-9) << "trial " << trial;
        EXPECT_LE(r.lower, r.upper);
        EXPECT_NEAR(r.lower, exact, 1e-9);
    }
}

TEST(FlatNorm, MetricProperties)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const auto a = random_measure(rng, 4, 2.0);
        const auto b = random_measure(rng, 3, 2.0);
        const auto c = random_measure(rng, 5, 2.0);
        for (auto conv : {FlatConvention::max, FlatConvention::sum}) {
            const double ab = flat_metric(a, b, conv);
            EXPECT_NEAR(ab, flat_metric(b, a, conv), 1e-9);
            EXPECT_LE(ab, flat_metric(a, c, conv) + flat_metric(c, b, conv) + 1e-9);
            EXPECT_NEAR(flat_metric(a, a, conv), 0.0, 1e-12);
            // |mass| <= norm <= TV.
            const auto diff = linear_combine(1.0, a, -1.0, b);
            EXPECT_GE(ab + 1e-9, std::abs(diff.mass()));
            EXPECT_LE(ab, total_variation(diff) + 1e-9);
            // Homogeneity.
            EXPECT_NEAR(flat_norm(linear_combine(-2.5, diff, 0.0, diff), conv).upper, 2.5 * ab, 1e-8);
        }
        // The sum-convention ball is smaller.
        EXPECT_LE(flat_metric(a, b, FlatConvention::sum), flat_metric(a, b, FlatConvention::max) + 1e-9);
    }
}

TEST(FlatNorm, HigherDimensionIsRejected)
{
    EXPECT_THROW(flat_norm(DiscreteMeasure::dirac(Vector::Zero(2))), std::invalid_argument);
}

TEST(HolderNorm, UnitDiracAndDipole)
{
    const auto r = holder_dual_norm(FirstOrderFunctional(DiscreteMeasure::dirac(0.3)));
    EXPECT_NEAR(r.upper, 1.0, 1e-9);
    EXPECT_NEAR(r.lower, 1.0, 1e-9);
    // <psi, delta'_x> = psi'(x) <= sup |psi'| <= 1.
    const auto d = holder_dual_upper(dirac_derivative(Vector::Constant(1, 0.3), Vector::Ones(1)));
    EXPECT_NEAR(d.upper, 1.0, 1e-9);
}

TEST(HolderNorm, DiracPairBracket)
{
    const auto nu = line({0.0, 0.1}, {1.0, -1.0});
    const double lower = holder_dual_lower(nu, 0.5);
    NormOptions opts   = with_alpha(0.5);
    const double plain = holder_dual_upper(nu, opts).upper;
    opts.aux_nodes     = 21;
    const double tight = holder_dual_upper(nu, opts).upper;
    EXPECT_LE(lower, tight);
    EXPECT_LE(tight, plain + 1e-12);
    // Displacement bound: ||delta_x - delta_y|| <= |x - y|.
    EXPECT_LE(tight, 0.1 + 1e-12);
    EXPECT_LE(tight / lower, 2.0);
}

TEST(HolderNorm, BoundsAreOrderedAndDominated)
{
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 25; ++trial) {
        const auto nu      = random_measure(rng, 2 + trial % 5, 1.5);
        const double alpha = (trial % 4 + 1) / 4.0;
        const auto r       = holder_dual_norm(FirstOrderFunctional(nu), with_alpha(alpha));
        EXPECT_GE(r.lower, 0.0);
        EXPECT_LE(r.lower, r.upper + 1e-12);
        // Test functions with unit budget lie in the sum-convention flat ball.
        EXPECT_LE(r.lower, flat_norm(nu, FlatConvention::sum).upper + 1e-9);
        EXPECT_LE(r.upper, total_variation(nu) + 1e-9);
        EXPECT_GE(r.upper + 1e-9, std::abs(nu.mass()));
    }
}

TEST(HolderNorm, ScaleEquivariance)
{
    std::mt19937_64 rng(13);
    const auto nu      = random_measure(rng, 4, 1.0);
    const double base  = holder_dual_upper(nu).upper;
    const double twice = holder_dual_upper(linear_combine(-3.0, nu, 0.0, nu)).upper;
    EXPECT_NEAR(twice, 3.0 * base, 1e-9 * (1 + base));
}

TEST(HolderNorm, UpperDecreasesInAlphaOnUnitDiameter)
{
    // For gaps d <= 1 every constraint tightens as alpha grows.
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const auto nu = random_measure(rng, 4, 0.5);
        double prev   = std::numeric_limits<double>::infinity();
        for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
            const double u = holder_dual_upper(nu, with_alpha(alpha)).upper;
            EXPECT_LE(u, prev + 1e-9);
            prev = u;
        }
    }
}

TEST(HolderNorm, UpperBoundedByCoefficientNorm)
{
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        PointList points, dipoles;
        std::vector<double> dens;
        for (int i = 0; i < 4; ++i) {
            points.push_back(Vector::Constant(1, 2.0 * u(rng)));
            dipoles.push_back(Vector::Constant(1, u(rng)));
            dens.push_back(u(rng));
        }
        const FirstOrderFunctional f(1, points, dens, dipoles);
        const auto r = holder_dual_norm(f);
        EXPECT_LE(r.upper, f.coefficient_norm() + 1e-9);
        EXPECT_LE(r.lower, r.upper + 1e-12);
    }
}

TEST(HolderNorm, ValidatesOptions)
{
    const auto nu = line({0.0, 1.0}, {1.0, -1.0});
    EXPECT_THROW(holder_dual_upper(nu, with_alpha(0.0)), std::invalid_argument);
    EXPECT_THROW(holder_dual_upper(nu, with_alpha(1.5)), std::invalid_argument);
    NormOptions opts = with_alpha(0.5);
    opts.aux_nodes   = 50;
    opts.node_cap    = 10;
    EXPECT_THROW(holder_dual_upper(nu, opts), std::length_error);
}

TEST(CauchyGap, CounterexampleQuotientDifference)
{
    const auto named = named_system("counterexample");
    const TransportProblem p{named->mu0, named->system, 1.0, 256};
    // (delta_{1.5} - delta_1)/0.5 - (delta_{0.5} - delta_1)/(-0.5)
    EXPECT_TRUE(approx_equal(quotient_difference(p, 0.5, -0.5), line({0.5, 1.0, 1.5}, {2.0, -4.0, 2.0}), 1e-12));
    const auto gap = cauchy_gap(p, 0.5, -0.5);
    EXPECT_NEAR(gap.flat, 2.0, 1e-9);
    EXPECT_LE(gap.lower, gap.upper);
    EXPECT_THROW(quotient_difference(p, 0.0, 0.5), std::invalid_argument);
    EXPECT_THROW(quotient_difference(p, 0.5, 0.5), std::invalid_argument);
}

TEST(CauchyGap, HolderGapShrinksFlatGapDoesNot)
{
    const auto named = named_system("counterexample");
    const TransportProblem p{named->mu0, named->system, 1.0, 256};
    double prev_upper = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 7; ++k) {
        const double h = std::ldexp(1.0, -k);
        const auto g   = cauchy_gap(p, h, -h, {}, false);
        EXPECT_LT(g.upper, prev_upper);
        EXPECT_NEAR(g.flat, 2.0, 1e-9);
        prev_upper = g.upper;
    }
}

TEST(LogLogSlope, RecoversPowerLaw)
{
    std::vector<double> x, y;
    for (int k = 1; k <= 6; ++k) {
        x.push_back(std::ldexp(1.0, -k));
        y.push_back(3.0 * std::pow(x.back(), 0.75));
    }
    EXPECT_NEAR(loglog_slope(x, y), 0.75, 1e-12);
    y[2] = 0.0;
    EXPECT_TRUE(std::isnan(loglog_slope(x, y)));
}
