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
#include "mtd/flow.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace mtd;

namespace
{

PointList points(std::initializer_list<double> xs)
{
    PointList out;
    for (double x : xs) {
        out.push_back(Vector::Constant(1, x));
    }
    return out;
}

FlowSystem sin_growth()
{
    return named_system("sin_growth")->system;
}

} // namespace

TEST(Flow, ConstantFieldClosedForm)
{
    // b = 1, b1 = 1: X = y + (1 + h) t, dX/dh = t.
    const FlowSystem sys{VelocityField::constant(1.0), VelocityField::constant(1.0), ScalarField::zero(1)};
    const auto bundle = integrate_bundle(sys, 0.2, points({0.0}), 1.0, 256);
    EXPECT_NEAR(bundle.position(0, bundle.last())[0], 1.2, 1e-14);
    EXPECT_NEAR(bundle.sensitivity(0, bundle.last())[0], 1.0, 1e-14);
}

TEST(Flow, LinearFieldClosedForm)
{
    // x' = -x + h: X = h + (y - h) e^{-t}, dX/dh = 1 - e^{-t}.
    const FlowSystem sys{VelocityField::affine(-1.0, 0.0), VelocityField::constant(1.0), ScalarField::zero(1)};
    const double h = 0.3, y = 1.0;
    const auto bundle = integrate_bundle(sys, h, points({y}), 2.0, 512);
    for (std::size_t k = 0; k < bundle.nodes(); k += 64) {
        const double t = bundle.time(k);
        EXPECT_NEAR(bundle.position(0, k)[0], h + (y - h) * std::exp(-t), 1e-10);
        EXPECT_NEAR(bundle.sensitivity(0, k)[0], 1.0 - std::exp(-t), 1e-10);
    }
}

TEST(Flow, GrowthClosedForm)
{
    // b = 1, b1 = 1, w = x/2: W = (y t + (1 + h) t^2 / 2) / 2, dW/dh = t^2 / 4.
    const auto named = named_system("growth");
    const double h = -0.1, y = 0.5, t = 1.5;
    const auto bundle = integrate_bundle(named->system, h, points({y}), t, 384);
    EXPECT_NEAR(bundle.growth(0, bundle.last()), 0.5 * (y * t + (1 + h) * t * t / 2), 1e-12);
    EXPECT_NEAR(bundle.growth_sensitivity(0, bundle.last()), t * t / 4, 1e-12);
}

TEST(Flow, FourthOrderConvergence)
{
    const FlowSystem sys{VelocityField::affine(-1.0, 0.0), VelocityField::constant(1.0), ScalarField::zero(1)};
    const double h = 0.25, y = 2.0, T = 1.0;
    const double exact = h + (y - h) * std::exp(-T);
    double previous    = 0.0;
    for (int steps : {4, 8, 16, 32}) {
        const auto b     = integrate_bundle(sys, h, points({y}), T, steps);
        const double err = std::abs(b.position(0, b.last())[0] - exact);
        if (previous > 0.0) {
            EXPECT_GE(previous / err, 14.0) << "steps " << steps;
        }
        previous = err;
    }
}

TEST(Flow, GroupProperty)
{
    // Integrating to t1 and restarting from there equals integrating to t1 + t2.
    const FlowSystem sys = sin_growth();
    const double h = 0.15, t1 = 0.5, t2 = 0.75;
    const int per_unit = 256;
    const auto whole   = integrate_bundle(sys, h, points({-0.5, 0.8}), t1 + t2, int(per_unit * (t1 + t2)));
    const auto first   = integrate_bundle(sys, h, points({-0.5, 0.8}), t1, int(per_unit * t1));
    PointList mid;
    for (std::size_t i = 0; i < 2; ++i) {
        mid.push_back(first.position(i, first.last()));
    }
    const auto second = integrate_bundle(sys, h, mid, t1 + t2, int(per_unit * t2), t1);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_NEAR(second.position(i, second.last())[0], whole.position(i, whole.last())[0], 1e-12);
        // Growth is additive along the trajectory.
        EXPECT_NEAR(first.growth(i, first.last()) + second.growth(i, second.last()),
                    whole.growth(i, whole.last()), 1e-12);
    }
}

TEST(Flow, SensitivityMatchesFiniteDifferences)
{
    const FlowSystem sys = sin_growth();
    const double h = 0.1, d = 1e-4;
    const auto pts = points({-0.5, 0.5, 1.0});
    const auto c   = integrate_bundle(sys, h, pts, 1.0, 256);
    const auto p   = integrate_bundle(sys, h + d, pts, 1.0, 256);
    const auto m   = integrate_bundle(sys, h - d, pts, 1.0, 256);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto k = c.last();
        EXPECT_NEAR(c.sensitivity(i, k)[0], (p.position(i, k)[0] - m.position(i, k)[0]) / (2 * d), 1e-6);
        EXPECT_NEAR(c.growth_sensitivity(i, k), (p.growth(i, k) - m.growth(i, k)) / (2 * d), 1e-6);
    }
}

TEST(Flow, RejectsBadArguments)
{
    const FlowSystem sys = sin_growth();
    EXPECT_THROW(integrate_bundle(sys, 0.0, points({0.0}), 1.0, 0), std::invalid_argument);
    EXPECT_THROW(integrate_bundle(sys, 0.0, points({0.0}), -1.0, 10), std::invalid_argument);
}

TEST(Flow, DefaultStepsScaleWithHorizon)
{
    EXPECT_EQ(default_steps(1.0), 256);
    EXPECT_EQ(default_steps(2.0), 512);
    EXPECT_GE(default_steps(1e-6), 1);
}
