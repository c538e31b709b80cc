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
#include "mtd/fields.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace mtd;

namespace
{

/// Central-difference Jacobian, the oracle for every closed-form gradient.
Matrix fd_jacobian(const AnalyticField& f, double t, const Vector& x, double step = 1e-6)
{
    Matrix J(f.output_dim(), f.input_dim());
    for (int k = 0; k < f.input_dim(); ++k) {
        Vector xp = x, xm = x;
        xp[k] += step;
        xm[k] -= step;
        J.col(k) = (f.value(t, xp) - f.value(t, xm)) / (2.0 * step);
    }
    return J;
}

std::vector<AnalyticField> catalog()
{
    Matrix A(2, 2);
    A << 0.3, -1.0, 0.5, 0.2;
    Vector c(2), amp(2), k(2);
    c << 0.2, -0.4;
    amp << 1.0, -0.5;
    k << 1.5, -0.7;
    return {
        AnalyticField::constant(amp, 2),
        AnalyticField::affine(A, c),
        AnalyticField::gaussian_bump(amp, c, 0.8),
        AnalyticField::sinusoidal(amp, k, 0.3),
        AnalyticField::sinusoidal(amp, k, 0.3).with_time(TimeProfile::cosine) +
            AnalyticField::gaussian_bump(amp, c, 1.3).with_time(TimeProfile::exp_decay),
    };
}

} // namespace

TEST(Fields, GradientsMatchCentralDifferences)
{
    Vector x(2);
    x << 0.37, -0.81;
    for (const auto& f : catalog()) {
        for (double t : {0.0, 0.6}) {
            const Matrix J  = f.jacobian(t, x);
            const Matrix fd = fd_jacobian(f, t, x);
            EXPECT_LE((J - fd).norm(), 1e-6 * std::max(1.0, J.norm()));
        }
    }
}

TEST(Fields, TimeProfilesAreClosedForm)
{
    EXPECT_DOUBLE_EQ(time_factor(TimeProfile::one, 3.0), 1.0);
    EXPECT_DOUBLE_EQ(time_factor(TimeProfile::exp_decay, 0.5), std::exp(-0.5));
    EXPECT_DOUBLE_EQ(time_factor(TimeProfile::cosine, 0.5), std::cos(0.5));
}

TEST(Fields, BoundsDominateSampledValues)
{
    // Sampled sup, sup gradient and Hoelder quotients never exceed the certified bounds.
    const double alpha = 0.5;
    for (const auto& f : catalog()) {
        if (f.terms().front().kind == FieldKind::affine) {
            continue; // unbounded on R^d
        }
        const FieldBounds b = f.bounds(alpha);
        for (int i = -20; i <= 20; ++i) {
            for (int j = -20; j <= 20; j += 5) {
                Vector x(2), y(2);
                x << 0.17 * i, 0.23 * j;
                y << 0.17 * i + 0.05, 0.23 * j - 0.11;
                for (double t : {0.0, 0.4}) {
                    EXPECT_LE(f.value(t, x).norm(), b.sup_value * (1 + 1e-12));
                    const Matrix Jx = f.jacobian(t, x);
                    EXPECT_LE(Jx.norm(), b.sup_gradient * (1 + 1e-12));
                    const double q = (Jx - f.jacobian(t, y)).norm() / std::pow((x - y).norm(), alpha);
                    EXPECT_LE(q, b.holder_gradient * (1 + 1e-12));
                }
            }
        }
    }
}

TEST(Fields, InterpolatedHolder)
{
    EXPECT_DOUBLE_EQ(interpolated_holder(1.0, 0.0, 0.5), 0.0);
    EXPECT_DOUBLE_EQ(interpolated_holder(1.0, 3.0, 1.0), 3.0);
    EXPECT_DOUBLE_EQ(interpolated_holder(2.0, 1.0, 0.5), 2.0);
}

TEST(Fields, NormalizedTestFunctionHasUnitBudget)
{
    const TestFunction psi(ScalarField::sinusoidal(2.0, 3.0, 0.1));
    for (double alpha : {0.25, 0.5, 1.0}) {
        EXPECT_NEAR(psi.normalized(alpha).bounds(alpha).norm(), 1.0, 1e-14);
    }
}

TEST(Fields, HatFunctionIsNotSmooth)
{
    const TestFunction hat = TestFunction::hat(1.0);
    EXPECT_FALSE(hat.is_smooth());
    EXPECT_DOUBLE_EQ(hat.value(1.0), -1.0);
    EXPECT_DOUBLE_EQ(hat.value(1.5), -0.5);
    EXPECT_DOUBLE_EQ(hat.value(3.0), 0.0);
}

TEST(Fields, RejectsShapeMismatch)
{
    AnalyticField f(2, 1);
    FieldTerm term;
    term.kind      = FieldKind::constant;
    term.amplitude = Vector::Ones(2);
    EXPECT_THROW(f.add_term(term), std::invalid_argument);
}
