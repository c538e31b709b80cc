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
#include "mtd/simplex.hpp"
#include "mtd/types.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <functional>
#include <random>

using namespace mtd;

namespace
{

/**
 * Vertex-enumeration oracle: every vertex of {Ax <= b, x >= 0} is the
 * solution of n active constraints, so the optimum of a bounded LP is the
 * best feasible such solution.
 */
double brute_force_max(const Matrix& A, const Vector& b, const Vector& c)
{
    const Eigen::Index m = A.rows(), n = A.cols();
    Matrix G(m + n, n);
    Vector r(m + n);
    G << A, -Matrix::Identity(n, n);
    r << b, Vector::Zero(n);
    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> pick(static_cast<std::size_t>(n));
    std::function<void(int, int)> choose = [&](int start, int depth) {
        if (depth == n) {
            Matrix S(n, n);
            Vector s(n);
            for (int k = 0; k < n; ++k) {
                S.row(k) = G.row(pick[k]);
                s[k]     = r[pick[k]];
            }
            Eigen::FullPivLU<Matrix> lu(S);
            if (lu.rank() < n) {
                return;
            }
            const Vector x = lu.solve(s);
            if (((G * x - r).array() <= 1e-9).all()) {
                best = std::max(best, c.dot(x));
            }
            return;
        }
        for (int i = start; i < m + n; ++i) {
            pick[depth] = i;
            choose(i + 1, depth + 1);
        }
    };
    choose(0, 0);
    return best;
}

} // namespace

TEST(Simplex, TextbookProblem)
{
    // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18: optimum 36 at (2, 6).
    Matrix A(3, 2);
    A << 1, 0, 0, 2, 3, 2;
    const Vector b = (Vector(3) << 4, 12, 18).finished();
    const Vector c = (Vector(2) << 3, 5).finished();
    const auto sol = maximize<double>(A, b, c);
    ASSERT_EQ(sol.status, LpStatus::optimal);
    EXPECT_NEAR(sol.objective, 36.0, 1e-12);
    EXPECT_NEAR(sol.x[0], 2.0, 1e-12);
    EXPECT_NEAR(sol.x[1], 6.0, 1e-12);
    // Strong duality: b^T y equals the optimum and y is dual feasible.
    EXPECT_NEAR(b.dot(sol.dual), 36.0, 1e-9);
    EXPECT_TRUE(((A.transpose() * sol.dual - c).array() >= -1e-9).all());
}

TEST(Simplex, MatchesVertexEnumeration)
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 3, m = 3 + trial % 4;
        Matrix A(m + n, n);
        A.topRows(m) = Matrix::NullaryExpr(m, n, [&] { return u(rng); });
        A.bottomRows(n).setIdentity(); // box keeps every instance bounded
        Vector b(m + n);
        b.head(m) = Vector::NullaryExpr(m, [&] { return 0.5 + u(rng); }).cwiseAbs();
        b.tail(n).setConstant(2.0);
        const Vector c = Vector::NullaryExpr(n, [&] { return u(rng); });
        const auto sol = maximize<double>(A, b, c);
        ASSERT_EQ(sol.status, LpStatus::optimal) << "trial " << trial;
        EXPECT_NEAR(sol.objective, brute_force_max(A, b, c), 1e-9) << "trial " << trial;
        EXPECT_TRUE(((A * sol.x - b).array() <= 1e-9).all());
        EXPECT_TRUE((sol.x.array() >= -1e-12).all());
    }
}

TEST(Simplex, DegenerateProblemTerminates)
{
    // Many redundant constraints through the same vertex.
    const int m = 30;
    Matrix A(m, 2);
    Vector b(m);
    for (int i = 0; i < m; ++i) {
        const double s = 1.0 + i / double(m);
        A.row(i) << s, s;
        b[i] = s;
    }
    const Vector c = (Vector(2) << 1, 1).finished();
    const auto sol = maximize<double>(A, b, c);
    ASSERT_EQ(sol.status, LpStatus::optimal);
    EXPECT_NEAR(sol.objective, 1.0, 1e-9);
}

TEST(Simplex, DetectsUnboundedness)
{
    Matrix A(1, 2);
    A << 1, -1;
    const auto sol = maximize<double>(A, Vector::Ones(1), Vector::Ones(2));
    EXPECT_EQ(sol.status, LpStatus::unbounded);
}

TEST(Simplex, LongDoubleAgrees)
{
    using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    using VectorL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
    MatrixL A(3, 2);
    A << 1, 0, 0, 2, 3, 2;
    VectorL b(3), c(2);
    b << 4, 12, 18;
    c << 3, 5;
    const auto sol = maximize<long double>(A, b, c);
    ASSERT_EQ(sol.status, LpStatus::optimal);
    EXPECT_NEAR(double(sol.objective), 36.0, 1e-15);
}

TEST(Simplex, RejectsNegativeRightHandSide)
{
    EXPECT_THROW(maximize<double>(Matrix::Ones(1, 1), -Vector::Ones(1), Vector::Ones(1)), std::invalid_argument);
}
