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
#ifndef MTD_SIMPLEX_HPP
#define MTD_SIMPLEX_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace mtd
{

enum class LpStatus
{
    optimal,
    unbounded,
    pivot_limit,
    /// The final basis is not primal feasible for the unperturbed right-hand side.
    infeasible_basis,
};

template <typename Scalar>
struct LpSolution {
    using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    LpStatus status = LpStatus::optimal;
    Scalar objective{0};
    VectorX x;
    /// Row prices read off the final objective row; y >= 0 at optimality.
    VectorX dual;
    std::size_t pivots = 0;
};

template <typename Scalar>
struct SimplexOptions {
    Scalar tolerance{1e-10};
    /// Relative size of the right-hand side perturbation; 0 disables it.
    Scalar perturbation{1e-9};
    std::size_t max_pivots = 1000000;
};

/**
 * Dense dictionary-form simplex for
 *
 *     maximize c^T x   subject to   A x <= b,  x >= 0,
 *
 * with b >= 0 so that the slack basis is feasible. Entering variables follow
 * Bland's rule (smallest label with negative reduced cost); leaving rows are
 * chosen by minimum ratio with smallest-label tie breaking.
 *
 * Homogeneous programs are massively degenerate, so pivoting runs on
 * b + delta with tiny distinct delta_i > 0 while the unperturbed b is carried
 * as an extra tableau column. Dual feasibility does not depend on b, so the
 * final basis is optimal for the original program whenever its unperturbed
 * basic solution is non-negative; otherwise the status is infeasible_basis.
 */
template <typename Scalar>
LpSolution<Scalar> maximize(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
                            const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b,
                            const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& c,
                            const SimplexOptions<Scalar>& options = {})
{
    using MatrixX   = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using VectorX   = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

    const Eigen::Index m = A.rows();
    const Eigen::Index n = A.cols();
    const Scalar tol     = options.tolerance;
    if (b.size() != m || c.size() != n) {
        throw std::invalid_argument("simplex: inconsistent problem dimensions");
    }
    if ((b.array() < Scalar(0)).any()) {
        throw std::invalid_argument("simplex: right-hand side must be non-negative");
    }

    // Columns: n nonbasic, perturbed rhs at n, original rhs at n + 1.
    const Eigen::Index rhs  = n;
    const Eigen::Index orig = n + 1;
    MatrixX T(m + 1, n + 2);
    T.topLeftCorner(m, n)    = A;
    T.block(0, orig, m, 1)   = b;
    T.bottomLeftCorner(1, n) = -c.transpose();
    T(m, rhs)                = Scalar(0);
    T(m, orig)               = Scalar(0);
    const Scalar scale       = Scalar(1) + (m > 0 ? b.cwiseAbs().maxCoeff() : Scalar(0));
    for (Eigen::Index i = 0; i < m; ++i) {
        // Distinct, deterministic, increasing offsets.
        const Scalar offset = options.perturbation * scale * (Scalar(1) + Scalar(i) / Scalar(m));
        T(i, rhs)           = b[i] + offset;
    }

    std::vector<Eigen::Index> nonbasic(static_cast<std::size_t>(n));
    std::vector<Eigen::Index> basic(static_cast<std::size_t>(m));
    std::iota(nonbasic.begin(), nonbasic.end(), Eigen::Index{0});
    std::iota(basic.begin(), basic.end(), n);

    LpSolution<Scalar> result;
    VectorX column(m + 1);
    RowVector row(n + 2);
    while (true) {
        Eigen::Index q = -1;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (T(m, j) < -tol && (q < 0 || nonbasic[j] < nonbasic[q])) {
                q = j;
            }
        }
        if (q < 0) {
            result.status = LpStatus::optimal;
            break;
        }

        Scalar best = std::numeric_limits<Scalar>::infinity();
        for (Eigen::Index i = 0; i < m; ++i) {
            if (T(i, q) > tol) {
                best = std::min(best, T(i, rhs) / T(i, q));
            }
        }
        Eigen::Index p = -1;
        if (best < std::numeric_limits<Scalar>::infinity()) {
            const Scalar band =
                best + Scalar(64) * std::numeric_limits<Scalar>::epsilon() * (Scalar(1) + std::abs(best));
            for (Eigen::Index i = 0; i < m; ++i) {
                if (T(i, q) > tol && T(i, rhs) / T(i, q) <= band && (p < 0 || basic[i] < basic[p])) {
                    p = i;
                }
            }
        }
        if (p < 0) {
            result.status = LpStatus::unbounded;
            break;
        }
        if (result.pivots >= options.max_pivots) {
            result.status = LpStatus::pivot_limit;
            break;
        }

        const Scalar pivot = T(p, q);
        column             = T.col(q);
        row                = T.row(p) / pivot;
        T.noalias() -= column * row;
        T.row(p) = row;
        T.col(q) = -column / pivot;
        T(p, q)  = Scalar(1) / pivot;
        for (Eigen::Index i = 0; i < m; ++i) {
            T(i, rhs) = std::max(T(i, rhs), Scalar(0));
        }
        std::swap(basic[p], nonbasic[q]);
        ++result.pivots;
    }

    result.x = VectorX::Zero(n);
    for (Eigen::Index i = 0; i < m; ++i) {
        if (basic[i] < n) {
            result.x[basic[i]] = std::max(T(i, orig), Scalar(0));
        }
        if (result.status == LpStatus::optimal && T(i, orig) < -std::sqrt(tol)) {
            result.status = LpStatus::infeasible_basis;
        }
    }
    result.dual = VectorX::Zero(m);
    for (Eigen::Index j = 0; j < n; ++j) {
        if (nonbasic[j] >= n) {
            result.dual[nonbasic[j] - n] = T(m, j);
        }
    }
    result.objective = c.dot(result.x);
    return result;
}

} // namespace mtd

#endif // MTD_SIMPLEX_HPP
