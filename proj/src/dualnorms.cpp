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
#include "mtd/dualnorms.hpp"

#include "mtd/fields.hpp"
#include "mtd/simplex.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace mtd
{

namespace
{

constexpr std::size_t max_generation_rounds = 200;

void require_one_dimensional(int dim, const char* what)
{
    if (dim != 1) {
        throw std::invalid_argument(std::string(what) +
                                    ": exact node LPs need a 1-d support; use holder_dual_lower in higher dimension");
    }
}

void require_alpha(double alpha)
{
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("Hoelder exponent must lie in (0, 1]");
    }
}

struct GenerationResult {
    Vector x;
    double primal    = 0.0;
    double certified = 0.0;
    std::size_t pivots = 0;
    std::size_t rounds = 0;
};

// Weak duality: for y >= 0 and 0 <= x <= x_max feasible,
// c^T x <= b^T y + sum_j max(0, c_j - (A^T y)_j) x_max_j.
double dual_bound(const Matrix& A, const Vector& b, const Vector& c, const Vector& y, const Vector& x_max)
{
    using LD      = long double;
    LD bound      = 0.0L;
    const auto yl = y.cwiseMax(0.0).cast<LD>().eval();
    bound += (b.cast<LD>().array() * yl.array()).sum();
    const auto reduced = (c.cast<LD>() - A.cast<LD>().transpose() * yl).eval();
    for (Eigen::Index j = 0; j < c.size(); ++j) {
        bound += std::max(reduced[j], 0.0L) * static_cast<LD>(x_max[j]);
    }
    return static_cast<double>(bound);
}

template <typename Scalar>
void solve_round(const Matrix& A, const Vector& b, const Vector& c, double tol, Vector& x, Vector& y,
                 std::size_t& pivots, bool& settled)
{
    SimplexOptions<Scalar> options;
    options.tolerance = static_cast<Scalar>(tol);
    const auto sol    = maximize<Scalar>(A.cast<Scalar>(), b.cast<Scalar>(), c.cast<Scalar>(), options);
    if (sol.status == LpStatus::unbounded) {
        throw std::logic_error("norm LP reported unbounded; the feasible set is compact");
    }
    x = sol.x.template cast<double>();
    y = sol.dual.template cast<double>();
    pivots += sol.pivots;
    settled = sol.status == LpStatus::optimal;
}

// Maximizes objective^T x under the base rows plus every pair row, adding pair
// rows lazily. The returned point satisfies all pair rows up to 10 tol; the
// certified value is a dual bound for a relaxation, hence for the full program.
// A double solve whose primal and dual values disagree is repeated in long double.
template <class PairRows, class Violation>
GenerationResult solve_with_pair_generation(std::size_t n, const Matrix& base, const Vector& base_rhs,
                                            const Vector& objective, const Vector& x_max,
                                            Eigen::Index rows_per_pair, PairRows&& pair_rows,
                                            Violation&& violation, std::size_t radius, double tol)
{
    std::vector<std::pair<std::size_t, std::size_t>> active;
    std::vector<char> seen(n * n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t r = 1; r <= radius && k + r < n; ++r) {
            active.emplace_back(k, k + r);
            seen[k * n + k + r] = 1;
        }
    }

    const Eigen::Index vars = objective.size();
    GenerationResult out;
    for (out.rounds = 1; out.rounds <= max_generation_rounds; ++out.rounds) {
        const Eigen::Index rows = base.rows() + rows_per_pair * static_cast<Eigen::Index>(active.size());
        Matrix A = Matrix::Zero(rows, vars);
        Vector b(rows);
        A.topRows(base.rows()) = base;
        b.head(base.rows())    = base_rhs;
        Eigen::Index row       = base.rows();
        for (const auto& [k, l] : active) {
            pair_rows(k, l, A, b, row);
            row += rows_per_pair;
        }

        Vector x, y;
        bool settled = false;
        solve_round<double>(A, b, objective, tol, x, y, out.pivots, settled);
        const double slack = 1e-9 * (1.0 + objective.cwiseAbs().sum());
        double primal      = objective.dot(x);
        double certified   = dual_bound(A, b, objective, y, x_max);
        if (!settled || certified - primal > slack) {
            solve_round<long double>(A, b, objective, tol, x, y, out.pivots, settled);
            primal    = objective.dot(x);
            certified = dual_bound(A, b, objective, y, x_max);
            if (!settled || certified - primal > slack) {
                throw std::runtime_error("norm LP: primal and dual values disagree beyond tolerance");
            }
        }
        out.x         = x;
        out.primal    = primal;
        out.certified = certified;

        // At most one new pair per node and round keeps the tableau small.
        bool added = false;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t worst = n;
            double excess     = 10.0 * tol;
            for (std::size_t l = k + 1; l < n; ++l) {
                if (!seen[k * n + l]) {
                    const double v = violation(x, k, l);
                    if (v > excess) {
                        excess = v;
                        worst  = l;
                    }
                }
            }
            if (worst < n) {
                seen[k * n + worst] = 1;
                active.emplace_back(k, worst);
                added = true;
            }
        }
        if (!added) {
            return out;
        }
    }
    throw std::runtime_error("norm LP constraint generation did not settle");
}

struct Nodes {
    std::vector<double> x;
    std::vector<double> density;
    std::vector<double> dipole;
};

Nodes collect_nodes(const FirstOrderFunctional& f, std::size_t aux, double margin)
{
    Nodes nodes;
    for (std::size_t i = 0; i < f.size(); ++i) {
        nodes.x.push_back(f.points()[i][0]);
        nodes.density.push_back(f.densities()[i]);
        nodes.dipole.push_back(f.dipoles()[i][0]);
    }
    if (aux >= 2 && !nodes.x.empty()) {
        const auto [lo_it, hi_it] = std::minmax_element(nodes.x.begin(), nodes.x.end());
        const double lo           = *lo_it - margin;
        const double hi           = *hi_it + margin;
        const std::size_t support = nodes.x.size();
        for (std::size_t j = 0; j < aux; ++j) {
            const double x = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(aux - 1);
            bool taken     = false;
            for (std::size_t i = 0; i < support; ++i) {
                taken = taken || std::abs(nodes.x[i] - x) <= merge_tolerance;
            }
            if (!taken) {
                nodes.x.push_back(x);
                nodes.density.push_back(0.0);
                nodes.dipole.push_back(0.0);
            }
        }
    }

    std::vector<std::size_t> order(nodes.x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return nodes.x[i] < nodes.x[j];
    });
    Nodes sorted;
    for (std::size_t i : order) {
        sorted.x.push_back(nodes.x[i]);
        sorted.density.push_back(nodes.density[i]);
        sorted.dipole.push_back(nodes.dipole[i]);
    }
    return sorted;
}

double gaussian_budget(double width, double alpha)
{
    const double s1 = 1.0 / (width * std::sqrt(std::exp(1.0)));
    return 1.0 + s1 + interpolated_holder(s1, 1.0 / (width * width), alpha);
}

// max |(u^3 - 3u) exp(-u^2/2)|, attained at u^2 = 3 - sqrt(6).
double odd_gaussian_curvature()
{
    const double u2 = 3.0 - std::sqrt(6.0);
    return std::sqrt(u2) * std::sqrt(6.0) * std::exp(-0.5 * u2);
}

double odd_gaussian_budget(double width, double alpha)
{
    const double s1 = 1.0 / width;
    return std::exp(-0.5) + s1 + interpolated_holder(s1, odd_gaussian_curvature() / (width * width), alpha);
}

double sinusoid_budget(double k, double alpha)
{
    return 1.0 + k + interpolated_holder(k, k * k, alpha);
}

class FamilySearch
{
public:
    FamilySearch(const FirstOrderFunctional& f, double alpha)
        : m_f(f)
        , m_alpha(alpha)
    {
    }

    double run()
    {
        const std::size_t n = m_f.size();
        if (n == 0) {
            return 0.0;
        }
        const int dim = m_f.dim();

        consider(std::abs(std::accumulate(m_f.densities().begin(), m_f.densities().end(), 0.0)), 1.0);

        PointList centers = m_f.points();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            centers.emplace_back(0.5 * (m_f.points()[i] + m_f.points()[i + 1]));
        }
        Vector centroid = Vector::Zero(dim);
        for (const auto& x : m_f.points()) {
            centroid += x / static_cast<double>(n);
        }
        centers.push_back(centroid);

        const PointList directions = search_directions();
        const std::vector<double> widths = geometric(-24, 24, std::sqrt(2.0));

        for (double w : widths) {
            const double gb = gaussian_budget(w, m_alpha);
            const double ob = odd_gaussian_budget(w, m_alpha);
            for (const auto& m : centers) {
                consider(std::abs(gaussian(m, w)), gb);
                for (const auto& e : directions) {
                    consider(std::abs(odd_gaussian(m, e, w)), ob);
                }
            }
            if (n <= 24) {
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = i + 1; j < n; ++j) {
                        consider(std::abs(gaussian(m_f.points()[i], w) - gaussian(m_f.points()[j], w)), 2.0 * gb);
                    }
                }
            }
        }

        for (double k : geometric(-40, 60, std::sqrt(std::sqrt(2.0)))) {
            const double sb = sinusoid_budget(k, m_alpha);
            for (const auto& e : directions) {
                consider(sinusoid(e, k), sb);
            }
        }
        return m_best;
    }

private:
    static std::vector<double> geometric(int lo, int hi, double ratio)
    {
        std::vector<double> out;
        for (int j = lo; j <= hi; ++j) {
            out.push_back(std::pow(ratio, j));
        }
        return out;
    }

    PointList search_directions() const
    {
        const int dim = m_f.dim();
        PointList out;
        for (int j = 0; j < dim; ++j) {
            out.emplace_back(Vector::Unit(dim, j));
        }
        if (dim == 1) {
            return out;
        }
        const std::size_t m = std::min<std::size_t>(m_f.size(), 8);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                const Vector diff = m_f.points()[j] - m_f.points()[i];
                if (diff.norm() > 0.0) {
                    out.emplace_back(diff.normalized());
                }
            }
            if (m_f.dipoles()[i].norm() > 0.0) {
                out.emplace_back(m_f.dipoles()[i].normalized());
            }
        }
        return out;
    }

    void consider(double value, double budget)
    {
        if (std::isfinite(value) && budget > 0.0) {
            m_best = std::max(m_best, value / budget);
        }
    }

    double gaussian(const Vector& m, double w) const
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < m_f.size(); ++i) {
            const Vector r = m_f.points()[i] - m;
            const double g = std::exp(-r.squaredNorm() / (2.0 * w * w));
            sum += m_f.densities()[i] * g - m_f.dipoles()[i].dot(r) * g / (w * w);
        }
        return sum;
    }

    double odd_gaussian(const Vector& m, const Vector& e, double w) const
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < m_f.size(); ++i) {
            const double u = e.dot(m_f.points()[i] - m) / w;
            const double g = std::exp(-0.5 * u * u);
            sum += m_f.densities()[i] * u * g + m_f.dipoles()[i].dot(e) * (1.0 - u * u) * g / w;
        }
        return sum;
    }

    // sup over the phase of <sin(k e.x + phase), F> = |sum (s + i k v.e) exp(i k e.x)|.
    double sinusoid(const Vector& e, double k) const
    {
        std::complex<double> z{0.0, 0.0};
        for (std::size_t i = 0; i < m_f.size(); ++i) {
            const std::complex<double> coef{m_f.densities()[i], k * m_f.dipoles()[i].dot(e)};
            z += coef * std::polar(1.0, k * e.dot(m_f.points()[i]));
        }
        return std::abs(z);
    }

    const FirstOrderFunctional& m_f;
    double m_alpha;
    double m_best = 0.0;
};

} // namespace

std::string_view to_string(FlatConvention convention)
{
    return convention == FlatConvention::max ? "max" : "sum";
}

NormResult flat_norm(const DiscreteMeasure& nu, FlatConvention convention, double tolerance)
{
    require_one_dimensional(nu.dim(), "flat_norm");
    const DiscreteMeasure canon = canonicalize(nu);
    NormResult result;
    result.convention = std::string(to_string(convention));
    const std::size_t n = canon.size();
    if (n == 0) {
        return result;
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = canon.point(i)[0];
    }
    const double total = canon.mass();

    GenerationResult gen;
    if (convention == FlatConvention::max) {
        // f = u - 1, u in [0, 2], |u_k - u_l| <= |x_k - x_l|
        const Matrix base    = Matrix::Identity(n, n);
        const Vector rhs     = Vector::Constant(n, 2.0);
        const Vector weights = Eigen::Map<const Vector>(canon.weights().data(), n);
        gen                  = solve_with_pair_generation(
            n, base, rhs, weights, Vector::Constant(n, 2.0), 2,
            [&](std::size_t k, std::size_t l, Matrix& A, Vector& b, Eigen::Index row) {
                const double d = x[l] - x[k];
                A(row, k)      = 1.0;
                A(row, l)      = -1.0;
                A(row + 1, k)  = -1.0;
                A(row + 1, l)  = 1.0;
                b[row]         = d;
                b[row + 1]     = d;
            },
            [&](const Vector& u, std::size_t k, std::size_t l) {
                return std::abs(u[k] - u[l]) - (x[l] - x[k]);
            },
            1, tolerance);
        result.upper = gen.certified - total;
        result.lower = gen.primal - total;
        for (std::size_t k = 0; k < n; ++k) {
            result.values.push_back(gen.x[k] - 1.0);
        }
        result.budget_value    = 1.0;
        result.budget_gradient = 1.0;
    } else {
        // f = p - a, p in [0, 2a], Lip(f) <= L, a + L <= 1
        const auto ia = static_cast<Eigen::Index>(n);
        const auto il = ia + 1;
        Matrix base   = Matrix::Zero(n + 1, n + 2);
        Vector rhs    = Vector::Zero(n + 1);
        for (std::size_t k = 0; k < n; ++k) {
            base(k, k)  = 1.0;
            base(k, ia) = -2.0;
        }
        base(ia, ia) = 1.0;
        base(ia, il) = 1.0;
        rhs[ia]      = 1.0;
        Vector objective(n + 2);
        objective.head(n) = Eigen::Map<const Vector>(canon.weights().data(), n);
        objective[ia]     = -total;
        objective[il]     = 0.0;
        Vector x_max      = Vector::Ones(n + 2);
        x_max.head(n).setConstant(2.0);
        gen               = solve_with_pair_generation(
            n, base, rhs, objective, x_max, 2,
            [&](std::size_t k, std::size_t l, Matrix& A, Vector& b, Eigen::Index row) {
                const double d = x[l] - x[k];
                A(row, k)      = 1.0;
                A(row, l)      = -1.0;
                A(row, il)     = -d;
                A(row + 1, k)  = -1.0;
                A(row + 1, l)  = 1.0;
                A(row + 1, il) = -d;
                b[row]         = 0.0;
                b[row + 1]     = 0.0;
            },
            [&](const Vector& p, std::size_t k, std::size_t l) {
                return std::abs(p[k] - p[l]) - p[il] * (x[l] - x[k]);
            },
            1, tolerance);
        result.upper = gen.certified;
        result.lower = gen.primal;
        for (std::size_t k = 0; k < n; ++k) {
            result.values.push_back(gen.x[k] - gen.x[ia]);
        }
        result.budget_value    = gen.x[ia];
        result.budget_gradient = gen.x[il];
    }
    result.upper  = std::max(result.upper, 0.0);
    result.lower  = std::clamp(result.lower, 0.0, result.upper);
    result.nodes  = x;
    result.pivots = gen.pivots;
    result.rounds = gen.rounds;
    return result;
}

double flat_metric(const DiscreteMeasure& mu, const DiscreteMeasure& nu, FlatConvention convention)
{
    require_one_dimensional(mu.dim(), "flat_metric");
    require_one_dimensional(nu.dim(), "flat_metric");
    return flat_norm(linear_combine(1.0, mu, -1.0, nu), convention).upper;
}

NormResult holder_dual_upper(const FirstOrderFunctional& f, const NormOptions& options)
{
    require_alpha(options.alpha);
    require_one_dimensional(f.dim(), "holder_dual_upper");
    const FirstOrderFunctional canon = canonicalize(f);

    NormResult result;
    result.convention = "holder";
    result.alpha      = options.alpha;
    if (canon.size() == 0) {
        return result;
    }

    const Nodes nodes   = collect_nodes(canon, options.aux_nodes, options.aux_margin);
    const std::size_t n = nodes.x.size();
    if (n > options.node_cap) {
        throw std::length_error("holder_dual_upper: " + std::to_string(n) + " nodes exceed the node cap of " +
                                std::to_string(options.node_cap));
    }

    // f = p - a with p in [0, 2a]; g = q - b with q in [0, 2b]; a + b + c <= 1
    const auto sn = static_cast<Eigen::Index>(n);
    const Eigen::Index ia = 2 * sn;
    const Eigen::Index ib = ia + 1;
    const Eigen::Index ic = ia + 2;
    Matrix base           = Matrix::Zero(2 * sn + 1, 2 * sn + 3);
    Vector rhs            = Vector::Zero(2 * sn + 1);
    for (Eigen::Index k = 0; k < sn; ++k) {
        base(k, k)           = 1.0;
        base(k, ia)          = -2.0;
        base(sn + k, sn + k) = 1.0;
        base(sn + k, ib)     = -2.0;
    }
    base(2 * sn, ia) = 1.0;
    base(2 * sn, ib) = 1.0;
    base(2 * sn, ic) = 1.0;
    rhs[2 * sn]      = 1.0;

    Vector objective = Vector::Zero(2 * sn + 3);
    for (Eigen::Index k = 0; k < sn; ++k) {
        objective[k]      = nodes.density[k];
        objective[sn + k] = nodes.dipole[k];
    }
    objective[ia] = -std::accumulate(nodes.density.begin(), nodes.density.end(), 0.0);
    objective[ib] = -std::accumulate(nodes.dipole.begin(), nodes.dipole.end(), 0.0);

    Vector x_max = Vector::Constant(2 * sn + 3, 2.0);
    x_max.tail(3).setOnes();

    const double alpha = options.alpha;
    auto holder        = [&](double d) {
        return std::pow(d, alpha);
    };
    auto taylor = [&](double d) {
        return std::pow(d, 1.0 + alpha) / (1.0 + alpha);
    };

    const GenerationResult gen = solve_with_pair_generation(
        n, base, rhs, objective, x_max, 6,
        [&](std::size_t k, std::size_t l, Matrix& A, Vector& b, Eigen::Index row) {
            const double d   = nodes.x[l] - nodes.x[k];
            const double hd  = holder(d);
            const double td  = taylor(d);
            const auto pk    = static_cast<Eigen::Index>(k);
            const auto pl    = static_cast<Eigen::Index>(l);
            const auto qk    = sn + pk;
            const auto ql    = sn + pl;
            // |g_k - g_l| <= c d^a
            A(row, qk)       = 1.0;
            A(row, ql)       = -1.0;
            A(row, ic)       = -hd;
            A(row + 1, qk)   = -1.0;
            A(row + 1, ql)   = 1.0;
            A(row + 1, ic)   = -hd;
            // |f_l - f_k - g_k d| <= c d^{1+a}/(1+a)
            A(row + 2, pl)   = 1.0;
            A(row + 2, pk)   = -1.0;
            A(row + 2, qk)   = -d;
            A(row + 2, ib)   = d;
            A(row + 2, ic)   = -td;
            A(row + 3, pl)   = -1.0;
            A(row + 3, pk)   = 1.0;
            A(row + 3, qk)   = d;
            A(row + 3, ib)   = -d;
            A(row + 3, ic)   = -td;
            // |f_k - f_l + g_l d| <= c d^{1+a}/(1+a)
            A(row + 4, pk)   = 1.0;
            A(row + 4, pl)   = -1.0;
            A(row + 4, ql)   = d;
            A(row + 4, ib)   = -d;
            A(row + 4, ic)   = -td;
            A(row + 5, pk)   = -1.0;
            A(row + 5, pl)   = 1.0;
            A(row + 5, ql)   = -d;
            A(row + 5, ib)   = d;
            A(row + 5, ic)   = -td;
            b.segment(row, 6).setZero();
        },
        [&](const Vector& v, std::size_t k, std::size_t l) {
            const double d  = nodes.x[l] - nodes.x[k];
            const double c  = v[ic];
            const double fk = v[k] - v[ia];
            const double fl = v[l] - v[ia];
            const double gk = v[sn + k] - v[ib];
            const double gl = v[sn + l] - v[ib];
            const double h  = std::abs(gk - gl) - c * holder(d);
            const double t1 = std::abs(fl - fk - gk * d) - c * taylor(d);
            const double t2 = std::abs(fk - fl + gl * d) - c * taylor(d);
            return std::max({h, t1, t2});
        },
        2, options.tolerance);

    const Vector& v        = gen.x;
    result.upper           = std::max(gen.certified, 0.0);
    result.nodes           = nodes.x;
    result.budget_value    = v[ia];
    result.budget_gradient = v[ib];
    result.budget_holder   = v[ic];
    for (Eigen::Index k = 0; k < sn; ++k) {
        result.values.push_back(v[k] - v[ia]);
        result.gradients.push_back(v[sn + k] - v[ib]);
    }
    result.pivots = gen.pivots;
    result.rounds = gen.rounds;
    return result;
}

NormResult holder_dual_upper(const DiscreteMeasure& nu, const NormOptions& options)
{
    return holder_dual_upper(FirstOrderFunctional(nu), options);
}

double holder_dual_lower(const FirstOrderFunctional& f, double alpha)
{
    require_alpha(alpha);
    const FirstOrderFunctional canon = canonicalize(f);
    return FamilySearch(canon, alpha).run();
}

double holder_dual_lower(const DiscreteMeasure& nu, double alpha)
{
    return holder_dual_lower(FirstOrderFunctional(nu), alpha);
}

NormResult holder_dual_norm(const FirstOrderFunctional& f, const NormOptions& options)
{
    NormResult result = holder_dual_upper(f, options);
    result.lower      = holder_dual_lower(f, options.alpha);
    return result;
}

DiscreteMeasure quotient_difference(const TransportProblem& problem, double h1, double h2)
{
    if (h1 == 0.0 || h2 == 0.0 || h1 == h2) {
        throw std::invalid_argument("cauchy_gap: need h1 != 0, h2 != 0 and h1 != h2");
    }
    const DiscreteMeasure base = solve_terminal(problem, 0.0);
    const DiscreteMeasure q1   = linear_combine(1.0 / h1, solve_terminal(problem, h1), -1.0 / h1, base);
    const DiscreteMeasure q2   = linear_combine(1.0 / h2, solve_terminal(problem, h2), -1.0 / h2, base);
    return canonicalize(linear_combine(1.0, q1, -1.0, q2));
}

CauchyGap cauchy_gap(const TransportProblem& problem, double h1, double h2, const NormOptions& options,
                     bool with_lower)
{
    const DiscreteMeasure q = quotient_difference(problem, h1, h2);
    CauchyGap gap;
    gap.h1    = h1;
    gap.h2    = h2;
    gap.upper = holder_dual_upper(q, options).upper;
    gap.lower = with_lower ? holder_dual_lower(q, options.alpha) : 0.0;
    if (q.dim() == 1) {
        gap.flat     = flat_norm(q, FlatConvention::max, options.tolerance).upper;
        gap.flat_sum = flat_norm(q, FlatConvention::sum, options.tolerance).upper;
    }
    return gap;
}

double loglog_slope(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("loglog_slope: need at least two matching samples");
    }
    const auto n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace mtd
