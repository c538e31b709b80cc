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
#include "mtd/sensitivity.hpp"

#include "mtd/parallel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mtd
{

DerivativeFunctional::DerivativeFunctional(int dim, PointList positions, PointList dipoles,
                                           std::vector<double> densities, double h, double t)
    : m_functional(dim, std::move(positions), std::move(densities), std::move(dipoles))
    , m_h(h)
    , m_t(t)
{
}

bool DerivativeFunctional::is_zero() const
{
    for (std::size_t i = 0; i < size(); ++i) {
        if (densities()[i] != 0.0 || !dipoles()[i].isZero(0.0)) {
            return false;
        }
    }
    return true;
}

DerivativeFunctional derivative_functional(const SolutionCurve& curve)
{
    const TrajectoryBundle& bundle = curve.bundle();
    const std::size_t last         = bundle.last();
    const std::size_t n            = bundle.particles();
    PointList positions, dipoles;
    std::vector<double> densities;
    positions.reserve(n);
    dipoles.reserve(n);
    densities.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double weight = curve.weight(i, last);
        positions.emplace_back(bundle.position(i, last));
        dipoles.emplace_back(weight * bundle.sensitivity(i, last));
        densities.push_back(weight * bundle.growth_sensitivity(i, last));
    }
    return DerivativeFunctional(bundle.dim(), std::move(positions), std::move(dipoles), std::move(densities),
                                bundle.h(), bundle.t_end());
}

DerivativeFunctional derivative_functional(const TransportProblem& problem, double h)
{
    return derivative_functional(solve_measure(problem, h));
}

double pair(const FirstOrderFunctional& f, const TestFunction& psi)
{
    if (!psi.is_smooth()) {
        throw std::invalid_argument("pair: the hat function is not C^{1+alpha}");
    }
    if (psi.dim() != f.dim()) {
        throw std::invalid_argument("pair: dimension mismatch");
    }
    return f.apply([&](const Vector& x) { return psi.value(x); }, [&](const Vector& x) { return psi.gradient(x); });
}

double pair(const DerivativeFunctional& d, const TestFunction& psi)
{
    return pair(d.functional(), psi);
}

double pair(const DiscreteMeasure& mu, const TestFunction& psi)
{
    if (psi.dim() != mu.dim()) {
        throw std::invalid_argument("pair: dimension mismatch");
    }
    return mu.integrate([&](const Vector& x) { return psi.value(x); });
}

std::vector<PanelEntry> default_panel(double alpha, int dim)
{
    if (dim < 1) {
        throw std::invalid_argument("default_panel: dimension must be positive");
    }
    const Vector one     = Vector::Ones(1);
    const Vector e1      = Vector::Unit(dim, 0);
    const Vector diag    = Vector::Ones(dim) / std::sqrt(static_cast<double>(dim));
    const Vector ones    = Vector::Ones(dim);
    auto sinusoid        = [&](const Vector& k, double phase) {
        return ScalarField(AnalyticField::sinusoidal(one, k, phase));
    };
    auto bump = [&](double amplitude, double center, double width) {
        return ScalarField(AnalyticField::gaussian_bump(amplitude * one, center * ones, width));
    };

    std::vector<std::pair<std::string, ScalarField>> raw = {
        {"sin_1", sinusoid(e1, 0.0)},
        {"cos_1", sinusoid(e1, 0.5 * std::numbers::pi)},
        {"sin_2_diag", sinusoid(2.0 * diag, 0.3)},
        {"sin_half", sinusoid(0.5 * e1, -0.7)},
        {"sin_3", sinusoid(3.0 * e1, 1.1)},
        {"bump_1_1", bump(1.0, 1.0, 1.0)},
        {"bump_05_05", bump(1.0, 0.5, 0.5)},
        {"bump_15_03", bump(1.0, 1.5, 0.3)},
        {"bump_0_2_neg", bump(-1.0, 0.0, 2.0)},
        {"bump_1_02", bump(1.0, 1.0, 0.2)},
        {"const_1", ScalarField::constant(1.0, dim)},
        {"bump_plus_sin", bump(1.0, 1.0, 1.0) + sinusoid(e1, 0.0)},
    };
    std::vector<PanelEntry> panel;
    panel.reserve(raw.size());
    for (auto& [id, field] : raw) {
        panel.push_back(PanelEntry{id, TestFunction(field).normalized(alpha)});
    }
    return panel;
}

DiscreteMeasure difference_quotient(const TransportProblem& problem, double h, double lambda)
{
    if (lambda == 0.0) {
        throw std::invalid_argument("difference_quotient: lambda must be nonzero");
    }
    return canonicalize(
        linear_combine(1.0 / lambda, solve_terminal(problem, h + lambda), -1.0 / lambda, solve_terminal(problem, h)));
}

TransportProblem recentered(const TransportProblem& problem, double h)
{
    TransportProblem out = problem;
    out.system           = recentered(problem.system, h);
    return out;
}

QuotientStudy quotient_convergence(const TransportProblem& problem, double h, std::span<const double> lambdas,
                                   const std::vector<PanelEntry>& panel, const NormOptions& options,
                                   bool with_cauchy)
{
    for (double lambda : lambdas) {
        if (lambda == 0.0) {
            throw std::invalid_argument("quotient_convergence: lambda entries must be nonzero");
        }
    }
    const SolutionCurve base_curve   = solve_measure(problem, h);
    const DiscreteMeasure base       = base_curve.terminal();
    const DerivativeFunctional deriv = derivative_functional(base_curve);

    std::vector<double> derivative_pairings(panel.size());
    std::vector<double> base_pairings(panel.size());
    for (std::size_t j = 0; j < panel.size(); ++j) {
        derivative_pairings[j] = pair(deriv, panel[j].psi);
        base_pairings[j]       = pair(base, panel[j].psi);
    }

    std::vector<DiscreteMeasure> moved(lambdas.size(), DiscreteMeasure(problem.mu0.dim()));
    parallel_for(lambdas.size(), [&](std::size_t i) {
        moved[i] = solve_measure(problem, h + lambdas[i]).terminal();
    });

    QuotientStudy study;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        for (std::size_t j = 0; j < panel.size(); ++j) {
            QuotientRow row;
            row.lambda             = lambdas[i];
            row.psi_id             = panel[j].id;
            row.quotient_pairing   = (pair(moved[i], panel[j].psi) - base_pairings[j]) / lambdas[i];
            row.derivative_pairing = derivative_pairings[j];
            row.gap                = std::abs(row.quotient_pairing - row.derivative_pairing);
            study.rows.push_back(row);
        }
    }

    if (with_cauchy && problem.mu0.dim() == 1 && lambdas.size() >= 2) {
        study.cauchy.resize(lambdas.size() - 1);
        parallel_for(lambdas.size() - 1, [&](std::size_t i) {
            const double l1   = lambdas[i];
            const double l2   = lambdas[i + 1];
            const auto q1     = linear_combine(1.0 / l1, moved[i], -1.0 / l1, base);
            const auto q2     = linear_combine(1.0 / l2, moved[i + 1], -1.0 / l2, base);
            const auto diff   = canonicalize(linear_combine(1.0, q1, -1.0, q2));
            CauchyGap& gap    = study.cauchy[i];
            gap.h1            = l1;
            gap.h2            = l2;
            gap.upper         = holder_dual_upper(diff, options).upper;
            gap.lower         = holder_dual_lower(diff, options.alpha);
            gap.flat          = flat_norm(diff, FlatConvention::max, options.tolerance).upper;
            gap.flat_sum      = flat_norm(diff, FlatConvention::sum, options.tolerance).upper;
        });
    }
    return study;
}

std::vector<double> max_gap_per_lambda(const QuotientStudy& study, std::span<const double> lambdas)
{
    std::vector<double> out(lambdas.size(), 0.0);
    for (const auto& row : study.rows) {
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            if (row.lambda == lambdas[i]) {
                out[i] = std::max(out[i], row.gap);
            }
        }
    }
    return out;
}

FirstOrderFunctional dirac_remainder(double x, double lambda)
{
    return FirstOrderFunctional(1, {Vector::Constant(1, x + lambda), Vector::Constant(1, x)}, {1.0, -1.0},
                                {Vector::Zero(1), Vector::Constant(1, -lambda)});
}

DiracCurveStudy dirac_curve_check(double x, std::span<const double> lambdas, double alpha,
                                  std::span<const std::pair<double, double>> pairs, const NormOptions& options)
{
    NormOptions opts = options;
    opts.alpha       = alpha;
    const auto panel = default_panel(alpha, 1);
    auto panel_sup   = [&](const FirstOrderFunctional& f) {
        double best = 0.0;
        for (const auto& entry : panel) {
            best = std::max(best, std::abs(pair(f, entry.psi)));
        }
        return best;
    };

    DiracCurveStudy study;
    for (double lambda : lambdas) {
        if (lambda == 0.0) {
            throw std::invalid_argument("dirac_curve_check: lambda entries must be nonzero");
        }
        const FirstOrderFunctional r = dirac_remainder(x, lambda);
        DiracRemainderRow row;
        row.lambda = lambda;
        row.upper  = holder_dual_upper(r, opts).upper / std::abs(lambda);
        row.panel  = panel_sup(r) / std::abs(lambda);
        row.bound  = std::pow(std::abs(lambda), alpha) / (1.0 + alpha);
        study.remainders.push_back(row);
    }
    for (const auto& [a, b] : pairs) {
        const FirstOrderFunctional d =
            linear_combine(1.0, dirac_derivative(Vector::Constant(1, a), Vector::Ones(1)), -1.0,
                           dirac_derivative(Vector::Constant(1, b), Vector::Ones(1)));
        DiracPairRow row;
        row.x     = a;
        row.y     = b;
        row.upper = holder_dual_upper(d, opts).upper;
        row.panel = panel_sup(d);
        row.bound = std::pow(std::abs(a - b), alpha);
        study.pairs.push_back(row);
    }
    return study;
}

} // namespace mtd
