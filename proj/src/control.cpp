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
#include "mtd/control.hpp"

#include "mtd/parallel.hpp"
#include "mtd/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mtd
{

std::string_view to_string(GammaKind kind)
{
    switch (kind) {
    case GammaKind::identity:
        return "identity";
    case GammaKind::quadratic:
        return "quadratic";
    case GammaKind::logistic:
        return "logistic";
    }
    return "identity";
}

std::optional<GammaKind> parse_gamma_kind(std::string_view name)
{
    for (GammaKind kind : {GammaKind::identity, GammaKind::quadratic, GammaKind::logistic}) {
        if (name == to_string(kind)) {
            return kind;
        }
    }
    return std::nullopt;
}

Gamma Gamma::identity()
{
    return Gamma{};
}

Gamma Gamma::quadratic(double target)
{
    Gamma g;
    g.kind   = GammaKind::quadratic;
    g.target = target;
    return g;
}

Gamma Gamma::logistic(double steepness, double midpoint)
{
    Gamma g;
    g.kind      = GammaKind::logistic;
    g.steepness = steepness;
    g.midpoint  = midpoint;
    return g;
}

double Gamma::value(double s) const
{
    switch (kind) {
    case GammaKind::identity:
        return s;
    case GammaKind::quadratic:
        return (s - target) * (s - target);
    case GammaKind::logistic:
        return 1.0 / (1.0 + std::exp(-steepness * (s - midpoint)));
    }
    return s;
}

double Gamma::derivative(double s) const
{
    switch (kind) {
    case GammaKind::identity:
        return 1.0;
    case GammaKind::quadratic:
        return 2.0 * (s - target);
    case GammaKind::logistic: {
        const double v = value(s);
        return steepness * v * (1.0 - v);
    }
    }
    return 1.0;
}

void ObjectiveSpec::validate() const
{
    if (!K.is_smooth()) {
        throw std::invalid_argument("ObjectiveSpec: K must be a smooth catalog function");
    }
    if (K.dim() != problem.mu0.dim()) {
        throw std::invalid_argument("ObjectiveSpec: K and the initial measure differ in dimension");
    }
    if (!(h_min < h_max)) {
        throw std::invalid_argument("ObjectiveSpec: need h_min < h_max");
    }
    problem.system.validate();
}

namespace
{

void require_in_box(const ObjectiveSpec& spec, double h)
{
    if (!(h >= spec.h_min && h <= spec.h_max)) {
        throw std::out_of_range("control: h = " + std::to_string(h) + " lies outside the admissible interval");
    }
}

double pairing(const ObjectiveSpec& spec, double h)
{
    return pair(solve_measure(spec.problem, h).terminal(), spec.K);
}

} // namespace

double evaluate_objective(const ObjectiveSpec& spec, double h)
{
    require_in_box(spec, h);
    return spec.gamma.value(pairing(spec, h));
}

ObjectiveValue objective_and_gradient(const ObjectiveSpec& spec, double h)
{
    require_in_box(spec, h);
    const SolutionCurve curve = solve_measure(spec.problem, h);
    ObjectiveValue out;
    out.h         = h;
    out.pairing   = pair(curve.terminal(), spec.K);
    out.objective = spec.gamma.value(out.pairing);
    out.gradient  = spec.gamma.derivative(out.pairing) * pair(derivative_functional(curve), spec.K);
    return out;
}

double objective_gradient(const ObjectiveSpec& spec, double h)
{
    return objective_and_gradient(spec, h).gradient;
}

double projected_gradient(const ObjectiveSpec& spec, double h, double gradient)
{
    if ((h <= spec.h_min && gradient > 0.0) || (h >= spec.h_max && gradient < 0.0)) {
        return 0.0;
    }
    return gradient;
}

MinimizeResult minimize(const ObjectiveSpec& spec, double h0, const MinimizeOptions& options)
{
    spec.validate();
    if (!(options.tol > 0.0)) {
        throw std::invalid_argument("minimize: tol must be positive");
    }
    if (options.max_iter < 0 || !(options.shrink > 0.0 && options.shrink < 1.0) || !(options.armijo > 0.0) ||
        !(options.initial_step > 0.0)) {
        throw std::invalid_argument("minimize: invalid line-search options");
    }

    ObjectiveValue current = objective_and_gradient(spec, h0);
    MinimizeResult result;
    result.trace.push_back(TraceRow{0, current.h, current.objective, current.gradient, 0.0});

    double previous_h = current.h;
    double previous_g = current.gradient;
    for (int iter = 1; iter <= options.max_iter + 1; ++iter) {
        if (std::abs(projected_gradient(spec, current.h, current.gradient)) <= options.tol) {
            result.converged = true;
            break;
        }
        if (iter > options.max_iter) {
            break;
        }

        double step = options.initial_step;
        if (iter > 1) {
            const double dh = current.h - previous_h;
            const double dg = current.gradient - previous_g;
            if (dh * dg > 0.0) {
                step = std::clamp(dh / dg, 1e-12, 1e12);
            }
        }

        bool accepted = false;
        ObjectiveValue trial;
        for (int k = 0; k <= options.max_backtracks; ++k) {
            const double h = std::clamp(current.h - step * current.gradient, spec.h_min, spec.h_max);
            if (h == current.h) {
                break;
            }
            trial = objective_and_gradient(spec, h);
            if (trial.objective <= current.objective + options.armijo * current.gradient * (h - current.h)) {
                accepted = true;
                break;
            }
            step *= options.shrink;
        }
        if (!accepted) {
            break;
        }

        previous_h = current.h;
        previous_g = current.gradient;
        current    = trial;
        result.iterations = iter;
        result.trace.push_back(TraceRow{iter, current.h, current.objective, current.gradient, step});
    }

    result.h_star       = current.h;
    result.grad_at_star = current.gradient;
    result.objective    = current.objective;
    return result;
}

GridOptimum grid_search(const ObjectiveSpec& spec, double lo, double hi, double resolution)
{
    if (!(resolution > 0.0) || !(lo <= hi)) {
        throw std::invalid_argument("grid_search: invalid grid");
    }
    lo                  = std::max(lo, spec.h_min);
    hi                  = std::min(hi, spec.h_max);
    const auto points   = static_cast<std::size_t>(std::floor((hi - lo) / resolution + 1e-9)) + 1;
    std::vector<double> values(points);
    parallel_for(points, [&](std::size_t i) {
        values[i] = evaluate_objective(spec, std::min(lo + static_cast<double>(i) * resolution, hi));
    });
    const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
    return GridOptimum{std::min(lo + static_cast<double>(best) * resolution, hi), values[best]};
}

GridOptimum grid_search(const ObjectiveSpec& spec, double coarse, double fine)
{
    const GridOptimum rough = grid_search(spec, spec.h_min, spec.h_max, coarse);
    return grid_search(spec, rough.h - coarse, rough.h + coarse, fine);
}

} // namespace mtd
