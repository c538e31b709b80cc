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
#ifndef MTD_CONTROL_HPP
#define MTD_CONTROL_HPP

#include "mtd/fields.hpp"
#include "mtd/pushforward.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace mtd
{

enum class GammaKind
{
    identity,
    quadratic,
    logistic,
};

std::string_view to_string(GammaKind kind);
std::optional<GammaKind> parse_gamma_kind(std::string_view name);

/// Outer scalar map: s, (s - target)^2, or 1/(1 + exp(-steepness (s - midpoint))).
struct Gamma {
    GammaKind kind   = GammaKind::identity;
    double target    = 0.0;
    double steepness = 1.0;
    double midpoint  = 0.0;

    static Gamma identity();
    static Gamma quadratic(double target);
    static Gamma logistic(double steepness, double midpoint);

    double value(double s) const;
    double derivative(double s) const;
};

struct ObjectiveSpec {
    TestFunction K;
    Gamma gamma;
    TransportProblem problem;
    double h_min = -0.5;
    double h_max = 0.5;

    void validate() const;
};

struct ObjectiveValue {
    double h         = 0.0;
    double pairing   = 0.0;
    double objective = 0.0;
    double gradient  = 0.0;
};

/// gamma(<K, mu^h>).
double evaluate_objective(const ObjectiveSpec& spec, double h);
/// gamma'(<K, mu^h>) <K, d_h mu^h>, with the derivative taken as a first-order functional.
double objective_gradient(const ObjectiveSpec& spec, double h);
/// Both from a single trajectory solve.
ObjectiveValue objective_and_gradient(const ObjectiveSpec& spec, double h);

struct MinimizeOptions {
    double tol            = 1e-8;
    int max_iter          = 200;
    double armijo         = 1e-4;
    double shrink         = 0.5;
    double initial_step   = 1.0;
    int max_backtracks    = 60;
};

struct TraceRow {
    int iter         = 0;
    double h         = 0.0;
    double objective = 0.0;
    double gradient  = 0.0;
    double step      = 0.0;
};

struct MinimizeResult {
    double h_star       = 0.0;
    double grad_at_star = 0.0;
    double objective    = 0.0;
    bool converged      = false;
    int iterations      = 0;
    std::vector<TraceRow> trace;
};

/// Zero when a bound is active and the gradient points out of the box.
double projected_gradient(const ObjectiveSpec& spec, double h, double gradient);

/**
 * Projected gradient descent on h in [h_min, h_max] with Armijo backtracking.
 * The first trial step is options.initial_step, later ones the Barzilai-Borwein
 * ratio |dh/dg|. Stops when the projected gradient is at most tol; running out
 * of iterations or backtracks yields converged = false.
 */
MinimizeResult minimize(const ObjectiveSpec& spec, double h0, const MinimizeOptions& options = {});

struct GridOptimum {
    double h         = 0.0;
    double objective = 0.0;
};

/// Exhaustive search: a coarse grid over the box, then a fine grid around its best point.
GridOptimum grid_search(const ObjectiveSpec& spec, double coarse = 1e-3, double fine = 1e-5);
/// Best grid point within [lo, hi] on a single resolution.
GridOptimum grid_search(const ObjectiveSpec& spec, double lo, double hi, double resolution);

} // namespace mtd

#endif // MTD_CONTROL_HPP
