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
#ifndef MTD_CONFIG_HPP
#define MTD_CONFIG_HPP

#include "mtd/control.hpp"
#include "mtd/dualnorms.hpp"
#include "mtd/flow.hpp"
#include "mtd/io.hpp"
#include "mtd/measures.hpp"
#include "mtd/pushforward.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mtd
{

enum class ExperimentKind
{
    counterexample,
    cauchy_rate,
    quotient_convergence,
    dirac_curve,
    dirac_approx,
    weak_residual,
    control,
};

std::string_view to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment_kind(std::string_view name);
const std::vector<ExperimentKind>& all_experiment_kinds();

/// Catalog systems with their default initial measures.
struct NamedSystem {
    FlowSystem system;
    DiscreteMeasure mu0;
};

const std::vector<std::string>& system_names();
std::optional<NamedSystem> named_system(std::string_view name);

/// Field terms from JSON objects {"kind": ..., parameters..., "time": ...}.
AnalyticField field_from_json(const Json& terms, int input_dim, int output_dim);
Json field_to_json(const AnalyticField& field);

struct NormKnobs {
    std::size_t node_cap  = 400;
    std::size_t aux_nodes = 0;
    double aux_margin     = 1.0;
    double tolerance      = 1e-10;
};

struct CounterexampleKnobs {
    int k_min                 = 2;
    int k_max                 = 7;
    int lipschitz_samples     = 50;
    double h_range            = 0.5;
    double t_max              = 2.0;
};

struct CauchyRateKnobs {
    std::vector<double> alphas = {0.25, 0.5, 1.0};
    int k_min                  = 2;
    int k_max                  = 7;
    /// Explicit (h1, h2) pairs; empty means the ladder (2^-k, -2^-k).
    std::vector<std::pair<double, double>> h_pairs;
    double slope_margin = 0.1;
};

struct QuotientKnobs {
    double h                    = 0.0;
    std::vector<double> lambdas = {0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125,
                                   -0.25, -0.125, -0.0625, -0.03125, -0.015625, -0.0078125};
    double slope_margin         = 0.1;
};

struct DiracCurveKnobs {
    double x                           = 0.3;
    std::vector<double> lambdas        = {0.1, 0.01, 0.001, -0.1, -0.01, -0.001};
    std::vector<double> pair_distances = {0.5, 0.1};
    int random_pairs                   = 20;
    double pair_range                  = 2.0;
    double slack                       = 1e-6;
};

struct DiracApproxKnobs {
    std::vector<double> epsilons = {0.1, 0.01};
    int samples                  = 1000;
    int max_atoms                = 8;
    double support               = 5.0;
    double max_weight            = 1.25;
};

struct WeakResidualKnobs {
    std::vector<int> steps_ladder = {128, 256, 512};
    int check_steps               = 256;
    double decay_end              = 0.75;
    double bump_start             = 0.25;
    double bump_end               = 0.75;
    double tolerance              = 1e-4;
    double min_order              = 1.9;
    double corruption             = 0.1;
    double min_ratio              = 10.0;
};

struct ControlKnobs {
    Json K = Json{{"kind", "gaussian_bump"}, {"amplitude", 1.0}, {"center", 1.2}, {"width", 1.0}};
    std::string gamma = "quadratic";
    /// Quadratic target; unset means K evaluated at target_point.
    std::optional<double> target;
    double target_point           = 1.2;
    double steepness              = 1.0;
    double midpoint               = 0.0;
    std::vector<double> starts    = {-0.3, -0.45, 0.0, 0.35, 0.5};
    std::vector<double> fd_points = {-0.4, -0.2, 0.0, 0.2, 0.4};
    double fd_step                = 1e-5;
    double fd_tolerance           = 1e-5;
    double tol                    = 1e-14;
    int max_iter                  = 500;
    double h_min                  = -0.5;
    double h_max                  = 0.5;
    double grid_coarse            = 1e-3;
    double grid_fine              = 1e-5;
    /// Require every start to reach the grid oracle's global minimizer.
    bool require_global           = true;
    double oracle_tolerance       = 1e-4;
    double gradient_tolerance     = 1e-8;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::counterexample;
    /// Catalog name, or "custom" with terms in system_terms.
    std::string system_name = "counterexample";
    Json system_terms;
    std::optional<DiscreteMeasure> measure;
    double alpha = 0.5;
    double t_end = 1.0;
    int steps    = 256;
    NormKnobs norm;
    std::uint64_t seed = 20260101;
    std::string output = "out";

    CounterexampleKnobs counterexample;
    CauchyRateKnobs cauchy_rate;
    QuotientKnobs quotient_convergence;
    DiracCurveKnobs dirac_curve;
    DiracApproxKnobs dirac_approx;
    WeakResidualKnobs weak_residual;
    ControlKnobs control;

    FlowSystem system() const;
    DiscreteMeasure initial_measure() const;
    TransportProblem problem() const;
    NormOptions norm_options() const;
};

struct ParseResult {
    std::optional<ExperimentConfig> config;
    std::vector<std::string> errors;

    bool ok() const
    {
        return config.has_value();
    }
};

/// JSON with // and /* */ comments; unknown keys are errors; every error is reported.
ParseResult parse_config(std::string_view text);
ParseResult parse_config(const Json& document);
inline ParseResult parse_config(const std::string& text)
{
    return parse_config(std::string_view(text));
}
inline ParseResult parse_config(const char* text)
{
    return parse_config(std::string_view(text));
}

/// Fully resolved document; parse_config(to_json(c)) reproduces c.
Json to_json(const ExperimentConfig& config);

/// Scalar catalog function from a single term object.
TestFunction test_function_from_json(const Json& term, int dim);

} // namespace mtd

#endif // MTD_CONFIG_HPP
