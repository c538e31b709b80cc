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
#include "mtd/experiments.hpp"

#include "mtd/control.hpp"
#include "mtd/dualnorms.hpp"
#include "mtd/io.hpp"
#include "mtd/parallel.hpp"
#include "mtd/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mtd
{

bool ExperimentResult::passed() const
{
    return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

namespace
{

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Collects assertions and writes files below one output directory.
class Recorder
{
public:
    Recorder(ExperimentResult& result, std::filesystem::path dir)
        : m_result(result)
        , m_dir(std::move(dir))
    {
    }

    // NaN compares false, so an undefined value always fails.
    void at_most(const std::string& name, double value, double threshold)
    {
        m_result.assertions.push_back({name, value <= threshold, value, threshold, "<="});
    }
    void at_least(const std::string& name, double value, double threshold)
    {
        m_result.assertions.push_back({name, value >= threshold, value, threshold, ">="});
    }
    void below(const std::string& name, double value, double threshold)
    {
        m_result.assertions.push_back({name, value < threshold, value, threshold, "<"});
    }
    void above(const std::string& name, double value, double threshold)
    {
        m_result.assertions.push_back({name, value > threshold, value, threshold, ">"});
    }

    void file(const std::string& name, const std::string& content)
    {
        write_file(m_dir / name, content);
        m_result.files.push_back(name);
    }

private:
    ExperimentResult& m_result;
    std::filesystem::path m_dir;
};

std::string fmt(double x)
{
    return format_double(x);
}

/// Short label for file names, e.g. 0.25 -> "0.25".
std::string label(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

double max_of(const std::vector<double>& v)
{
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v) {
        m = std::isnan(x) ? x : std::max(m, x);
        if (std::isnan(m)) {
            return m;
        }
    }
    return m;
}

template <class Write, class Rows>
std::string to_csv(Write write, const Rows& rows)
{
    std::ostringstream os;
    write(os, std::span(rows));
    return os.str();
}

TransportProblem with_horizon(TransportProblem problem, double t_end, int steps)
{
    problem.t_end = t_end;
    problem.steps = steps;
    return problem;
}

void run_counterexample(const ExperimentConfig& cfg, Recorder& rec)
{
    const auto& knobs             = cfg.counterexample;
    const TransportProblem problem = cfg.problem();
    const NormOptions opts         = cfg.norm_options();
    const double t                 = problem.t_end;

    // (0.5, -0.5) followed by the dyadic ladder toward (0+, 0-).
    std::vector<double> hs = {0.5};
    for (int k = std::max(knobs.k_min, 2); k <= knobs.k_max; ++k) {
        hs.push_back(std::ldexp(1.0, -k));
    }
    std::vector<CauchyGap> gaps(hs.size());
    parallel_for(hs.size(), [&](std::size_t i) { gaps[i] = cauchy_gap(problem, hs[i], -hs[i], opts, false); });
    rec.file("cauchy.csv", to_csv(write_cauchy_csv, gaps));

    rec.at_most("flat_gap_equals_2t_at_half", std::abs(gaps[0].flat - 2.0 * t), 1e-9);
    double flat_step  = std::numeric_limits<double>::infinity();
    double holder_step = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < gaps.size(); ++i) {
        flat_step   = std::min(flat_step, gaps[i + 1].flat - gaps[i].flat);
        holder_step = std::max(holder_step, gaps[i + 1].upper - gaps[i].upper);
    }
    if (gaps.size() > 1) {
        rec.at_least("flat_gap_not_decreasing", flat_step, -1e-9);
        rec.below("holder_gap_decreasing", holder_step, 0.0);
    }

    if (knobs.lipschitz_samples > 0) {
        struct Sample {
            double h = 0.0, hp = 0.0, t = 0.0, distance = 0.0, bound = 0.0;
        };
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> h_dist(-knobs.h_range, knobs.h_range);
        std::uniform_real_distribution<double> t_dist(0.0, knobs.t_max);
        std::vector<Sample> samples(static_cast<std::size_t>(knobs.lipschitz_samples));
        for (Sample& s : samples) {
            s.h  = h_dist(rng);
            s.hp = h_dist(rng);
            do {
                s.t = t_dist(rng);
            } while (s.t == 0.0);
        }
        parallel_for(samples.size(), [&](std::size_t i) {
            Sample& s                    = samples[i];
            const TransportProblem local = with_horizon(problem, s.t, problem.steps);
            s.distance = flat_metric(solve_terminal(local, s.h), solve_terminal(local, s.hp), FlatConvention::max);
            s.bound    = std::abs(s.h - s.hp) * s.t;
        });
        CsvTable table({"h", "h_prime", "t", "flat_distance", "lipschitz_bound"});
        double worst = -std::numeric_limits<double>::infinity();
        for (const Sample& s : samples) {
            table.row({fmt(s.h), fmt(s.hp), fmt(s.t), fmt(s.distance), fmt(s.bound)});
            worst = std::max(worst, s.distance - s.bound);
        }
        rec.file("lipschitz.csv", table.str());
        rec.at_most("lipschitz_excess", worst, 1e-9);
    }
}

void run_cauchy_rate(const ExperimentConfig& cfg, Recorder& rec)
{
    const auto& knobs              = cfg.cauchy_rate;
    const TransportProblem problem = cfg.problem();
    std::vector<std::pair<double, double>> pairs = knobs.h_pairs;
    if (pairs.empty()) {
        for (int k = knobs.k_min; k <= knobs.k_max; ++k) {
            const double h = std::ldexp(1.0, -k);
            pairs.emplace_back(h, -h);
        }
    }
    for (double alpha : knobs.alphas) {
        NormOptions opts = cfg.norm_options();
        opts.alpha       = alpha;
        std::vector<CauchyGap> gaps(pairs.size());
        parallel_for(pairs.size(),
                     [&](std::size_t i) { gaps[i] = cauchy_gap(problem, pairs[i].first, pairs[i].second, opts); });
        rec.file("cauchy_alpha_" + label(alpha) + ".csv", to_csv(write_cauchy_csv, gaps));

        std::vector<double> spread, upper;
        for (const CauchyGap& g : gaps) {
            spread.push_back(std::abs(g.h1 - g.h2));
            upper.push_back(g.upper);
        }
        rec.at_least("slope_alpha_" + label(alpha), loglog_slope(spread, upper), alpha - knobs.slope_margin);
    }
}

void run_quotient_convergence(const ExperimentConfig& cfg, Recorder& rec)
{
    const auto& knobs              = cfg.quotient_convergence;
    const TransportProblem problem = cfg.problem();
    const NormOptions opts         = cfg.norm_options();
    const auto panel               = default_panel(cfg.alpha, problem.mu0.dim());

    const QuotientStudy study = quotient_convergence(problem, knobs.h, knobs.lambdas, panel, opts, false);
    rec.file("convergence.csv", to_csv(write_convergence_csv, study.rows));

    const std::vector<double> worst = max_gap_per_lambda(study, knobs.lambdas);
    for (int sign : {+1, -1}) {
        std::vector<double> scale, gap;
        for (std::size_t i = 0; i < knobs.lambdas.size(); ++i) {
            if (knobs.lambdas[i] * sign > 0.0) {
                scale.push_back(std::abs(knobs.lambdas[i]));
                gap.push_back(worst[i]);
            }
        }
        if (scale.size() < 2) {
            continue;
        }
        const std::string side = sign > 0 ? "positive" : "negative";
        // A quotient that is exact up to roundoff has no rate to fit.
        if (max_of(gap) < 1e-12) {
            rec.at_most("gap_at_roundoff_" + side, max_of(gap), 1e-12);
        } else {
            rec.at_least("slope_" + side, loglog_slope(scale, gap), cfg.alpha - knobs.slope_margin);
        }
    }

    const DerivativeFunctional d = derivative_functional(problem, knobs.h);
    const double t               = problem.t_end;
    if (cfg.system_name == "counterexample" && !cfg.measure) {
        // mu_t^h = delta_{(1+h) t}, so <psi, d_h mu_t> = t psi'((1 + h) t).
        CsvTable table({"psi", "pairing", "closed_form", "error"});
        double err = 0.0;
        for (const PanelEntry& e : panel) {
            const double got  = pair(d, e.psi);
            const double want = t * e.psi.derivative((1.0 + knobs.h) * t);
            err               = std::max(err, std::abs(got - want));
            table.row({e.id, fmt(got), fmt(want), fmt(std::abs(got - want))});
        }
        rec.file("closed_form.csv", table.str());
        rec.at_most("closed_form_pairing_error", err, 1e-6);
    }
    if (cfg.system_name == "linear_field") {
        // x' = -x + h, so dX/dh = 1 - e^{-t} for every particle.
        const DiscreteMeasure& mu0 = problem.mu0;
        const double want          = 1.0 - std::exp(-t);
        CsvTable table({"particle", "velocity", "closed_form", "error"});
        double err = 0.0;
        for (std::size_t i = 0; i < mu0.size(); ++i) {
            const double got = d.dipoles()[i][0] / mu0.weight(i);
            err              = std::max(err, std::abs(got - want));
            table.row({std::to_string(i), fmt(got), fmt(want), fmt(std::abs(got - want))});
        }
        rec.file("closed_form.csv", table.str());
        rec.at_most("closed_form_velocity_error", err, 1e-6);
    }
}

void run_dirac_curve(const ExperimentConfig& cfg, Recorder& rec)
{
    const auto& knobs = cfg.dirac_curve;
    std::vector<std::pair<double, double>> pairs;
    for (double d : knobs.pair_distances) {
        pairs.emplace_back(knobs.x, knobs.x + d);
    }
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> dist(-knobs.pair_range, knobs.pair_range);
    for (int i = 0; i < knobs.random_pairs; ++i) {
        double a = dist(rng);
        double b = dist(rng);
        while (a == b) {
            b = dist(rng);
        }
        pairs.emplace_back(a, b);
    }
    const DiracCurveStudy study = dirac_curve_check(knobs.x, knobs.lambdas, cfg.alpha, pairs, cfg.norm_options());

    CsvTable rem({"lambda", "upper", "panel", "bound"});
    double rem_excess = -std::numeric_limits<double>::infinity();
    for (const auto& r : study.remainders) {
        rem.row({fmt(r.lambda), fmt(r.upper), fmt(r.panel), fmt(r.bound)});
        rem_excess = std::max({rem_excess, r.upper - r.bound, r.panel - r.bound});
    }
    rec.file("remainders.csv", rem.str());

    CsvTable pr({"x", "y", "upper", "panel", "bound"});
    double pair_excess = -std::numeric_limits<double>::infinity();
    for (const auto& r : study.pairs) {
        pr.row({fmt(r.x), fmt(r.y), fmt(r.upper), fmt(r.panel), fmt(r.bound)});
        pair_excess = std::max({pair_excess, r.upper - r.bound, r.panel - r.bound});
    }
    rec.file("pairs.csv", pr.str());

    if (!study.remainders.empty()) {
        rec.at_most("remainder_excess", rem_excess, knobs.slack);
    }
    if (!study.pairs.empty()) {
        rec.at_most("pair_excess", pair_excess, knobs.slack);
    }
}

void run_dirac_approx(const ExperimentConfig& cfg, Recorder& rec)
{
    const auto& knobs = cfg.dirac_approx;
    const int dim     = cfg.measure ? cfg.measure->dim() : 1;
    if (dim != 1) {
        throw std::invalid_argument("certified norms are available in dimension 1 only");
    }
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<int> atoms(1, knobs.max_atoms);
    std::uniform_real_distribution<double> where(-knobs.support, knobs.support);
    std::uniform_real_distribution<double> mass(-knobs.max_weight, knobs.max_weight);
    std::vector<DiscreteMeasure> measures;
    measures.reserve(static_cast<std::size_t>(knobs.samples));
    for (int s = 0; s < knobs.samples; ++s) {
        const int n = atoms(rng);
        PointList points;
        std::vector<double> weights;
        for (int i = 0; i < n; ++i) {
            points.push_back(Vector::Constant(1, where(rng)));
            double w = 0.0;
            while (w == 0.0) {
                w = mass(rng);
            }
            weights.push_back(w);
        }
        measures.emplace_back(1, std::move(points), std::move(weights));
    }

    const NormOptions opts = cfg.norm_options();
    for (double eps : knobs.epsilons) {
        std::vector<double> upper(measures.size()), displacement(measures.size());
        parallel_for(measures.size(), [&](std::size_t i) {
            const DiscreteMeasure nu   = dirac_approximate(measures[i], eps, cfg.alpha);
            displacement[i]            = displacement_bound(measures[i], nu);
            const DiscreteMeasure diff = canonicalize(linear_combine(1.0, measures[i], -1.0, nu));
            upper[i]                   = diff.empty() ? 0.0 : holder_dual_upper(diff, opts).upper;
        });
        CsvTable table({"sample", "atoms", "total_variation", "displacement", "upper", "eps"});
        for (std::size_t i = 0; i < measures.size(); ++i) {
            table.row({std::to_string(i), std::to_string(measures[i].size()), fmt(total_variation(measures[i])),
                       fmt(displacement[i]), fmt(upper[i]), fmt(eps)});
        }
        rec.file("approx_eps_" + label(eps) + ".csv", table.str());
        rec.at_most("max_error_eps_" + label(eps), max_of(upper), eps);
    }
}

void run_weak_residual(const ExperimentConfig& cfg, Recorder& rec)
{
    const auto& knobs              = cfg.weak_residual;
    const TransportProblem problem = cfg.problem();
    const auto panel               = default_panel(cfg.alpha, problem.mu0.dim());
    const std::vector<std::pair<std::string, TimeWindow>> windows = {
        {"cubic_decay", TimeWindow::cubic_decay(knobs.decay_end)},
        {"bump", TimeWindow::bump(knobs.bump_start, knobs.bump_end)},
    };
    std::vector<SpaceTimeTest> tests;
    std::vector<std::string> names;
    for (const auto& [wname, window] : windows) {
        for (const PanelEntry& e : panel) {
            tests.push_back({window, e.psi});
            names.push_back(wname + ":" + e.id);
        }
    }

    auto residuals = [&](const SolutionCurve& curve) {
        std::vector<double> r(tests.size());
        parallel_for(tests.size(),
                     [&](std::size_t i) { r[i] = std::abs(weak_residual(curve, tests[i], problem.system)); });
        return r;
    };

    CsvTable table({"steps", "test", "residual"});
    std::vector<double> ladder_max;
    for (int steps : knobs.steps_ladder) {
        const auto r = residuals(solve_measure(with_horizon(problem, problem.t_end, steps), 0.0));
        for (std::size_t i = 0; i < r.size(); ++i) {
            table.row({std::to_string(steps), names[i], fmt(r[i])});
        }
        ladder_max.push_back(max_of(r));
    }
    rec.file("residuals.csv", table.str());

    const SolutionCurve curve = solve_measure(with_horizon(problem, problem.t_end, knobs.check_steps), 0.0);
    const auto clean          = residuals(curve);
    rec.at_most("max_residual_at_check_steps", max_of(clean), knobs.tolerance);

    // Observed order between successive halvings, skipping levels already at roundoff.
    CsvTable orders({"steps_coarse", "steps_fine", "max_coarse", "max_fine", "order"});
    double min_order = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < ladder_max.size(); ++i) {
        const double order = std::log2(ladder_max[i] / ladder_max[i + 1]);
        orders.row({std::to_string(knobs.steps_ladder[i]), std::to_string(knobs.steps_ladder[i + 1]),
                    fmt(ladder_max[i]), fmt(ladder_max[i + 1]), fmt(order)});
        if (ladder_max[i + 1] >= 1e-13) {
            min_order = std::min(min_order, order);
        }
    }
    rec.file("orders.csv", orders.str());
    rec.at_least("refinement_order", std::isinf(min_order) ? kNaN : min_order, knobs.min_order);

    // Negative control: rescale every snapshot after t = 0.
    std::vector<DiscreteMeasure> snapshots = curve.snapshots();
    const std::vector<double> times        = curve.times();
    for (std::size_t k = 1; k < snapshots.size(); ++k) {
        std::vector<double> w = snapshots[k].weights();
        for (double& x : w) {
            x *= 1.0 + knobs.corruption;
        }
        snapshots[k] = DiscreteMeasure(snapshots[k].dim(), snapshots[k].points(), std::move(w));
    }
    std::vector<double> corrupted(tests.size());
    parallel_for(tests.size(), [&](std::size_t i) {
        corrupted[i] = std::abs(weak_residual(times, snapshots, problem.mu0, tests[i], problem.system, 0.0));
    });
    CsvTable ctl({"test", "clean", "corrupted"});
    for (std::size_t i = 0; i < tests.size(); ++i) {
        ctl.row({names[i], fmt(clean[i]), fmt(corrupted[i])});
    }
    rec.file("negative_control.csv", ctl.str());
    rec.above("corruption_ratio", max_of(corrupted) / max_of(clean), knobs.min_ratio);
}

void run_control(const ExperimentConfig& cfg, Recorder& rec)
{
    const auto& knobs = cfg.control;
    const TransportProblem problem = cfg.problem();
    const TestFunction K           = test_function_from_json(knobs.K, problem.mu0.dim());
    Gamma gamma;
    switch (*parse_gamma_kind(knobs.gamma)) {
    case GammaKind::identity:
        gamma = Gamma::identity();
        break;
    case GammaKind::quadratic:
        gamma = Gamma::quadratic(knobs.target ? *knobs.target : K.value(knobs.target_point));
        break;
    case GammaKind::logistic:
        gamma = Gamma::logistic(knobs.steepness, knobs.midpoint);
        break;
    }
    const ObjectiveSpec spec{K, gamma, problem, knobs.h_min, knobs.h_max};
    spec.validate();

    CsvTable fd({"h", "gradient", "finite_difference", "relative_error"});
    double worst_fd = 0.0;
    for (double h : knobs.fd_points) {
        const double g  = objective_gradient(spec, h);
        const double fp = evaluate_objective(spec, h + knobs.fd_step);
        const double fm = evaluate_objective(spec, h - knobs.fd_step);
        const double c  = (fp - fm) / (2.0 * knobs.fd_step);
        const double rel = std::abs(g - c) / std::max(std::abs(c), 1e-6);
        worst_fd         = std::max(worst_fd, rel);
        fd.row({fmt(h), fmt(g), fmt(c), fmt(rel)});
    }
    rec.file("gradient_check.csv", fd.str());
    if (!knobs.fd_points.empty()) {
        rec.at_most("gradient_fd_relative_error", worst_fd, knobs.fd_tolerance);
    }

    MinimizeOptions opts;
    opts.tol      = knobs.tol;
    opts.max_iter = knobs.max_iter;
    std::vector<MinimizeResult> runs(knobs.starts.size());
    parallel_for(runs.size(), [&](std::size_t i) { runs[i] = minimize(spec, knobs.starts[i], opts); });

    const GridOptimum oracle = grid_search(spec, knobs.grid_coarse, knobs.grid_fine);
    CsvTable summary({"start", "h_star", "objective", "gradient", "projected_gradient", "iterations", "converged"});
    double worst_rise = -std::numeric_limits<double>::infinity();
    double worst_dist = 0.0;
    double worst_grad = 0.0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const MinimizeResult& r = runs[i];
        rec.file("trace_start_" + std::to_string(i) + ".csv", to_csv(write_trace_csv, r.trace));
        for (std::size_t k = 0; k + 1 < r.trace.size(); ++k) {
            worst_rise = std::max(worst_rise, r.trace[k + 1].objective - r.trace[k].objective);
        }
        const double pg = std::abs(projected_gradient(spec, r.h_star, r.grad_at_star));
        worst_dist      = std::max(worst_dist, std::abs(r.h_star - oracle.h));
        worst_grad      = std::max(worst_grad, pg);
        summary.row({fmt(knobs.starts[i]), fmt(r.h_star), fmt(r.objective), fmt(r.grad_at_star), fmt(pg),
                     std::to_string(r.iterations), r.converged ? "1" : "0"});
    }
    rec.file("minimize.csv", summary.str());
    CsvTable grid({"h", "objective"});
    grid.row({fmt(oracle.h), fmt(oracle.objective)});
    rec.file("grid_oracle.csv", grid.str());

    if (worst_rise > -std::numeric_limits<double>::infinity()) {
        rec.at_most("trace_objective_rise", worst_rise, 0.0);
    }
    // Stationarity is asserted for the quadratic gamma; global optimality only
    // where the objective is known to have a single minimizer.
    if (spec.gamma.kind == GammaKind::quadratic) {
        if (knobs.require_global) {
            rec.at_most("distance_to_grid_oracle", worst_dist, knobs.oracle_tolerance);
        }
        rec.at_most("projected_gradient_at_h_star", worst_grad, knobs.gradient_tolerance);
    }
}

} // namespace

Json summary_json(const ExperimentConfig& config, const ExperimentResult& result)
{
    Json assertions = Json::array();
    for (const Assertion& a : result.assertions) {
        assertions.push_back(Json{{"name", a.name},
                                  {"passed", a.passed},
                                  {"value", a.value},
                                  {"relation", a.relation},
                                  {"threshold", a.threshold}});
    }
    // Where the results were written is not part of the result.
    Json echo = to_json(config);
    echo.erase("output");
    Json files = Json::array();
    for (const auto& f : result.files) {
        files.push_back(f);
    }
    return Json{{"experiment", std::string(to_string(result.kind))},
                {"system", config.system_name},
                {"passed", result.passed()},
                {"assertions", assertions},
                {"files", files},
                {"config", echo}};
}

ExperimentResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir)
{
    ExperimentResult result;
    result.kind = config.kind;
    Recorder rec(result, out_dir);
    try {
        switch (config.kind) {
        case ExperimentKind::counterexample:
            run_counterexample(config, rec);
            break;
        case ExperimentKind::cauchy_rate:
            run_cauchy_rate(config, rec);
            break;
        case ExperimentKind::quotient_convergence:
            run_quotient_convergence(config, rec);
            break;
        case ExperimentKind::dirac_curve:
            run_dirac_curve(config, rec);
            break;
        case ExperimentKind::dirac_approx:
            run_dirac_approx(config, rec);
            break;
        case ExperimentKind::weak_residual:
            run_weak_residual(config, rec);
            break;
        case ExperimentKind::control:
            run_control(config, rec);
            break;
        }
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string(to_string(config.kind)) + ": " + e.what());
    }
    write_file(out_dir / "summary.json", summary_json(config, result).dump(2) + "\n");
    return result;
}

} // namespace mtd
