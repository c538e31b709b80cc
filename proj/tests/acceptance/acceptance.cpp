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
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "mtd/config.hpp"
#include "mtd/dualnorms.hpp"
#include "mtd/experiments.hpp"
#include "mtd/flow.hpp"
#include "mtd/pushforward.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

using namespace mtd;
namespace fs = std::filesystem;

namespace
{

fs::path g_out;

struct Outcome {
    bool passed = true;
    std::string detail;
};

class Clock
{
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - m_start).count();
    }

private:
    std::chrono::steady_clock::time_point m_start = std::chrono::steady_clock::now();
};

std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

ExperimentConfig config(const Json& doc)
{
    const ParseResult r = parse_config(doc);
    if (!r.ok()) {
        throw std::invalid_argument("config: " + r.errors.front());
    }
    return *r.config;
}

/// Run an experiment and fold its assertions into `out`.
ExperimentResult run(const Json& doc, const std::string& tag, Outcome& out)
{
    const ExperimentResult res = run_experiment(config(doc), g_out / tag);
    for (const Assertion& a : res.assertions) {
        if (!a.passed) {
            out.passed = false;
            out.detail += " [" + tag + ": " + a.name + " = " + num(a.value) + " " + a.relation + " " +
                          num(a.threshold) + " failed]";
        }
    }
    return res;
}

const Assertion* find(const ExperimentResult& r, const std::string& name)
{
    for (const Assertion& a : r.assertions) {
        if (a.name == name) {
            return &a;
        }
    }
    return nullptr;
}

void require(Outcome& out, bool ok, const std::string& what)
{
    if (!ok) {
        out.passed = false;
        out.detail += " [" + what + "]";
    }
}

void runtime_limit(Outcome& out, const Clock& clock, double limit)
{
    const double s = clock.seconds();
    out.detail += " time " + num(s) + " s (< " + num(limit) + " s)";
    require(out, s < limit, "runtime limit exceeded");
}

Outcome counterexample_divergence()
{
    Outcome out;
    Clock clock;
    const auto res = run(Json{{"experiment", "counterexample"}, {"t_end", 1.0},
                              {"counterexample", {{"k_min", 2}, {"k_max", 7}, {"lipschitz_samples", 0}}}},
                         "c1_counterexample", out);
    const Assertion* eq = find(res, "flat_gap_equals_2t_at_half");
    const Assertion* nd = find(res, "flat_gap_not_decreasing");
    require(out, eq && nd, "missing assertions");
    if (eq) {
        out.detail += " |flat - 2t| = " + num(eq->value);
    }
    runtime_limit(out, clock, 1.0);
    return out;
}

Outcome lipschitz_bound()
{
    Outcome out;
    Clock clock;
    const auto res = run(Json{{"experiment", "counterexample"},
                              {"counterexample", {{"k_min", 2}, {"k_max", 3}, {"lipschitz_samples", 50}}}},
                         "c2_lipschitz", out);
    const Assertion* a = find(res, "lipschitz_excess");
    require(out, a != nullptr, "missing lipschitz assertion");
    if (a) {
        out.detail += " max(rho_F - |h-h'|t) = " + num(a->value);
    }
    runtime_limit(out, clock, 5.0);
    return out;
}

Outcome cauchy_rate()
{
    Outcome out;
    Clock clock;
    for (const std::string system : {"counterexample", "linear_field"}) {
        const auto res = run(Json{{"experiment", "cauchy_rate"}, {"system", system},
                                  {"cauchy_rate", {{"alphas", {0.25, 0.5, 1.0}}, {"k_min", 2}, {"k_max", 7}}}},
                             "c3_" + system, out);
        out.detail += " " + system + " slopes";
        for (const Assertion& a : res.assertions) {
            out.detail += " " + num(a.value);
        }
        require(out, res.assertions.size() == 3, "expected three slopes for " + system);
    }
    runtime_limit(out, clock, 30.0);
    return out;
}

Outcome derivative_correctness()
{
    Outcome out;
    for (const std::string system : {"counterexample", "linear_field", "growth"}) {
        const auto res = run(Json{{"experiment", "quotient_convergence"}, {"system", system}, {"steps", 256}},
                             "c4_" + system, out);
        int slopes = 0;
        for (const Assertion& a : res.assertions) {
            slopes += a.name.rfind("slope_", 0) == 0;
        }
        require(out, slopes == 2, "expected two slopes for " + system);
        if (const Assertion* a = find(res, "slope_positive")) {
            out.detail += " " + system + " slope " + num(a->value);
        }
        if (system == "counterexample") {
            const Assertion* a = find(res, "closed_form_pairing_error");
            require(out, a != nullptr, "missing t psi'(t) check");
            if (a) {
                out.detail += " |<psi,D> - t psi'(t)| = " + num(a->value);
            }
        }
        if (system == "linear_field") {
            const Assertion* a = find(res, "closed_form_velocity_error");
            require(out, a != nullptr, "missing 1 - e^{-t} check");
            if (a) {
                out.detail += " |v - (1 - e^-t)| = " + num(a->value);
            }
        }
    }
    return out;
}

Outcome dirac_curve()
{
    Outcome out;
    const auto res = run(Json{{"experiment", "dirac_curve"},
                              {"dirac_curve", {{"random_pairs", 20}, {"slack", 1e-6}}}},
                         "c5_dirac_curve", out);
    require(out, find(res, "remainder_excess") && find(res, "pair_excess"), "missing assertions");
    for (const Assertion& a : res.assertions) {
        out.detail += " " + a.name + " " + num(a.value);
    }
    return out;
}

Outcome dirac_density()
{
    Outcome out;
    Clock clock;
    const auto res = run(Json{{"experiment", "dirac_approx"},
                              {"dirac_approx", {{"epsilons", {0.1, 0.01}}, {"samples", 1000}}}},
                         "c6_dirac_approx", out);
    require(out, res.assertions.size() == 2, "expected one assertion per epsilon");
    for (const Assertion& a : res.assertions) {
        out.detail += " " + a.name + " " + num(a.value);
    }
    runtime_limit(out, clock, 60.0);
    return out;
}

Outcome weak_solution()
{
    Outcome out;
    for (const std::string system : {"counterexample", "linear_field", "growth", "sin_growth"}) {
        const auto res = run(Json{{"experiment", "weak_residual"}, {"system", system}}, "c7_" + system, out);
        require(out, res.assertions.size() == 3, "expected three assertions for " + system);
        if (const Assertion* a = find(res, "max_residual_at_check_steps")) {
            out.detail += " " + system + " residual " + num(a->value);
        }
        if (const Assertion* a = find(res, "refinement_order")) {
            out.detail += " order " + num(a->value);
        }
        if (const Assertion* a = find(res, "corruption_ratio")) {
            out.detail += " ratio " + num(a->value);
        }
    }
    return out;
}

Outcome flow_quality()
{
    Outcome out;
    PointList starts = {Vector::Constant(1, -0.5), Vector::Constant(1, 0.5), Vector::Constant(1, 1.0)};

    // Group property on the time-dependent catalog system.
    const FlowSystem sys = named_system("sin_growth")->system;
    const auto whole     = integrate_bundle(sys, 0.2, starts, 1.5, 384);
    const auto first     = integrate_bundle(sys, 0.2, starts, 0.5, 128);
    PointList mid;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        mid.push_back(first.position(i, first.last()));
    }
    const auto second = integrate_bundle(sys, 0.2, mid, 1.5, 256, 0.5);
    double group      = 0.0;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        group = std::max(group, std::abs(second.position(i, second.last())[0] - whole.position(i, whole.last())[0]));
    }
    require(out, group <= 1e-12, "group property");
    out.detail += " group " + num(group);

    // Mass conservation with w = 0.
    auto named      = *named_system("sin_growth");
    named.system.w  = ScalarField::zero(1);
    const auto curve = solve_measure(named.mu0, named.system, 0.3, 2.0, 512);
    double drift    = 0.0;
    for (std::size_t k = 0; k < curve.nodes(); ++k) {
        drift = std::max(drift, std::abs(curve.at(k).mass() - named.mu0.mass()) / std::abs(named.mu0.mass()));
    }
    require(out, drift <= 1e-12, "mass conservation");
    out.detail += " mass " + num(drift);

    // Fourth order against x' = -x + h: X = h + (y - h) e^{-t}.
    const FlowSystem lin{VelocityField::affine(-1.0, 0.0), VelocityField::constant(1.0), ScalarField::zero(1)};
    const double exact = 0.25 + (2.0 - 0.25) * std::exp(-1.0);
    double worst       = std::numeric_limits<double>::infinity();
    double previous    = 0.0;
    for (int steps : {4, 8, 16, 32}) {
        const auto b     = integrate_bundle(lin, 0.25, {Vector::Constant(1, 2.0)}, 1.0, steps);
        const double err = std::abs(b.position(0, b.last())[0] - exact);
        if (previous > 0.0) {
            worst = std::min(worst, previous / err);
        }
        previous = err;
    }
    require(out, worst >= 14.0, "convergence factor");
    out.detail += " factor " + num(worst);

    // Sensitivities against central differences.
    const double d = 1e-4;
    const auto c   = integrate_bundle(sys, 0.1, starts, 1.0, 256);
    const auto p   = integrate_bundle(sys, 0.1 + d, starts, 1.0, 256);
    const auto m   = integrate_bundle(sys, 0.1 - d, starts, 1.0, 256);
    double fd      = 0.0;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        const auto k = c.last();
        fd = std::max(fd, std::abs(c.sensitivity(i, k)[0] - (p.position(i, k)[0] - m.position(i, k)[0]) / (2 * d)));
        fd = std::max(fd, std::abs(c.growth_sensitivity(i, k) - (p.growth(i, k) - m.growth(i, k)) / (2 * d)));
    }
    require(out, fd <= 1e-6, "sensitivity vs finite differences");
    out.detail += " fd " + num(fd);
    return out;
}

Outcome control()
{
    Outcome out;
    double fd_worst = 0.0;
    for (const std::string system : {"counterexample", "linear_field", "growth", "sin_growth"}) {
        for (const std::string gamma : {"identity", "quadratic", "logistic"}) {
            const auto res = run(Json{{"experiment", "control"}, {"system", system},
                                      {"control", {{"gamma", gamma}, {"require_global", false}}}},
                                 "c9_" + system + "_" + gamma, out);
            if (const Assertion* a = find(res, "gradient_fd_relative_error")) {
                fd_worst = std::max(fd_worst, a->value);
            } else {
                require(out, false, "missing gradient check");
            }
        }
    }
    out.detail += " worst FD relative error " + num(fd_worst);

    const auto res = run(Json{{"experiment", "control"},
                              {"control", {{"gamma", "quadratic"}, {"starts", {-0.3, -0.45, 0.0, 0.35, 0.5}}}}},
                         "c9_benchmark", out);
    const Assertion* oracle = find(res, "distance_to_grid_oracle");
    const Assertion* grad   = find(res, "projected_gradient_at_h_star");
    require(out, oracle && grad, "missing benchmark assertions");
    if (oracle && grad) {
        out.detail += " |h* - grid| " + num(oracle->value) + " |g(h*)| " + num(grad->value);
    }
    return out;
}

bool same_tree(const fs::path& a, const fs::path& b, std::string& why)
{
    std::map<std::string, std::string> left, right;
    auto slurp = [](const fs::path& root, std::map<std::string, std::string>& into) {
        for (const auto& e : fs::recursive_directory_iterator(root)) {
            if (e.is_regular_file()) {
                into[fs::relative(e.path(), root).string()] = read_file(e.path());
            }
        }
    };
    slurp(a, left);
    slurp(b, right);
    if (left.empty()) {
        why = "no output in " + a.string();
        return false;
    }
    if (left.size() != right.size()) {
        why = "file sets differ";
        return false;
    }
    for (const auto& [name, content] : left) {
        auto it = right.find(name);
        if (it == right.end() || it->second != content) {
            why = name + " differs";
            return false;
        }
    }
    return true;
}

Outcome determinism()
{
    Outcome out;
    int count = 0;
    std::vector<fs::path> configs;
    for (const auto& e : fs::directory_iterator(MTD_CONFIG_DIR)) {
        if (e.path().extension() == ".json") {
            configs.push_back(e.path());
        }
    }
    std::sort(configs.begin(), configs.end());
    for (const fs::path& cfg : configs) {
        const std::string name = cfg.stem().string();
        const fs::path a       = g_out / "c10" / name / "a";
        const fs::path b       = g_out / "c10" / name / "b";
        fs::remove_all(a);
        fs::remove_all(b);
        // Different thread counts as well: outputs must not depend on scheduling.
        const std::string base = std::string("\"") + MTD_CLI_PATH + "\" run --config \"" + cfg.string() + "\"";
        const int status_a = std::system((base + " --threads 1 --out \"" + a.string() + "\" > /dev/null 2>&1").c_str());
        const int status_b = std::system((base + " --threads 3 --out \"" + b.string() + "\" > /dev/null 2>&1").c_str());
        require(out, status_a == status_b, name + ": exit status differs");
        std::string why;
        if (!same_tree(a, b, why)) {
            require(out, false, name + ": " + why);
        }
        ++count;
    }
    out.detail += " " + std::to_string(count) + " configs compared";
    require(out, count > 0, "no configs found");
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    g_out = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "mtd_acceptance";
    fs::remove_all(g_out);
    fs::create_directories(g_out);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 counterexample divergence", counterexample_divergence},
        {"2 Lipschitz upper bound", lipschitz_bound},
        {"3 Cauchy-gap rate", cauchy_rate},
        {"4 derivative correctness", derivative_correctness},
        {"5 Dirac curve regularity", dirac_curve},
        {"6 Dirac density", dirac_density},
        {"7 weak-solution residual", weak_solution},
        {"8 flow quality", flow_quality},
        {"9 control", control},
        {"10 determinism", determinism},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.passed = false;
            o.detail = std::string(" exception: ") + e.what();
        }
        failures += !o.passed;
        std::cout << (o.passed ? "PASS " : "FAIL ") << name << ":" << o.detail << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
