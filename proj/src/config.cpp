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
#include "mtd/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mtd
{

std::string_view to_string(ExperimentKind kind)
{
    switch (kind) {
    case ExperimentKind::counterexample:
        return "counterexample";
    case ExperimentKind::cauchy_rate:
        return "cauchy_rate";
    case ExperimentKind::quotient_convergence:
        return "quotient_convergence";
    case ExperimentKind::dirac_curve:
        return "dirac_curve";
    case ExperimentKind::dirac_approx:
        return "dirac_approx";
    case ExperimentKind::weak_residual:
        return "weak_residual";
    case ExperimentKind::control:
        return "control";
    }
    return "counterexample";
}

const std::vector<ExperimentKind>& all_experiment_kinds()
{
    static const std::vector<ExperimentKind> kinds = {
        ExperimentKind::counterexample, ExperimentKind::cauchy_rate,   ExperimentKind::quotient_convergence,
        ExperimentKind::dirac_curve,    ExperimentKind::dirac_approx,  ExperimentKind::weak_residual,
        ExperimentKind::control,
    };
    return kinds;
}

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name)
{
    for (ExperimentKind kind : all_experiment_kinds()) {
        if (name == to_string(kind)) {
            return kind;
        }
    }
    return std::nullopt;
}

const std::vector<std::string>& system_names()
{
    static const std::vector<std::string> names = {"counterexample", "linear_field", "growth", "sin_growth"};
    return names;
}

std::optional<NamedSystem> named_system(std::string_view name)
{
    const Vector one = Vector::Ones(1);
    if (name == "counterexample") {
        // b = 1, b1 = 1, w = 0, mu0 = delta_0: X = (1 + h) t
        return NamedSystem{FlowSystem{VelocityField::constant(1.0), VelocityField::constant(1.0), ScalarField::zero(1)},
                           DiscreteMeasure::dirac(0.0)};
    }
    if (name == "linear_field") {
        // b = -x, b1 = 1: X = y e^{-t} + h (1 - e^{-t})
        return NamedSystem{
            FlowSystem{VelocityField::affine(-1.0, 0.0), VelocityField::constant(1.0), ScalarField::zero(1)},
            DiscreteMeasure::dirac(1.0)};
    }
    if (name == "growth") {
        // b = 1, b1 = 1, w = x/2: W = (y t + (1 + h) t^2 / 2) / 2
        const ScalarField w(AnalyticField::affine(Matrix::Constant(1, 1, 0.5), Vector::Zero(1)));
        return NamedSystem{FlowSystem{VelocityField::constant(1.0), VelocityField::constant(1.0), w},
                           DiscreteMeasure(1, {Vector::Constant(1, 0.0), Vector::Constant(1, 0.5)}, {0.5, 0.5})};
    }
    if (name == "sin_growth") {
        const VelocityField b(AnalyticField::sinusoidal(0.5 * one, one, 0.0));
        const VelocityField b1(AnalyticField::gaussian_bump(one, Vector::Zero(1), 1.0));
        const ScalarField w(AnalyticField::sinusoidal(0.3 * one, 2.0 * one, 0.0).with_time(TimeProfile::cosine));
        return NamedSystem{FlowSystem{b, b1, w},
                           DiscreteMeasure(1,
                                           {Vector::Constant(1, -0.5), Vector::Constant(1, 0.5),
                                            Vector::Constant(1, 1.0)},
                                           {1.0, 0.5, 0.25})};
    }
    return std::nullopt;
}

namespace
{

/// Walks one JSON object, records every problem and flags keys never read.
class Reader
{
public:
    Reader(const Json& node, std::string path, std::vector<std::string>& errors)
        : m_node(node)
        , m_path(std::move(path))
        , m_errors(errors)
    {
        if (!node.is_object()) {
            m_errors.push_back((m_path.empty() ? std::string("document") : m_path) + ": expected an object");
            m_valid = false;
        }
    }

    bool valid() const
    {
        return m_valid;
    }
    bool has(const std::string& key) const
    {
        return m_valid && m_node.contains(key);
    }
    std::string at(const std::string& key) const
    {
        return m_path.empty() ? key : m_path + "." + key;
    }
    void error(const std::string& key, const std::string& message)
    {
        m_errors.push_back(at(key) + ": " + message);
    }
    void check(const std::string& key, bool ok, const std::string& message)
    {
        if (!ok) {
            error(key, message);
        }
    }
    void require(const std::string& key)
    {
        if (m_valid && !m_node.contains(key)) {
            error(key, "is required");
        }
    }

    const Json* raw(const std::string& key)
    {
        if (!has(key)) {
            return nullptr;
        }
        m_seen.insert(key);
        return &m_node.at(key);
    }

    bool read(const std::string& key, double& out)
    {
        const Json* j = raw(key);
        if (!j) {
            return false;
        }
        if (!j->is_number()) {
            error(key, "expected a number");
            return false;
        }
        out = j->get<double>();
        return true;
    }

    bool read(const std::string& key, int& out)
    {
        const Json* j = raw(key);
        if (!j) {
            return false;
        }
        if (!j->is_number_integer()) {
            error(key, "expected an integer");
            return false;
        }
        out = j->get<int>();
        return true;
    }

    bool read(const std::string& key, std::size_t& out)
    {
        int v = 0;
        if (!read(key, v)) {
            return false;
        }
        if (v < 0) {
            error(key, "must be non-negative");
            return false;
        }
        out = static_cast<std::size_t>(v);
        return true;
    }

    bool read_seed(const std::string& key, std::uint64_t& out)
    {
        const Json* j = raw(key);
        if (!j) {
            return false;
        }
        if (!j->is_number_unsigned()) {
            error(key, "expected a non-negative integer");
            return false;
        }
        out = j->get<std::uint64_t>();
        return true;
    }

    bool read(const std::string& key, bool& out)
    {
        const Json* j = raw(key);
        if (!j) {
            return false;
        }
        if (!j->is_boolean()) {
            error(key, "expected true or false");
            return false;
        }
        out = j->get<bool>();
        return true;
    }

    bool read(const std::string& key, std::string& out)
    {
        const Json* j = raw(key);
        if (!j) {
            return false;
        }
        if (!j->is_string()) {
            error(key, "expected a string");
            return false;
        }
        out = j->get<std::string>();
        return true;
    }

    bool read(const std::string& key, std::vector<double>& out)
    {
        const Json* j = raw(key);
        if (!j) {
            return false;
        }
        if (!j->is_array()) {
            error(key, "expected an array of numbers");
            return false;
        }
        std::vector<double> values;
        for (const auto& v : *j) {
            if (!v.is_number()) {
                error(key, "expected an array of numbers");
                return false;
            }
            values.push_back(v.get<double>());
        }
        out = std::move(values);
        return true;
    }

    bool read(const std::string& key, std::vector<int>& out)
    {
        const Json* j = raw(key);
        if (!j) {
            return false;
        }
        if (!j->is_array()) {
            error(key, "expected an array of integers");
            return false;
        }
        std::vector<int> values;
        for (const auto& v : *j) {
            if (!v.is_number_integer()) {
                error(key, "expected an array of integers");
                return false;
            }
            values.push_back(v.get<int>());
        }
        out = std::move(values);
        return true;
    }

    void finish()
    {
        if (!m_valid) {
            return;
        }
        for (const auto& item : m_node.items()) {
            if (!m_seen.count(item.key())) {
                error(item.key(), "unknown key");
            }
        }
    }

private:
    const Json& m_node;
    std::string m_path;
    std::vector<std::string>& m_errors;
    std::set<std::string> m_seen;
    bool m_valid = true;
};

std::optional<Vector> vector_param(Reader& r, const std::string& key, Eigen::Index size, bool required,
                                   const Vector& fallback)
{
    const Json* j = r.raw(key);
    if (!j) {
        if (required) {
            r.error(key, "is required");
            return std::nullopt;
        }
        return fallback;
    }
    std::vector<double> values;
    if (j->is_number()) {
        values.push_back(j->get<double>());
    } else if (j->is_array() && std::all_of(j->begin(), j->end(), [](const Json& v) { return v.is_number(); })) {
        values = j->get<std::vector<double>>();
    } else {
        r.error(key, "expected a number or an array of numbers");
        return std::nullopt;
    }
    if (static_cast<Eigen::Index>(values.size()) != size) {
        r.error(key, "expected " + std::to_string(size) + " entries, got " + std::to_string(values.size()));
        return std::nullopt;
    }
    return Vector(Eigen::Map<const Vector>(values.data(), size));
}

std::optional<Matrix> matrix_param(Reader& r, const std::string& key, Eigen::Index rows, Eigen::Index cols)
{
    const Json* j = r.raw(key);
    if (!j) {
        r.error(key, "is required");
        return std::nullopt;
    }
    if (j->is_number() && rows == 1 && cols == 1) {
        return Matrix::Constant(1, 1, j->get<double>());
    }
    if (!j->is_array() || static_cast<Eigen::Index>(j->size()) != rows) {
        r.error(key, "expected a " + std::to_string(rows) + "x" + std::to_string(cols) + " array of rows");
        return std::nullopt;
    }
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const Json& row = (*j)[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            r.error(key, "expected a " + std::to_string(rows) + "x" + std::to_string(cols) + " array of rows");
            return std::nullopt;
        }
        for (Eigen::Index k = 0; k < cols; ++k) {
            const Json& v = row[static_cast<std::size_t>(k)];
            if (!v.is_number()) {
                r.error(key, "matrix entries must be numbers");
                return std::nullopt;
            }
            m(i, k) = v.get<double>();
        }
    }
    return m;
}

std::optional<FieldTerm> term_from_json(const Json& node, const std::string& path, int in, int out,
                                        std::vector<std::string>& errors)
{
    Reader r(node, path, errors);
    if (!r.valid()) {
        return std::nullopt;
    }
    const std::size_t before = errors.size();
    std::string kind_name;
    r.require("kind");
    r.read("kind", kind_name);
    FieldTerm term;
    std::string time_name = "one";
    if (r.read("time", time_name)) {
        const auto profile = parse_time_profile(time_name);
        if (profile) {
            term.time = *profile;
        } else {
            r.error("time", "unknown time profile '" + time_name + "' (one, exp_decay, cos)");
        }
    }

    const auto kind = parse_field_kind(kind_name);
    if (!kind_name.empty() && !kind) {
        r.error("kind", "unknown field kind '" + kind_name + "' (constant, affine, gaussian_bump, sinusoidal)");
    }
    if (kind) {
        term.kind = *kind;
        switch (*kind) {
        case FieldKind::constant:
            if (auto v = vector_param(r, "value", out, true, {})) {
                term.amplitude = *v;
            }
            break;
        case FieldKind::affine:
            if (auto m = matrix_param(r, "matrix", out, in)) {
                term.matrix = *m;
            }
            if (auto v = vector_param(r, "shift", out, false, Vector::Zero(out))) {
                term.shift = *v;
            }
            break;
        case FieldKind::gaussian_bump:
            if (auto v = vector_param(r, "amplitude", out, true, {})) {
                term.amplitude = *v;
            }
            if (auto v = vector_param(r, "center", in, true, {})) {
                term.center = *v;
            }
            r.require("width");
            if (r.read("width", term.width)) {
                r.check("width", term.width > 0.0, "must be positive");
            }
            break;
        case FieldKind::sinusoidal:
            if (auto v = vector_param(r, "amplitude", out, true, {})) {
                term.amplitude = *v;
            }
            if (auto v = vector_param(r, "frequency", in, true, {})) {
                term.frequency = *v;
            }
            r.read("phase", term.phase);
            break;
        }
    }
    // Without a known kind there is no schema to check the remaining keys against.
    if (kind) {
        r.finish();
    }
    if (errors.size() != before || !kind) {
        return std::nullopt;
    }
    return term;
}

std::optional<AnalyticField> field_from_json_impl(const Json& terms, const std::string& path, int in, int out,
                                                  std::vector<std::string>& errors)
{
    AnalyticField field(in, out);
    const Json list = terms.is_array() ? terms : Json::array({terms});
    bool ok         = true;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string at = terms.is_array() ? path + "[" + std::to_string(i) + "]" : path;
        auto term            = term_from_json(list[i], at, in, out, errors);
        if (!term) {
            ok = false;
            continue;
        }
        try {
            field.add_term(std::move(*term));
        } catch (const std::exception& e) {
            errors.push_back(at + ": " + e.what());
            ok = false;
        }
    }
    if (!ok) {
        return std::nullopt;
    }
    return field;
}

std::string join(const std::vector<std::string>& errors)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        os << (i ? "; " : "") << errors[i];
    }
    return os.str();
}

Json vector_json(const Vector& v)
{
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v[i]);
    }
    return out;
}

bool positive_all(const std::vector<double>& v)
{
    return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
}

void parse_norm(Reader& parent, NormKnobs& knobs, std::vector<std::string>& errors)
{
    const Json* node = parent.raw("norm");
    if (!node) {
        return;
    }
    Reader r(*node, parent.at("norm"), errors);
    if (r.read("node_cap", knobs.node_cap)) {
        r.check("node_cap", knobs.node_cap >= 2, "must be at least 2");
    }
    if (r.read("aux_nodes", knobs.aux_nodes)) {
        r.check("aux_nodes", knobs.aux_nodes != 1, "must be 0 or at least 2");
    }
    if (r.read("aux_margin", knobs.aux_margin)) {
        r.check("aux_margin", knobs.aux_margin >= 0.0, "must be non-negative");
    }
    if (r.read("tolerance", knobs.tolerance)) {
        r.check("tolerance", knobs.tolerance > 0.0 && knobs.tolerance <= 1e-6, "must lie in (0, 1e-6]");
    }
    r.finish();
}

void parse_ladder(Reader& r, int& k_min, int& k_max)
{
    r.read("k_min", k_min);
    r.read("k_max", k_max);
    r.check("k_min", k_min >= 1, "must be at least 1");
    r.check("k_max", k_max > k_min && k_max <= 30, "must exceed k_min and be at most 30");
}

void parse_block(Reader& r, CounterexampleKnobs& k)
{
    parse_ladder(r, k.k_min, k.k_max);
    if (r.read("lipschitz_samples", k.lipschitz_samples)) {
        r.check("lipschitz_samples", k.lipschitz_samples >= 0, "must be non-negative");
    }
    if (r.read("h_range", k.h_range)) {
        r.check("h_range", k.h_range > 0.0, "must be positive");
    }
    if (r.read("t_max", k.t_max)) {
        r.check("t_max", k.t_max > 0.0, "must be positive");
    }
}

void parse_block(Reader& r, CauchyRateKnobs& k)
{
    if (r.read("alphas", k.alphas)) {
        r.check("alphas", !k.alphas.empty() && std::all_of(k.alphas.begin(), k.alphas.end(),
                                                           [](double a) { return a > 0.0 && a <= 1.0; }),
                "entries must lie in (0, 1]");
    }
    parse_ladder(r, k.k_min, k.k_max);
    if (const Json* pairs = r.raw("h_pairs")) {
        k.h_pairs.clear();
        bool ok = pairs->is_array();
        for (const auto& p : ok ? *pairs : Json::array()) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
                ok = false;
                break;
            }
            const double h1 = p[0].get<double>();
            const double h2 = p[1].get<double>();
            if (h1 == 0.0 || h2 == 0.0 || h1 == h2) {
                r.error("h_pairs", "pairs need h1 != 0, h2 != 0 and h1 != h2");
            }
            k.h_pairs.emplace_back(h1, h2);
        }
        r.check("h_pairs", ok, "expected an array of [h1, h2] pairs");
    }
    if (r.read("slope_margin", k.slope_margin)) {
        r.check("slope_margin", k.slope_margin >= 0.0, "must be non-negative");
    }
}

void parse_block(Reader& r, QuotientKnobs& k)
{
    r.read("h", k.h);
    if (r.read("lambdas", k.lambdas)) {
        r.check("lambdas",
                k.lambdas.size() >= 2 && std::none_of(k.lambdas.begin(), k.lambdas.end(),
                                                      [](double l) { return l == 0.0; }),
                "need at least two nonzero entries");
    }
    if (r.read("slope_margin", k.slope_margin)) {
        r.check("slope_margin", k.slope_margin >= 0.0, "must be non-negative");
    }
}

void parse_block(Reader& r, DiracCurveKnobs& k)
{
    r.read("x", k.x);
    if (r.read("lambdas", k.lambdas)) {
        r.check("lambdas",
                !k.lambdas.empty() && std::none_of(k.lambdas.begin(), k.lambdas.end(),
                                                   [](double l) { return l == 0.0; }),
                "entries must be nonzero");
    }
    if (r.read("pair_distances", k.pair_distances)) {
        r.check("pair_distances", positive_all(k.pair_distances), "entries must be positive");
    }
    if (r.read("random_pairs", k.random_pairs)) {
        r.check("random_pairs", k.random_pairs >= 0, "must be non-negative");
    }
    if (r.read("pair_range", k.pair_range)) {
        r.check("pair_range", k.pair_range > 0.0, "must be positive");
    }
    if (r.read("slack", k.slack)) {
        r.check("slack", k.slack >= 0.0, "must be non-negative");
    }
}

void parse_block(Reader& r, DiracApproxKnobs& k)
{
    if (r.read("epsilons", k.epsilons)) {
        r.check("epsilons", !k.epsilons.empty() && positive_all(k.epsilons), "entries must be positive");
    }
    if (r.read("samples", k.samples)) {
        r.check("samples", k.samples >= 1, "must be at least 1");
    }
    if (r.read("max_atoms", k.max_atoms)) {
        r.check("max_atoms", k.max_atoms >= 1 && k.max_atoms <= 100, "must lie in [1, 100]");
    }
    if (r.read("support", k.support)) {
        r.check("support", k.support > 0.0, "must be positive");
    }
    if (r.read("max_weight", k.max_weight)) {
        r.check("max_weight", k.max_weight > 0.0, "must be positive");
    }
}

void parse_block(Reader& r, WeakResidualKnobs& k)
{
    if (r.read("steps_ladder", k.steps_ladder)) {
        bool ok = k.steps_ladder.size() >= 2;
        for (std::size_t i = 0; ok && i < k.steps_ladder.size(); ++i) {
            ok = k.steps_ladder[i] >= 1 && (i == 0 || k.steps_ladder[i] == 2 * k.steps_ladder[i - 1]);
        }
        r.check("steps_ladder", ok, "need at least two positive entries, each double the previous");
    }
    if (r.read("check_steps", k.check_steps)) {
        r.check("check_steps", k.check_steps >= 1, "must be positive");
    }
    r.read("decay_end", k.decay_end);
    r.read("bump_start", k.bump_start);
    r.read("bump_end", k.bump_end);
    r.check("decay_end", k.decay_end > 0.0, "must be positive");
    r.check("bump_end", k.bump_start >= 0.0 && k.bump_end > k.bump_start, "need 0 <= bump_start < bump_end");
    if (r.read("tolerance", k.tolerance)) {
        r.check("tolerance", k.tolerance > 0.0, "must be positive");
    }
    r.read("min_order", k.min_order);
    if (r.read("corruption", k.corruption)) {
        r.check("corruption", k.corruption != 0.0, "must be nonzero");
    }
    if (r.read("min_ratio", k.min_ratio)) {
        r.check("min_ratio", k.min_ratio > 0.0, "must be positive");
    }
}

void parse_block(Reader& r, ControlKnobs& k, std::vector<std::string>& errors)
{
    if (const Json* K = r.raw("K")) {
        k.K = *K;
        field_from_json_impl(*K, r.at("K"), 1, 1, errors);
    }
    if (r.read("gamma", k.gamma)) {
        r.check("gamma", parse_gamma_kind(k.gamma).has_value(),
                "unknown gamma '" + k.gamma + "' (identity, quadratic, logistic)");
    }
    double target = 0.0;
    if (r.read("target", target)) {
        k.target = target;
    }
    r.read("target_point", k.target_point);
    r.read("steepness", k.steepness);
    r.read("midpoint", k.midpoint);
    r.read("starts", k.starts);
    r.read("fd_points", k.fd_points);
    if (r.read("fd_step", k.fd_step)) {
        r.check("fd_step", k.fd_step > 0.0, "must be positive");
    }
    if (r.read("fd_tolerance", k.fd_tolerance)) {
        r.check("fd_tolerance", k.fd_tolerance > 0.0, "must be positive");
    }
    if (r.read("tol", k.tol)) {
        r.check("tol", k.tol > 0.0, "must be positive");
    }
    if (r.read("max_iter", k.max_iter)) {
        r.check("max_iter", k.max_iter >= 0, "must be non-negative");
    }
    r.read("h_min", k.h_min);
    r.read("h_max", k.h_max);
    r.check("h_max", k.h_min < k.h_max, "need h_min < h_max");
    auto in_box = [&](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [&](double h) { return h >= k.h_min && h <= k.h_max; });
    };
    r.check("starts", !k.starts.empty() && in_box(k.starts), "need at least one start within [h_min, h_max]");
    r.check("fd_points", std::all_of(k.fd_points.begin(), k.fd_points.end(),
                                     [&](double h) { return h - k.fd_step >= k.h_min && h + k.fd_step <= k.h_max; }),
            "entries must lie at least fd_step inside [h_min, h_max]");
    if (r.read("grid_coarse", k.grid_coarse)) {
        r.check("grid_coarse", k.grid_coarse > 0.0, "must be positive");
    }
    if (r.read("grid_fine", k.grid_fine)) {
        r.check("grid_fine", k.grid_fine > 0.0 && k.grid_fine <= k.grid_coarse, "must lie in (0, grid_coarse]");
    }
    r.read("require_global", k.require_global);
    if (r.read("oracle_tolerance", k.oracle_tolerance)) {
        r.check("oracle_tolerance", k.oracle_tolerance > 0.0, "must be positive");
    }
    if (r.read("gradient_tolerance", k.gradient_tolerance)) {
        r.check("gradient_tolerance", k.gradient_tolerance > 0.0, "must be positive");
    }
}

template <class Knobs, class... Extra>
void parse_kind_block(Reader& top, const std::string& key, Knobs& knobs, std::vector<std::string>& errors,
                      Extra&... extra)
{
    const Json* node = top.raw(key);
    if (!node) {
        return;
    }
    Reader r(*node, key, errors);
    if (!r.valid()) {
        return;
    }
    parse_block(r, knobs, extra...);
    r.finish();
}

Json block_json(const CounterexampleKnobs& k)
{
    return Json{{"k_min", k.k_min},
                {"k_max", k.k_max},
                {"lipschitz_samples", k.lipschitz_samples},
                {"h_range", k.h_range},
                {"t_max", k.t_max}};
}

Json block_json(const CauchyRateKnobs& k)
{
    Json pairs = Json::array();
    for (const auto& [a, b] : k.h_pairs) {
        pairs.push_back(Json::array({a, b}));
    }
    return Json{{"alphas", k.alphas},
                {"k_min", k.k_min},
                {"k_max", k.k_max},
                {"h_pairs", pairs},
                {"slope_margin", k.slope_margin}};
}

Json block_json(const QuotientKnobs& k)
{
    return Json{{"h", k.h}, {"lambdas", k.lambdas}, {"slope_margin", k.slope_margin}};
}

Json block_json(const DiracCurveKnobs& k)
{
    return Json{{"x", k.x},
                {"lambdas", k.lambdas},
                {"pair_distances", k.pair_distances},
                {"random_pairs", k.random_pairs},
                {"pair_range", k.pair_range},
                {"slack", k.slack}};
}

Json block_json(const DiracApproxKnobs& k)
{
    return Json{{"epsilons", k.epsilons},
                {"samples", k.samples},
                {"max_atoms", k.max_atoms},
                {"support", k.support},
                {"max_weight", k.max_weight}};
}

Json block_json(const WeakResidualKnobs& k)
{
    return Json{{"steps_ladder", k.steps_ladder},
                {"check_steps", k.check_steps},
                {"decay_end", k.decay_end},
                {"bump_start", k.bump_start},
                {"bump_end", k.bump_end},
                {"tolerance", k.tolerance},
                {"min_order", k.min_order},
                {"corruption", k.corruption},
                {"min_ratio", k.min_ratio}};
}

Json block_json(const ControlKnobs& k)
{
    Json out{{"K", k.K}, {"gamma", k.gamma}};
    if (k.target) {
        out["target"] = *k.target;
    }
    out["target_point"]       = k.target_point;
    out["steepness"]          = k.steepness;
    out["midpoint"]           = k.midpoint;
    out["starts"]             = k.starts;
    out["fd_points"]          = k.fd_points;
    out["fd_step"]            = k.fd_step;
    out["fd_tolerance"]       = k.fd_tolerance;
    out["tol"]                = k.tol;
    out["max_iter"]           = k.max_iter;
    out["h_min"]              = k.h_min;
    out["h_max"]              = k.h_max;
    out["grid_coarse"]        = k.grid_coarse;
    out["grid_fine"]          = k.grid_fine;
    out["require_global"]     = k.require_global;
    out["oracle_tolerance"]   = k.oracle_tolerance;
    out["gradient_tolerance"] = k.gradient_tolerance;
    return out;
}

void parse_system(Reader& top, ExperimentConfig& cfg, std::vector<std::string>& errors)
{
    const Json* node = top.raw("system");
    if (!node) {
        return;
    }
    if (node->is_string()) {
        cfg.system_name = node->get<std::string>();
    } else if (node->is_object() && node->contains("name")) {
        Reader r(*node, "system", errors);
        r.read("name", cfg.system_name);
        r.finish();
    } else if (node->is_object()) {
        Reader r(*node, "system", errors);
        int dim = 1;
        if (r.read("dim", dim)) {
            r.check("dim", dim >= 1 && dim <= 16, "must lie in [1, 16]");
        }
        r.require("b");
        for (const char* key : {"b", "b1", "w"}) {
            if (const Json* terms = r.raw(key)) {
                const int out = std::string(key) == "w" ? 1 : dim;
                field_from_json_impl(*terms, r.at(key), dim, out, errors);
            }
        }
        r.finish();
        cfg.system_name  = "custom";
        cfg.system_terms = *node;
        cfg.system_terms["dim"] = dim;
        return;
    } else {
        top.error("system", "expected a catalog name or an object");
        return;
    }
    if (!named_system(cfg.system_name)) {
        std::string names;
        for (const auto& n : system_names()) {
            names += (names.empty() ? "" : ", ") + n;
        }
        top.error("system", "unknown system '" + cfg.system_name + "' (" + names + ")");
    }
}

} // namespace

AnalyticField field_from_json(const Json& terms, int input_dim, int output_dim)
{
    std::vector<std::string> errors;
    auto field = field_from_json_impl(terms, "field", input_dim, output_dim, errors);
    if (!field) {
        throw std::invalid_argument(join(errors));
    }
    return *field;
}

Json field_to_json(const AnalyticField& field)
{
    Json out = Json::array();
    for (const FieldTerm& t : field.terms()) {
        Json term{{"kind", std::string(to_string(t.kind))}};
        switch (t.kind) {
        case FieldKind::constant:
            term["value"] = vector_json(t.amplitude);
            break;
        case FieldKind::affine: {
            Json rows = Json::array();
            for (Eigen::Index i = 0; i < t.matrix.rows(); ++i) {
                rows.push_back(vector_json(t.matrix.row(i).transpose()));
            }
            term["matrix"] = rows;
            term["shift"]  = vector_json(t.shift);
            break;
        }
        case FieldKind::gaussian_bump:
            term["amplitude"] = vector_json(t.amplitude);
            term["center"]    = vector_json(t.center);
            term["width"]     = t.width;
            break;
        case FieldKind::sinusoidal:
            term["amplitude"] = vector_json(t.amplitude);
            term["frequency"] = vector_json(t.frequency);
            term["phase"]     = t.phase;
            break;
        }
        term["time"] = std::string(to_string(t.time));
        out.push_back(term);
    }
    return out;
}

TestFunction test_function_from_json(const Json& term, int dim)
{
    return TestFunction(ScalarField(field_from_json(term, dim, 1)));
}

FlowSystem ExperimentConfig::system() const
{
    if (system_name == "custom") {
        const int dim = system_terms.at("dim").get<int>();
        const VelocityField b(field_from_json(system_terms.at("b"), dim, dim));
        const VelocityField b1 = system_terms.contains("b1")
                                     ? VelocityField(field_from_json(system_terms.at("b1"), dim, dim))
                                     : VelocityField::zero(dim);
        const ScalarField w    = system_terms.contains("w") ? ScalarField(field_from_json(system_terms.at("w"), dim, 1))
                                                            : ScalarField::zero(dim);
        return FlowSystem{b, b1, w};
    }
    const auto named = named_system(system_name);
    if (!named) {
        throw std::invalid_argument("unknown system '" + system_name + "'");
    }
    return named->system;
}

DiscreteMeasure ExperimentConfig::initial_measure() const
{
    if (measure) {
        return *measure;
    }
    const auto named = named_system(system_name);
    if (!named) {
        throw std::invalid_argument("custom systems need an explicit measure");
    }
    return named->mu0;
}

TransportProblem ExperimentConfig::problem() const
{
    return TransportProblem{initial_measure(), system(), t_end, steps};
}

NormOptions ExperimentConfig::norm_options() const
{
    NormOptions o;
    o.alpha      = alpha;
    o.node_cap   = norm.node_cap;
    o.aux_nodes  = norm.aux_nodes;
    o.aux_margin = norm.aux_margin;
    o.tolerance  = norm.tolerance;
    return o;
}

ParseResult parse_config(std::string_view text)
{
    ParseResult result;
    Json document;
    try {
        document = Json::parse(text.begin(), text.end(), nullptr, true, true);
    } catch (const nlohmann::json::parse_error& e) {
        result.errors.push_back(std::string("malformed document: ") + e.what());
        return result;
    }
    return parse_config(document);
}

ParseResult parse_config(const Json& document)
{
    ParseResult result;
    std::vector<std::string>& errors = result.errors;
    ExperimentConfig cfg;
    Reader top(document, "", errors);
    if (!top.valid()) {
        return result;
    }

    std::string kind_name;
    top.require("experiment");
    if (top.read("experiment", kind_name)) {
        const auto kind = parse_experiment_kind(kind_name);
        if (kind) {
            cfg.kind = *kind;
        } else {
            top.error("experiment", "unknown experiment kind '" + kind_name + "'");
        }
    }

    parse_system(top, cfg, errors);
    if (const Json* m = top.raw("measure")) {
        try {
            cfg.measure = measure_from_json(*m);
        } catch (const std::exception& e) {
            top.error("measure", e.what());
        }
    }
    if (cfg.system_name == "custom" && !cfg.measure) {
        top.error("measure", "is required for a custom system");
    }
    if (cfg.measure && (cfg.system_name != "custom" || cfg.system_terms.contains("dim"))) {
        const int dim = cfg.system_name == "custom" ? cfg.system_terms.at("dim").get<int>() : 1;
        top.check("measure", cfg.measure->dim() == dim, "dimension does not match the system");
    }

    if (top.read("alpha", cfg.alpha)) {
        top.check("alpha", cfg.alpha > 0.0 && cfg.alpha <= 1.0, "must lie in (0, 1]");
    }
    if (top.read("t_end", cfg.t_end)) {
        top.check("t_end", cfg.t_end > 0.0 && std::isfinite(cfg.t_end), "must be positive");
    }
    if (top.read("steps", cfg.steps)) {
        top.check("steps", cfg.steps >= 1 && cfg.steps <= 1000000, "must lie in [1, 1000000]");
    }
    parse_norm(top, cfg.norm, errors);
    top.read_seed("seed", cfg.seed);
    if (top.read("output", cfg.output)) {
        top.check("output", !cfg.output.empty(), "must not be empty");
    }

    for (ExperimentKind kind : all_experiment_kinds()) {
        const std::string key(to_string(kind));
        if (top.has(key) && (kind != cfg.kind || kind_name.empty())) {
            top.raw(key);
            top.error(key, "does not apply to experiment '" + kind_name + "'");
        }
    }
    switch (cfg.kind) {
    case ExperimentKind::counterexample:
        parse_kind_block(top, "counterexample", cfg.counterexample, errors);
        break;
    case ExperimentKind::cauchy_rate:
        parse_kind_block(top, "cauchy_rate", cfg.cauchy_rate, errors);
        break;
    case ExperimentKind::quotient_convergence:
        parse_kind_block(top, "quotient_convergence", cfg.quotient_convergence, errors);
        break;
    case ExperimentKind::dirac_curve:
        parse_kind_block(top, "dirac_curve", cfg.dirac_curve, errors);
        break;
    case ExperimentKind::dirac_approx:
        parse_kind_block(top, "dirac_approx", cfg.dirac_approx, errors);
        break;
    case ExperimentKind::weak_residual:
        parse_kind_block(top, "weak_residual", cfg.weak_residual, errors);
        break;
    case ExperimentKind::control:
        parse_kind_block(top, "control", cfg.control, errors, errors);
        break;
    }
    top.finish();

    if (errors.empty()) {
        result.config = std::move(cfg);
    }
    return result;
}

Json to_json(const ExperimentConfig& cfg)
{
    Json out{{"experiment", std::string(to_string(cfg.kind))}};
    if (cfg.system_name == "custom") {
        out["system"] = cfg.system_terms;
    } else {
        out["system"] = cfg.system_name;
    }
    if (cfg.measure) {
        out["measure"] = measure_to_json(*cfg.measure);
    }
    out["alpha"] = cfg.alpha;
    out["t_end"] = cfg.t_end;
    out["steps"] = cfg.steps;
    out["norm"]  = Json{{"node_cap", cfg.norm.node_cap},
                        {"aux_nodes", cfg.norm.aux_nodes},
                        {"aux_margin", cfg.norm.aux_margin},
                        {"tolerance", cfg.norm.tolerance}};
    out["seed"]   = cfg.seed;
    out["output"] = cfg.output;
    const std::string key(to_string(cfg.kind));
    switch (cfg.kind) {
    case ExperimentKind::counterexample:
        out[key] = block_json(cfg.counterexample);
        break;
    case ExperimentKind::cauchy_rate:
        out[key] = block_json(cfg.cauchy_rate);
        break;
    case ExperimentKind::quotient_convergence:
        out[key] = block_json(cfg.quotient_convergence);
        break;
    case ExperimentKind::dirac_curve:
        out[key] = block_json(cfg.dirac_curve);
        break;
    case ExperimentKind::dirac_approx:
        out[key] = block_json(cfg.dirac_approx);
        break;
    case ExperimentKind::weak_residual:
        out[key] = block_json(cfg.weak_residual);
        break;
    case ExperimentKind::control:
        out[key] = block_json(cfg.control);
        break;
    }
    return out;
}

} // namespace mtd
