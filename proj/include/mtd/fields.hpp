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
#ifndef MTD_FIELDS_HPP
#define MTD_FIELDS_HPP

#include "mtd/types.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace mtd
{

enum class FieldKind
{
    constant,
    affine,
    gaussian_bump,
    sinusoidal,
};

/// Scalar factor m(t) multiplying a term; every profile satisfies |m| <= 1 on t >= 0.
enum class TimeProfile
{
    one,
    exp_decay,
    cosine,
};

std::string_view to_string(FieldKind kind);
std::string_view to_string(TimeProfile profile);
std::optional<FieldKind> parse_field_kind(std::string_view name);
std::optional<TimeProfile> parse_time_profile(std::string_view name);

double time_factor(TimeProfile profile, double t);

/**
 * One catalog term R^d -> R^m, multiplied by a time profile.
 *
 *   constant:       amplitude
 *   affine:         matrix * x + shift
 *   gaussian_bump:  amplitude * exp(-|x - center|^2 / (2 width^2))
 *   sinusoidal:     amplitude * sin(frequency . x + phase)
 */
struct FieldTerm {
    FieldKind kind       = FieldKind::constant;
    TimeProfile time     = TimeProfile::one;
    Vector amplitude;
    Matrix matrix;
    Vector shift;
    Vector center;
    double width = 1.0;
    Vector frequency;
    double phase = 0.0;
};

/// Closed-form bounds over t >= 0 and x in R^d. Gradient norms are Frobenius.
struct FieldBounds {
    double sup_value       = 0.0;
    double sup_gradient    = 0.0;
    double holder_gradient = 0.0;

    /// ||f||_{C^{1+alpha}} budget: sup|f| + sup|grad f| + [grad f]_alpha.
    double norm() const
    {
        return sup_value + sup_gradient + holder_gradient;
    }
};

/// alpha-Hoelder constant of a map with sup norm `sup` and Lipschitz constant `lip`.
double interpolated_holder(double sup, double lip, double alpha);

/**
 * Superposition of catalog terms, R^d -> R^m. The catalog is closed so that
 * Hoelder constants can be certified in closed form.
 */
class AnalyticField
{
public:
    AnalyticField(int input_dim, int output_dim);

    static AnalyticField constant(const Vector& value, int input_dim);
    static AnalyticField affine(const Matrix& matrix, const Vector& shift);
    static AnalyticField gaussian_bump(const Vector& amplitude, const Vector& center, double width);
    static AnalyticField sinusoidal(const Vector& amplitude, const Vector& frequency, double phase);

    /// Copy with every term's time profile replaced.
    AnalyticField with_time(TimeProfile profile) const;

    void add_term(FieldTerm term);

    int input_dim() const
    {
        return m_input_dim;
    }
    int output_dim() const
    {
        return m_output_dim;
    }
    const std::vector<FieldTerm>& terms() const
    {
        return m_terms;
    }

    bool is_zero() const;
    bool is_autonomous() const;

    /// Value (m) and Jacobian (m x d) at (t, x).
    void evaluate(double t, const Vector& x, Vector& value, Matrix& jacobian) const;
    Vector value(double t, const Vector& x) const;
    Matrix jacobian(double t, const Vector& x) const;

    FieldBounds bounds(double alpha) const;

    AnalyticField scaled(double factor) const;

    friend AnalyticField operator+(const AnalyticField& lhs, const AnalyticField& rhs);
    friend AnalyticField operator*(double factor, const AnalyticField& field)
    {
        return field.scaled(factor);
    }

private:
    int m_input_dim;
    int m_output_dim;
    std::vector<FieldTerm> m_terms;
};

/// Velocity field b : [0, inf) x R^d -> R^d.
class VelocityField
{
public:
    explicit VelocityField(AnalyticField field);
    static VelocityField zero(int dim);
    static VelocityField constant(double c);
    static VelocityField affine(double slope, double shift);

    int dim() const
    {
        return m_field.input_dim();
    }
    const AnalyticField& field() const
    {
        return m_field;
    }
    bool is_zero() const
    {
        return m_field.is_zero();
    }
    bool is_autonomous() const
    {
        return m_field.is_autonomous();
    }
    void evaluate(double t, const Vector& x, Vector& value, Matrix& jacobian) const
    {
        m_field.evaluate(t, x, value, jacobian);
    }
    FieldBounds bounds(double alpha) const
    {
        return m_field.bounds(alpha);
    }

private:
    AnalyticField m_field;
};

VelocityField operator+(const VelocityField& lhs, const VelocityField& rhs);
VelocityField operator*(double factor, const VelocityField& field);

/// Scalar field w : [0, inf) x R^d -> R (growth rates, kernels, test functions).
class ScalarField
{
public:
    explicit ScalarField(AnalyticField field);
    static ScalarField zero(int dim);
    static ScalarField constant(double c, int dim = 1);
    static ScalarField gaussian_bump(double amplitude, double center, double width);
    static ScalarField sinusoidal(double amplitude, double frequency, double phase);

    int dim() const
    {
        return m_field.input_dim();
    }
    const AnalyticField& field() const
    {
        return m_field;
    }
    bool is_zero() const
    {
        return m_field.is_zero();
    }

    double value(double t, const Vector& x) const;
    Vector gradient(double t, const Vector& x) const;
    void evaluate(double t, const Vector& x, double& value, Vector& gradient) const;

    FieldBounds bounds(double alpha) const
    {
        return m_field.bounds(alpha);
    }
    ScalarField scaled(double factor) const
    {
        return ScalarField(m_field.scaled(factor));
    }

private:
    AnalyticField m_field;
};

ScalarField operator+(const ScalarField& lhs, const ScalarField& rhs);

/// f(x) = |x - center| - 1 on the unit ball around center, 0 outside. W^{1,inf}, not C^1.
struct HatFunction {
    Vector center;
};

/**
 * Spatial test function. Smooth members come from the scalar catalog and
 * are evaluated at t = 0; the hat function is admitted only by the flat
 * metric tooling.
 */
class TestFunction
{
public:
    TestFunction(ScalarField smooth);
    TestFunction(HatFunction hat);

    static TestFunction hat(double center);

    bool is_smooth() const
    {
        return std::holds_alternative<ScalarField>(m_repr);
    }
    int dim() const;
    const ScalarField& smooth() const;

    double value(const Vector& x) const;
    Vector gradient(const Vector& x) const;
    double value(double x) const
    {
        return value(Vector::Constant(1, x));
    }
    double derivative(double x) const
    {
        return gradient(Vector::Constant(1, x))[0];
    }

    /// Closed-form norm components; the hat function has an infinite Hoelder term.
    FieldBounds bounds(double alpha) const;

    /// Rescaled so that the certified C^{1+alpha} budget equals one.
    TestFunction normalized(double alpha) const;

private:
    std::variant<ScalarField, HatFunction> m_repr;
};

struct FieldEval {
    Vector value;
    Matrix jacobian;
};

/// b^h = b + h b1 and its spatial Jacobian. Warns (once per process) when |h| > 1/2.
FieldEval perturbed_velocity(const VelocityField& b, const VelocityField& b1, double h, double t, const Vector& x);

FieldEval eval_field(const VelocityField& spec, double t, const Vector& x);
std::pair<double, Vector> eval_field(const ScalarField& spec, double t, const Vector& x);

/// Emit the |h| > 1/2 warning at most once.
void warn_if_outside_standard_range(double h);

} // namespace mtd

#endif // MTD_FIELDS_HPP
