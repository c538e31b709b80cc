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
#include "mtd/fields.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <string>

namespace mtd
{

std::string_view to_string(FieldKind kind)
{
    switch (kind) {
    case FieldKind::constant:
        return "constant";
    case FieldKind::affine:
        return "affine";
    case FieldKind::gaussian_bump:
        return "gaussian_bump";
    case FieldKind::sinusoidal:
        return "sinusoidal";
    }
    return "unknown";
}

std::string_view to_string(TimeProfile profile)
{
    switch (profile) {
    case TimeProfile::one:
        return "one";
    case TimeProfile::exp_decay:
        return "exp_decay";
    case TimeProfile::cosine:
        return "cos";
    }
    return "unknown";
}

std::optional<FieldKind> parse_field_kind(std::string_view name)
{
    for (FieldKind k : {FieldKind::constant, FieldKind::affine, FieldKind::gaussian_bump, FieldKind::sinusoidal}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

std::optional<TimeProfile> parse_time_profile(std::string_view name)
{
    for (TimeProfile p : {TimeProfile::one, TimeProfile::exp_decay, TimeProfile::cosine}) {
        if (to_string(p) == name) {
            return p;
        }
    }
    return std::nullopt;
}

double time_factor(TimeProfile profile, double t)
{
    switch (profile) {
    case TimeProfile::one:
        return 1.0;
    case TimeProfile::exp_decay:
        return std::exp(-t);
    case TimeProfile::cosine:
        return std::cos(t);
    }
    return 1.0;
}

double interpolated_holder(double sup, double lip, double alpha)
{
    if (lip == 0.0) {
        return 0.0;
    }
    if (alpha >= 1.0) {
        return lip;
    }
    // |g(x) - g(y)| <= min(2 sup, lip |x-y|) <= (2 sup)^(1-alpha) (lip |x-y|)^alpha
    return std::pow(2.0 * sup, 1.0 - alpha) * std::pow(lip, alpha);
}

namespace
{

void validate_term(const FieldTerm& term, int d, int m)
{
    auto fail = [&](const std::string& what) {
        throw std::invalid_argument(std::string("field term '") + std::string(to_string(term.kind)) + "': " + what);
    };
    switch (term.kind) {
    case FieldKind::constant:
        if (term.amplitude.size() != m) {
            fail("value must have " + std::to_string(m) + " components");
        }
        if (!term.amplitude.allFinite()) {
            fail("non-finite value");
        }
        break;
    case FieldKind::affine:
        if (term.matrix.rows() != m || term.matrix.cols() != d) {
            fail("matrix must be " + std::to_string(m) + "x" + std::to_string(d));
        }
        if (term.shift.size() != m) {
            fail("shift must have " + std::to_string(m) + " components");
        }
        if (!term.matrix.allFinite() || !term.shift.allFinite()) {
            fail("non-finite coefficients");
        }
        break;
    case FieldKind::gaussian_bump:
        if (term.amplitude.size() != m || term.center.size() != d) {
            fail("amplitude/center have wrong dimension");
        }
        if (!(term.width > 0.0) || !std::isfinite(term.width)) {
            fail("width must be positive");
        }
        if (!term.amplitude.allFinite() || !term.center.allFinite()) {
            fail("non-finite coefficients");
        }
        break;
    case FieldKind::sinusoidal:
        if (term.amplitude.size() != m || term.frequency.size() != d) {
            fail("amplitude/frequency have wrong dimension");
        }
        if (!term.amplitude.allFinite() || !term.frequency.allFinite() || !std::isfinite(term.phase)) {
            fail("non-finite coefficients");
        }
        break;
    }
}

FieldBounds term_bounds(const FieldTerm& term, double alpha)
{
    FieldBounds b;
    switch (term.kind) {
    case FieldKind::constant:
        b.sup_value = term.amplitude.norm();
        break;
    case FieldKind::affine:
        if (term.matrix.isZero(0.0)) {
            b.sup_value = term.shift.norm();
        }
        else {
            b.sup_value    = std::numeric_limits<double>::infinity();
            b.sup_gradient = term.matrix.norm();
        }
        break;
    case FieldKind::gaussian_bump: {
        const double a = term.amplitude.norm();
        const double w = term.width;
        b.sup_value    = a;
        b.sup_gradient = a / (w * std::sqrt(std::exp(1.0)));
        // Hessian of exp(-r^2/2w^2) has operator norm <= 1/w^2.
        b.holder_gradient = interpolated_holder(b.sup_gradient, a / (w * w), alpha);
        break;
    }
    case FieldKind::sinusoidal: {
        const double a = term.amplitude.norm();
        const double k = term.frequency.norm();
        b.sup_value       = a;
        b.sup_gradient    = a * k;
        b.holder_gradient = interpolated_holder(a * k, a * k * k, alpha);
        break;
    }
    }
    return b;
}

} // namespace

AnalyticField::AnalyticField(int input_dim, int output_dim)
    : m_input_dim(input_dim)
    , m_output_dim(output_dim)
{
    if (input_dim <= 0 || output_dim <= 0) {
        throw std::invalid_argument("AnalyticField: dimensions must be positive");
    }
}

AnalyticField AnalyticField::constant(const Vector& value, int input_dim)
{
    AnalyticField f(input_dim, static_cast<int>(value.size()));
    FieldTerm t;
    t.kind      = FieldKind::constant;
    t.amplitude = value;
    f.add_term(std::move(t));
    return f;
}

AnalyticField AnalyticField::affine(const Matrix& matrix, const Vector& shift)
{
    AnalyticField f(static_cast<int>(matrix.cols()), static_cast<int>(matrix.rows()));
    FieldTerm t;
    t.kind   = FieldKind::affine;
    t.matrix = matrix;
    t.shift  = shift;
    f.add_term(std::move(t));
    return f;
}

AnalyticField AnalyticField::gaussian_bump(const Vector& amplitude, const Vector& center, double width)
{
    AnalyticField f(static_cast<int>(center.size()), static_cast<int>(amplitude.size()));
    FieldTerm t;
    t.kind      = FieldKind::gaussian_bump;
    t.amplitude = amplitude;
    t.center    = center;
    t.width     = width;
    f.add_term(std::move(t));
    return f;
}

AnalyticField AnalyticField::sinusoidal(const Vector& amplitude, const Vector& frequency, double phase)
{
    AnalyticField f(static_cast<int>(frequency.size()), static_cast<int>(amplitude.size()));
    FieldTerm t;
    t.kind      = FieldKind::sinusoidal;
    t.amplitude = amplitude;
    t.frequency = frequency;
    t.phase     = phase;
    f.add_term(std::move(t));
    return f;
}

AnalyticField AnalyticField::with_time(TimeProfile profile) const
{
    AnalyticField f = *this;
    for (FieldTerm& t : f.m_terms) {
        t.time = profile;
    }
    return f;
}

void AnalyticField::add_term(FieldTerm term)
{
    validate_term(term, m_input_dim, m_output_dim);
    m_terms.push_back(std::move(term));
}

bool AnalyticField::is_zero() const
{
    for (const FieldTerm& t : m_terms) {
        switch (t.kind) {
        case FieldKind::constant:
        case FieldKind::gaussian_bump:
        case FieldKind::sinusoidal:
            if (!t.amplitude.isZero(0.0)) {
                return false;
            }
            break;
        case FieldKind::affine:
            if (!t.matrix.isZero(0.0) || !t.shift.isZero(0.0)) {
                return false;
            }
            break;
        }
    }
    return true;
}

bool AnalyticField::is_autonomous() const
{
    for (const FieldTerm& t : m_terms) {
        if (t.time != TimeProfile::one) {
            return false;
        }
    }
    return true;
}

void AnalyticField::evaluate(double t, const Vector& x, Vector& value, Matrix& jacobian) const
{
    if (x.size() != m_input_dim) {
        throw std::invalid_argument("AnalyticField: point has dimension " + std::to_string(x.size()) + ", expected " +
                                    std::to_string(m_input_dim));
    }
    value.setZero(m_output_dim);
    jacobian.setZero(m_output_dim, m_input_dim);
    for (const FieldTerm& term : m_terms) {
        const double m = time_factor(term.time, t);
        switch (term.kind) {
        case FieldKind::constant:
            value.noalias() += m * term.amplitude;
            break;
        case FieldKind::affine:
            value.noalias() += m * (term.matrix * x + term.shift);
            jacobian.noalias() += m * term.matrix;
            break;
        case FieldKind::gaussian_bump: {
            const double inv_w2 = 1.0 / (term.width * term.width);
            const Vector offset = x - term.center;
            const double g      = std::exp(-0.5 * offset.squaredNorm() * inv_w2);
            value.noalias() += (m * g) * term.amplitude;
            jacobian.noalias() -= (m * g * inv_w2) * term.amplitude * offset.transpose();
            break;
        }
        case FieldKind::sinusoidal: {
            const double theta = term.frequency.dot(x) + term.phase;
            value.noalias() += (m * std::sin(theta)) * term.amplitude;
            jacobian.noalias() += (m * std::cos(theta)) * term.amplitude * term.frequency.transpose();
            break;
        }
        }
    }
}

Vector AnalyticField::value(double t, const Vector& x) const
{
    Vector v;
    Matrix j;
    evaluate(t, x, v, j);
    return v;
}

Matrix AnalyticField::jacobian(double t, const Vector& x) const
{
    Vector v;
    Matrix j;
    evaluate(t, x, v, j);
    return j;
}

FieldBounds AnalyticField::bounds(double alpha) const
{
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("Hoelder exponent must lie in (0, 1]");
    }
    FieldBounds total;
    for (const FieldTerm& term : m_terms) {
        const FieldBounds b = term_bounds(term, alpha);
        total.sup_value += b.sup_value;
        total.sup_gradient += b.sup_gradient;
        total.holder_gradient += b.holder_gradient;
    }
    return total;
}

AnalyticField AnalyticField::scaled(double factor) const
{
    AnalyticField f = *this;
    for (FieldTerm& t : f.m_terms) {
        switch (t.kind) {
        case FieldKind::affine:
            t.matrix *= factor;
            t.shift *= factor;
            break;
        default:
            t.amplitude *= factor;
            break;
        }
    }
    return f;
}

AnalyticField operator+(const AnalyticField& lhs, const AnalyticField& rhs)
{
    if (lhs.m_input_dim != rhs.m_input_dim || lhs.m_output_dim != rhs.m_output_dim) {
        throw std::invalid_argument("AnalyticField: cannot add fields of different shapes");
    }
    AnalyticField f = lhs;
    f.m_terms.insert(f.m_terms.end(), rhs.m_terms.begin(), rhs.m_terms.end());
    return f;
}

VelocityField::VelocityField(AnalyticField field)
    : m_field(std::move(field))
{
    if (m_field.input_dim() != m_field.output_dim()) {
        throw std::invalid_argument("VelocityField: field must map R^d to R^d");
    }
}

VelocityField VelocityField::zero(int dim)
{
    return VelocityField(AnalyticField(dim, dim));
}

VelocityField VelocityField::constant(double c)
{
    return VelocityField(AnalyticField::constant(Vector::Constant(1, c), 1));
}

VelocityField VelocityField::affine(double slope, double shift)
{
    return VelocityField(AnalyticField::affine(Matrix::Constant(1, 1, slope), Vector::Constant(1, shift)));
}

VelocityField operator+(const VelocityField& lhs, const VelocityField& rhs)
{
    return VelocityField(lhs.field() + rhs.field());
}

VelocityField operator*(double factor, const VelocityField& field)
{
    return VelocityField(field.field().scaled(factor));
}

ScalarField::ScalarField(AnalyticField field)
    : m_field(std::move(field))
{
    if (m_field.output_dim() != 1) {
        throw std::invalid_argument("ScalarField: field must be scalar-valued");
    }
}

ScalarField ScalarField::zero(int dim)
{
    return ScalarField(AnalyticField(dim, 1));
}

ScalarField ScalarField::constant(double c, int dim)
{
    return ScalarField(AnalyticField::constant(Vector::Constant(1, c), dim));
}

ScalarField ScalarField::gaussian_bump(double amplitude, double center, double width)
{
    return ScalarField(
        AnalyticField::gaussian_bump(Vector::Constant(1, amplitude), Vector::Constant(1, center), width));
}

ScalarField ScalarField::sinusoidal(double amplitude, double frequency, double phase)
{
    return ScalarField(
        AnalyticField::sinusoidal(Vector::Constant(1, amplitude), Vector::Constant(1, frequency), phase));
}

void ScalarField::evaluate(double t, const Vector& x, double& value, Vector& gradient) const
{
    Vector v;
    Matrix j;
    m_field.evaluate(t, x, v, j);
    value    = v[0];
    gradient = j.row(0).transpose();
}

double ScalarField::value(double t, const Vector& x) const
{
    double v;
    Vector g;
    evaluate(t, x, v, g);
    return v;
}

Vector ScalarField::gradient(double t, const Vector& x) const
{
    double v;
    Vector g;
    evaluate(t, x, v, g);
    return g;
}

ScalarField operator+(const ScalarField& lhs, const ScalarField& rhs)
{
    return ScalarField(lhs.field() + rhs.field());
}

TestFunction::TestFunction(ScalarField smooth)
    : m_repr(std::move(smooth))
{
}

TestFunction::TestFunction(HatFunction hat)
    : m_repr(std::move(hat))
{
    if (std::get<HatFunction>(m_repr).center.size() == 0) {
        throw std::invalid_argument("HatFunction: empty center");
    }
}

TestFunction TestFunction::hat(double center)
{
    return TestFunction(HatFunction{Vector::Constant(1, center)});
}

int TestFunction::dim() const
{
    if (is_smooth()) {
        return std::get<ScalarField>(m_repr).dim();
    }
    return static_cast<int>(std::get<HatFunction>(m_repr).center.size());
}

const ScalarField& TestFunction::smooth() const
{
    if (!is_smooth()) {
        throw std::invalid_argument("test function is not C^{1+alpha} (hat function)");
    }
    return std::get<ScalarField>(m_repr);
}

double TestFunction::value(const Vector& x) const
{
    if (is_smooth()) {
        return std::get<ScalarField>(m_repr).value(0.0, x);
    }
    const double r = (x - std::get<HatFunction>(m_repr).center).norm();
    return r <= 1.0 ? r - 1.0 : 0.0;
}

Vector TestFunction::gradient(const Vector& x) const
{
    if (is_smooth()) {
        return std::get<ScalarField>(m_repr).gradient(0.0, x);
    }
    const Vector offset = x - std::get<HatFunction>(m_repr).center;
    const double r      = offset.norm();
    if (r == 0.0 || r > 1.0) {
        return Vector::Zero(x.size());
    }
    return offset / r;
}

FieldBounds TestFunction::bounds(double alpha) const
{
    if (is_smooth()) {
        return std::get<ScalarField>(m_repr).bounds(alpha);
    }
    return FieldBounds{1.0, 1.0, std::numeric_limits<double>::infinity()};
}

TestFunction TestFunction::normalized(double alpha) const
{
    const ScalarField& f = smooth();
    const double n       = f.bounds(alpha).norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::invalid_argument("test function has no finite nonzero C^{1+alpha} budget");
    }
    return TestFunction(f.scaled(1.0 / n));
}

void warn_if_outside_standard_range(double h)
{
    static std::atomic<bool> warned{false};
    if (std::abs(h) > 0.5 && !warned.exchange(true)) {
        std::cerr << "warning: perturbation parameter h = " << h << " lies outside [-1/2, 1/2]\n";
    }
}

FieldEval perturbed_velocity(const VelocityField& b, const VelocityField& b1, double h, double t, const Vector& x)
{
    warn_if_outside_standard_range(h);
    FieldEval out;
    Vector v1;
    Matrix j1;
    b.evaluate(t, x, out.value, out.jacobian);
    b1.evaluate(t, x, v1, j1);
    out.value.noalias() += h * v1;
    out.jacobian.noalias() += h * j1;
    return out;
}

FieldEval eval_field(const VelocityField& spec, double t, const Vector& x)
{
    FieldEval out;
    spec.evaluate(t, x, out.value, out.jacobian);
    return out;
}

std::pair<double, Vector> eval_field(const ScalarField& spec, double t, const Vector& x)
{
    std::pair<double, Vector> out;
    spec.evaluate(t, x, out.first, out.second);
    return out;
}

} // namespace mtd
