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
#include "mtd/pushforward.hpp"

#include <cmath>
#include <stdexcept>

namespace mtd
{

SolutionCurve::SolutionCurve(DiscreteMeasure mu0, TrajectoryBundle bundle)
    : m_mu0(std::move(mu0))
    , m_bundle(std::move(bundle))
{
    if (m_bundle.particles() != m_mu0.size() || m_bundle.dim() != m_mu0.dim()) {
        throw std::invalid_argument("SolutionCurve: bundle does not match the initial measure");
    }
}

double SolutionCurve::weight(std::size_t i, std::size_t k) const
{
    if (k == 0) {
        return m_mu0.weight(i);
    }
    return m_mu0.weight(i) * std::exp(m_bundle.growth(i, k));
}

DiscreteMeasure SolutionCurve::at(std::size_t k) const
{
    if (k >= nodes()) {
        throw std::out_of_range("SolutionCurve: time node out of range");
    }
    if (k == 0) {
        return m_mu0;
    }
    PointList points;
    std::vector<double> weights;
    points.reserve(m_mu0.size());
    weights.reserve(m_mu0.size());
    for (std::size_t i = 0; i < m_mu0.size(); ++i) {
        points.emplace_back(m_bundle.position(i, k));
        weights.push_back(weight(i, k));
    }
    return DiscreteMeasure(m_mu0.dim(), std::move(points), std::move(weights));
}

std::vector<DiscreteMeasure> SolutionCurve::snapshots() const
{
    std::vector<DiscreteMeasure> out;
    out.reserve(nodes());
    for (std::size_t k = 0; k < nodes(); ++k) {
        out.push_back(at(k));
    }
    return out;
}

std::vector<double> SolutionCurve::times() const
{
    std::vector<double> out(nodes());
    for (std::size_t k = 0; k < nodes(); ++k) {
        out[k] = time(k);
    }
    return out;
}

SolutionCurve solve_measure(const DiscreteMeasure& mu0, const FlowSystem& system, double h, double t_end, int steps)
{
    if (mu0.empty()) {
        throw std::invalid_argument("solve_measure: initial measure is empty");
    }
    return SolutionCurve(mu0, integrate_bundle(system, h, mu0.points(), t_end, steps));
}

SolutionCurve solve_measure(const TransportProblem& problem, double h)
{
    return solve_measure(problem.mu0, problem.system, h, problem.t_end, problem.steps);
}

DiscreteMeasure solve_terminal(const TransportProblem& problem, double h)
{
    return canonicalize(solve_measure(problem, h).terminal());
}

TimeWindow TimeWindow::cubic_decay(double support_end)
{
    if (!(support_end > 0.0)) {
        throw std::invalid_argument("TimeWindow: support end must be positive");
    }
    return TimeWindow{WindowKind::cubic_decay, 0.0, support_end};
}

TimeWindow TimeWindow::bump(double a, double b)
{
    if (!(a >= 0.0 && b > a)) {
        throw std::invalid_argument("TimeWindow: bump needs 0 <= a < b");
    }
    return TimeWindow{WindowKind::bump, a, b};
}

double TimeWindow::value(double t) const
{
    if (t < start || t > end) {
        return 0.0;
    }
    switch (kind) {
    case WindowKind::cubic_decay: {
        const double u = 1.0 - t / end;
        return u * u * u;
    }
    case WindowKind::bump: {
        const double len = end - start;
        const double q   = 4.0 * (t - start) * (end - t) / (len * len);
        return q * q;
    }
    }
    return 0.0;
}

double TimeWindow::derivative(double t) const
{
    if (t < start || t > end) {
        return 0.0;
    }
    switch (kind) {
    case WindowKind::cubic_decay: {
        const double u = 1.0 - t / end;
        return -3.0 * u * u / end;
    }
    case WindowKind::bump: {
        const double len = end - start;
        const double q   = 4.0 * (t - start) * (end - t) / (len * len);
        const double dq  = 4.0 * (start + end - 2.0 * t) / (len * len);
        return 2.0 * q * dq;
    }
    }
    return 0.0;
}

double weak_residual(std::span<const double> times, std::span<const DiscreteMeasure> snapshots,
                     const DiscreteMeasure& mu0, const SpaceTimeTest& phi, const FlowSystem& system, double h)
{
    if (times.size() != snapshots.size() || times.size() < 2) {
        throw std::invalid_argument("weak_residual: need matching time and snapshot sequences");
    }
    if (!phi.space.is_smooth()) {
        throw std::invalid_argument("weak_residual: spatial test function must be C^1");
    }
    if (phi.window.end > times.back() + 1e-12) {
        throw std::invalid_argument("weak_residual: test function support exceeds the integrated horizon");
    }
    const ScalarField& eta = phi.space.smooth();

    Vector vb, v1, grad;
    Matrix jb, j1;
    auto integrand = [&](std::size_t k) {
        const double t   = times[k];
        const double chi = phi.window.value(t);
        const double dch = phi.window.derivative(t);
        if (chi == 0.0 && dch == 0.0) {
            return 0.0;
        }
        const DiscreteMeasure& mu = snapshots[k];
        double sum = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i) {
            const Vector& x = mu.point(i);
            double eta_x;
            eta.evaluate(0.0, x, eta_x, grad);
            system.b.evaluate(t, x, vb, jb);
            system.b1.evaluate(t, x, v1, j1);
            const double wx = system.w.value(t, x);
            // d/dt <phi, mu_t> = <d_t phi + b . grad phi + w phi, mu_t> for mu_t = X#(e^W mu0).
            sum += mu.weight(i) * (dch * eta_x + chi * ((vb + h * v1).dot(grad) + wx * eta_x));
        }
        return sum;
    };

    double integral = 0.0;
    double previous = integrand(0);
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double current = integrand(k);
        integral += 0.5 * (times[k] - times[k - 1]) * (previous + current);
        previous = current;
    }
    const double initial = phi.window.value(0.0) * mu0.integrate([&](const Vector& x) {
        return eta.value(0.0, x);
    });
    return std::abs(integral + initial);
}

double weak_residual(const SolutionCurve& curve, const SpaceTimeTest& phi, const FlowSystem& system)
{
    const std::vector<double> times            = curve.times();
    const std::vector<DiscreteMeasure> snaps   = curve.snapshots();
    return weak_residual(times, snaps, curve.initial(), phi, system, curve.h());
}

} // namespace mtd
