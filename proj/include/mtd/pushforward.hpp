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
#ifndef MTD_PUSHFORWARD_HPP
#define MTD_PUSHFORWARD_HPP

#include "mtd/fields.hpp"
#include "mtd/flow.hpp"
#include "mtd/measures.hpp"

#include <span>
#include <vector>

namespace mtd
{

/// Initial measure, fields, horizon and step count of one transport experiment.
struct TransportProblem {
    DiscreteMeasure mu0;
    FlowSystem system;
    double t_end = 1.0;
    int steps    = 256;
};

/**
 * mu_t^h = X(t, . ; h) # (exp(W(t, .)) mu0) sampled on the integrator grid.
 * Snapshot k keeps the particle order of mu0 (no canonicalization), so the
 * snapshot at k = 0 is mu0 itself.
 */
class SolutionCurve
{
public:
    SolutionCurve(DiscreteMeasure mu0, TrajectoryBundle bundle);

    const DiscreteMeasure& initial() const
    {
        return m_mu0;
    }
    const TrajectoryBundle& bundle() const
    {
        return m_bundle;
    }
    std::size_t nodes() const
    {
        return m_bundle.nodes();
    }
    double time(std::size_t k) const
    {
        return m_bundle.time(k);
    }
    double h() const
    {
        return m_bundle.h();
    }

    /// w0_i exp(W_i(t_k)).
    double weight(std::size_t i, std::size_t k) const;

    DiscreteMeasure at(std::size_t k) const;
    DiscreteMeasure terminal() const
    {
        return at(m_bundle.last());
    }
    std::vector<DiscreteMeasure> snapshots() const;
    std::vector<double> times() const;

private:
    DiscreteMeasure m_mu0;
    TrajectoryBundle m_bundle;
};

SolutionCurve solve_measure(const DiscreteMeasure& mu0, const FlowSystem& system, double h, double t_end, int steps);
SolutionCurve solve_measure(const TransportProblem& problem, double h);

/// Canonicalized terminal measure mu_{t_end}^h.
DiscreteMeasure solve_terminal(const TransportProblem& problem, double h);

enum class WindowKind
{
    cubic_decay,
    bump,
};

/**
 * C^1 time profile with compact support in [0, inf).
 *   cubic_decay: (1 - t/T)^3 on [0, T]; nonzero at t = 0, so it tests the initial-data term.
 *   bump:        (4 (t-a)(b-t) / (b-a)^2)^2 on [a, b].
 */
struct TimeWindow {
    WindowKind kind = WindowKind::cubic_decay;
    double start    = 0.0;
    double end      = 1.0;

    static TimeWindow cubic_decay(double support_end);
    static TimeWindow bump(double a, double b);

    double value(double t) const;
    double derivative(double t) const;
};

/// phi(t, x) = window(t) * space(x).
struct SpaceTimeTest {
    TimeWindow window;
    TestFunction space;
};

/**
 * Residual of the weak formulation
 *
 *   | int_0^inf int (d_t phi + b^h . grad phi + w phi) d mu_t dt + int phi(0,.) d mu0 |
 *
 * with trapezoidal time quadrature on the curve grid. b^h uses the curve's h.
 */
double weak_residual(const SolutionCurve& curve, const SpaceTimeTest& phi, const FlowSystem& system);

/// Same residual over an explicit snapshot sequence; mu0 enters only the initial-data term.
double weak_residual(std::span<const double> times, std::span<const DiscreteMeasure> snapshots,
                     const DiscreteMeasure& mu0, const SpaceTimeTest& phi, const FlowSystem& system, double h);

} // namespace mtd

#endif // MTD_PUSHFORWARD_HPP
