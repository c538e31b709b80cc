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
#include "mtd/flow.hpp"

#include "mtd/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace mtd
{

void FlowSystem::validate() const
{
    if (b1.dim() != b.dim() || w.dim() != b.dim()) {
        throw std::invalid_argument("FlowSystem: b, b1 and w must share the spatial dimension");
    }
}

FlowSystem recentered(const FlowSystem& system, double h)
{
    return FlowSystem{system.b + h * system.b1, system.b1, system.w};
}

namespace
{

std::string integration_message(std::size_t particle, double time)
{
    std::ostringstream os;
    os << "integrate_bundle: non-finite state for particle " << particle << " at t = " << time;
    return os.str();
}

class AugmentedRhs
{
public:
    AugmentedRhs(const FlowSystem& system, double h)
        : m_system(system)
        , m_h(h)
        , m_d(system.dim())
    {
    }

    void operator()(double t, const Vector& y, Vector& dy)
    {
        const auto x = y.head(m_d);
        const auto s = y.segment(m_d, m_d);
        m_x          = x;
        m_system.b.evaluate(t, m_x, m_vb, m_jb);
        m_system.b1.evaluate(t, m_x, m_v1, m_j1);
        double wv;
        m_system.w.evaluate(t, m_x, wv, m_wg);

        dy.resize(y.size());
        dy.head(m_d)          = m_vb + m_h * m_v1;
        dy.segment(m_d, m_d)  = (m_jb + m_h * m_j1) * s + m_v1;
        dy[2 * m_d]           = wv;
        dy[2 * m_d + 1]       = m_wg.dot(s);
    }

private:
    const FlowSystem& m_system;
    double m_h;
    int m_d;
    Vector m_x, m_vb, m_v1, m_wg;
    Matrix m_jb, m_j1;
};

} // namespace

IntegrationError::IntegrationError(std::size_t particle, double time)
    : std::runtime_error(integration_message(particle, time))
    , m_particle(particle)
    , m_time(time)
{
}

TrajectoryBundle::TrajectoryBundle(int dim, std::size_t particles, double h, double t_start, double t_end, int steps)
    : m_dim(dim)
    , m_particles(particles)
    , m_h(h)
    , m_t_start(t_start)
    , m_t_end(t_end)
    , m_steps(steps)
{
    if (dim <= 0) {
        throw std::invalid_argument("TrajectoryBundle: dimension must be positive");
    }
    if (steps < 1) {
        throw std::invalid_argument("integrate_bundle: steps must be at least 1");
    }
    if (!(t_end > t_start)) {
        throw std::invalid_argument("integrate_bundle: t_end must exceed the start time");
    }
    m_states.setZero(2 * dim + 2, static_cast<Eigen::Index>(particles * nodes()));
}

double TrajectoryBundle::time(std::size_t k) const
{
    if (k == nodes() - 1) {
        return m_t_end;
    }
    return m_t_start + (m_t_end - m_t_start) * static_cast<double>(k) / m_steps;
}

TrajectoryBundle integrate_bundle(const FlowSystem& system, double h, const PointList& initial_points, double t_end,
                                  int steps, double t_start)
{
    system.validate();
    warn_if_outside_standard_range(h);
    const int d = system.dim();
    for (const Vector& y : initial_points) {
        if (y.size() != d) {
            throw std::invalid_argument("integrate_bundle: initial point has wrong dimension");
        }
    }

    TrajectoryBundle bundle(d, initial_points.size(), h, t_start, t_end, steps);
    const double dt = bundle.dt();

    parallel_for(initial_points.size(), [&](std::size_t i) {
        AugmentedRhs rhs(system, h);
        Vector y = Vector::Zero(2 * d + 2);
        y.head(d) = initial_points[i];
        bundle.state(i, 0) = y;
        Vector k1, k2, k3, k4, tmp;
        for (int n = 0; n < steps; ++n) {
            const double t = bundle.time(static_cast<std::size_t>(n));
            rhs(t, y, k1);
            tmp = y + 0.5 * dt * k1;
            rhs(t + 0.5 * dt, tmp, k2);
            tmp = y + 0.5 * dt * k2;
            rhs(t + 0.5 * dt, tmp, k3);
            tmp = y + dt * k3;
            rhs(t + dt, tmp, k4);
            y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (!y.allFinite()) {
                throw IntegrationError(i, bundle.time(static_cast<std::size_t>(n) + 1));
            }
            bundle.state(i, static_cast<std::size_t>(n) + 1) = y;
        }
    });
    return bundle;
}

int default_steps(double t_end)
{
    return std::max(1, static_cast<int>(std::ceil(256.0 * t_end - 1e-9)));
}

} // namespace mtd
