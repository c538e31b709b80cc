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
#ifndef MTD_FLOW_HPP
#define MTD_FLOW_HPP

#include "mtd/fields.hpp"
#include "mtd/types.hpp"

#include <cstddef>
#include <stdexcept>

namespace mtd
{

/// Unperturbed velocity b, perturbation direction b1, and growth rate w.
struct FlowSystem {
    VelocityField b;
    VelocityField b1;
    ScalarField w;

    int dim() const
    {
        return b.dim();
    }
    /// Throws std::invalid_argument if the three fields disagree on dimension.
    void validate() const;
};

/// Velocity field b + h b1, with b1 kept for the re-centred system at h.
FlowSystem recentered(const FlowSystem& system, double h);

/// Raised when the augmented state of a particle stops being finite.
class IntegrationError : public std::runtime_error
{
public:
    IntegrationError(std::size_t particle, double time);

    std::size_t particle() const
    {
        return m_particle;
    }
    double time() const
    {
        return m_time;
    }

private:
    std::size_t m_particle;
    double m_time;
};

/**
 * Per particle and per time node: position X, sensitivity dX/dh, accumulated
 * growth W = int w(s, X(s)) ds and its sensitivity dW/dh.
 *
 * States are stored column-wise, one column of length 2d + 2 per
 * (particle, node), laid out as [X, dXdh, W, dWdh].
 */
class TrajectoryBundle
{
public:
    TrajectoryBundle(int dim, std::size_t particles, double h, double t_start, double t_end, int steps);

    int dim() const
    {
        return m_dim;
    }
    std::size_t particles() const
    {
        return m_particles;
    }
    int steps() const
    {
        return m_steps;
    }
    std::size_t nodes() const
    {
        return static_cast<std::size_t>(m_steps) + 1;
    }
    double h() const
    {
        return m_h;
    }
    double t_start() const
    {
        return m_t_start;
    }
    double t_end() const
    {
        return m_t_end;
    }
    double dt() const
    {
        return (m_t_end - m_t_start) / m_steps;
    }
    double time(std::size_t k) const;

    auto state(std::size_t i, std::size_t k) const
    {
        return m_states.col(column(i, k));
    }
    auto state(std::size_t i, std::size_t k)
    {
        return m_states.col(column(i, k));
    }
    auto position(std::size_t i, std::size_t k) const
    {
        return state(i, k).head(m_dim);
    }
    auto sensitivity(std::size_t i, std::size_t k) const
    {
        return state(i, k).segment(m_dim, m_dim);
    }
    double growth(std::size_t i, std::size_t k) const
    {
        return m_states(2 * m_dim, column(i, k));
    }
    double growth_sensitivity(std::size_t i, std::size_t k) const
    {
        return m_states(2 * m_dim + 1, column(i, k));
    }

    /// Node index of the final time.
    std::size_t last() const
    {
        return static_cast<std::size_t>(m_steps);
    }

private:
    Eigen::Index column(std::size_t i, std::size_t k) const
    {
        return static_cast<Eigen::Index>(i * nodes() + k);
    }

    int m_dim;
    std::size_t m_particles;
    double m_h;
    double m_t_start;
    double m_t_end;
    int m_steps;
    Matrix m_states;
};

/**
 * Classical fourth-order Runge-Kutta integration, fixed step
 * (t_end - t_start) / steps, of the characteristic system with sensitivity
 * augmentation
 *
 *     X'    = b(t,X) + h b1(t,X)
 *     S'    = (Db + h Db1)(t,X) S + b1(t,X)      S = dX/dh
 *     W'    = w(t,X)
 *     SW'   = grad w(t,X) . S                    SW = dW/dh
 *
 * from X = y, S = 0, W = 0, SW = 0. Particles are integrated independently
 * (in parallel when a thread count > 1 is configured).
 */
TrajectoryBundle integrate_bundle(const FlowSystem& system, double h, const PointList& initial_points, double t_end,
                                  int steps, double t_start = 0.0);

/// Default step count: 256 per unit time, at least one.
int default_steps(double t_end);

} // namespace mtd

#endif // MTD_FLOW_HPP
