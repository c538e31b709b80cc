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
#include "mtd/functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mtd
{

FirstOrderFunctional::FirstOrderFunctional(int dim)
    : m_dim(dim)
{
    if (dim <= 0) {
        throw std::invalid_argument("FirstOrderFunctional: dimension must be positive");
    }
}

FirstOrderFunctional::FirstOrderFunctional(int dim, PointList points, std::vector<double> densities, PointList dipoles)
    : m_dim(dim)
    , m_points(std::move(points))
    , m_densities(std::move(densities))
    , m_dipoles(std::move(dipoles))
{
    if (dim <= 0) {
        throw std::invalid_argument("FirstOrderFunctional: dimension must be positive");
    }
    if (m_points.size() != m_densities.size() || m_points.size() != m_dipoles.size()) {
        throw std::invalid_argument("FirstOrderFunctional: coefficient lists differ in length");
    }
    for (std::size_t i = 0; i < m_points.size(); ++i) {
        if (m_points[i].size() != dim || m_dipoles[i].size() != dim) {
            throw std::invalid_argument("FirstOrderFunctional: atom " + std::to_string(i) + " has wrong dimension");
        }
        if (!m_points[i].allFinite() || !m_dipoles[i].allFinite() || !std::isfinite(m_densities[i])) {
            throw std::invalid_argument("FirstOrderFunctional: non-finite atom at index " + std::to_string(i));
        }
    }
}

FirstOrderFunctional::FirstOrderFunctional(const DiscreteMeasure& mu)
    : FirstOrderFunctional(mu.dim(), mu.points(), mu.weights(), PointList(mu.size(), Vector::Zero(mu.dim())))
{
}

bool FirstOrderFunctional::has_dipoles() const
{
    return std::any_of(m_dipoles.begin(), m_dipoles.end(), [](const Vector& v) {
        return !v.isZero(0.0);
    });
}

double FirstOrderFunctional::coefficient_norm() const
{
    double total = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        total += std::abs(m_densities[i]) + m_dipoles[i].norm();
    }
    return total;
}

FirstOrderFunctional canonicalize(const FirstOrderFunctional& f)
{
    const std::size_t n = f.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        const Vector& a = f.points()[i];
        const Vector& b = f.points()[j];
        return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
    });

    PointList reps;
    std::vector<double> dens;
    PointList dips;
    std::vector<double> dens_mag;
    std::vector<double> dip_mag;
    for (std::size_t idx : order) {
        const Vector& x = f.points()[idx];
        bool merged     = false;
        for (std::size_t c = reps.size(); c-- > 0;) {
            if (x[0] - reps[c][0] > merge_tolerance) {
                break;
            }
            if ((x - reps[c]).norm() <= merge_tolerance) {
                dens[c] += f.densities()[idx];
                dips[c] += f.dipoles()[idx];
                dens_mag[c] += std::abs(f.densities()[idx]);
                dip_mag[c] += f.dipoles()[idx].norm();
                merged = true;
                break;
            }
        }
        if (!merged) {
            reps.push_back(x);
            dens.push_back(f.densities()[idx]);
            dips.push_back(f.dipoles()[idx]);
            dens_mag.push_back(std::abs(f.densities()[idx]));
            dip_mag.push_back(f.dipoles()[idx].norm());
        }
    }

    constexpr double cancel = 4.0 * std::numeric_limits<double>::epsilon();
    PointList points;
    std::vector<double> densities;
    PointList dipoles;
    for (std::size_t c = 0; c < reps.size(); ++c) {
        double s = dens[c];
        Vector v = dips[c];
        if (std::abs(s) <= cancel * dens_mag[c]) {
            s = 0.0;
        }
        if (v.norm() <= cancel * dip_mag[c]) {
            v.setZero();
        }
        if (s == 0.0 && v.isZero(0.0)) {
            continue;
        }
        points.push_back(reps[c]);
        densities.push_back(s);
        dipoles.push_back(std::move(v));
    }
    return FirstOrderFunctional(f.dim(), std::move(points), std::move(densities), std::move(dipoles));
}

FirstOrderFunctional linear_combine(double a, const FirstOrderFunctional& f, double b, const FirstOrderFunctional& g)
{
    if (f.dim() != g.dim()) {
        throw std::invalid_argument("linear_combine: dimension mismatch");
    }
    PointList points;
    std::vector<double> densities;
    PointList dipoles;
    for (std::size_t i = 0; i < f.size(); ++i) {
        points.push_back(f.points()[i]);
        densities.push_back(a * f.densities()[i]);
        dipoles.push_back(a * f.dipoles()[i]);
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        points.push_back(g.points()[i]);
        densities.push_back(b * g.densities()[i]);
        dipoles.push_back(b * g.dipoles()[i]);
    }
    return canonicalize(FirstOrderFunctional(f.dim(), std::move(points), std::move(densities), std::move(dipoles)));
}

FirstOrderFunctional dirac_derivative(const Vector& x, const Vector& direction)
{
    if (x.size() != direction.size()) {
        throw std::invalid_argument("dirac_derivative: direction has wrong dimension");
    }
    return FirstOrderFunctional(static_cast<int>(x.size()), {x}, {0.0}, {direction});
}

} // namespace mtd
