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
#include "mtd/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mtd
{

namespace
{

bool lexicographic_less(const Vector& a, const Vector& b)
{
    for (Eigen::Index k = 0; k < a.size(); ++k) {
        if (a[k] < b[k]) {
            return true;
        }
        if (b[k] < a[k]) {
            return false;
        }
    }
    return false;
}

} // namespace

DiscreteMeasure::DiscreteMeasure(int dim)
    : m_dim(dim)
{
    if (dim <= 0) {
        throw std::invalid_argument("DiscreteMeasure: dimension must be positive");
    }
}

DiscreteMeasure::DiscreteMeasure(int dim, PointList points, std::vector<double> weights)
    : m_dim(dim)
    , m_points(std::move(points))
    , m_weights(std::move(weights))
{
    if (dim <= 0) {
        throw std::invalid_argument("DiscreteMeasure: dimension must be positive");
    }
    if (m_points.size() != m_weights.size()) {
        throw std::invalid_argument("DiscreteMeasure: " + std::to_string(m_points.size()) + " points but " +
                                    std::to_string(m_weights.size()) + " weights");
    }
    for (std::size_t i = 0; i < m_points.size(); ++i) {
        if (m_points[i].size() != dim) {
            throw std::invalid_argument("DiscreteMeasure: point " + std::to_string(i) + " has dimension " +
                                        std::to_string(m_points[i].size()) + ", expected " + std::to_string(dim));
        }
        if (!m_points[i].allFinite() || !std::isfinite(m_weights[i])) {
            throw std::invalid_argument("DiscreteMeasure: non-finite atom at index " + std::to_string(i));
        }
    }
}

DiscreteMeasure DiscreteMeasure::dirac(const Vector& x, double weight)
{
    return DiscreteMeasure(static_cast<int>(x.size()), {x}, {weight});
}

DiscreteMeasure DiscreteMeasure::dirac(double x, double weight)
{
    return dirac(Vector::Constant(1, x), weight);
}

double DiscreteMeasure::mass() const
{
    return std::accumulate(m_weights.begin(), m_weights.end(), 0.0);
}

DiscreteMeasure canonicalize(const DiscreteMeasure& mu)
{
    const std::size_t n = mu.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return lexicographic_less(mu.point(i), mu.point(j));
    });

    // Clusters are keyed by their first (smallest) member. Only clusters whose
    // leading coordinate is within tolerance of the current point can match.
    PointList reps;
    std::vector<double> sums;
    std::vector<double> magnitudes;
    for (std::size_t idx : order) {
        const Vector& x = mu.point(idx);
        const double w  = mu.weight(idx);
        bool merged     = false;
        for (std::size_t c = reps.size(); c-- > 0;) {
            if (x[0] - reps[c][0] > merge_tolerance) {
                break;
            }
            if ((x - reps[c]).norm() <= merge_tolerance) {
                sums[c] += w;
                magnitudes[c] += std::abs(w);
                merged = true;
                break;
            }
        }
        if (!merged) {
            reps.push_back(x);
            sums.push_back(w);
            magnitudes.push_back(std::abs(w));
        }
    }

    PointList points;
    std::vector<double> weights;
    constexpr double cancel = 4.0 * std::numeric_limits<double>::epsilon();
    for (std::size_t c = 0; c < reps.size(); ++c) {
        if (std::abs(sums[c]) <= cancel * magnitudes[c]) {
            continue;
        }
        points.push_back(std::move(reps[c]));
        weights.push_back(sums[c]);
    }
    return DiscreteMeasure(mu.dim(), std::move(points), std::move(weights));
}

DiscreteMeasure linear_combine(double a, const DiscreteMeasure& mu, double b, const DiscreteMeasure& nu)
{
    if (mu.dim() != nu.dim()) {
        throw std::invalid_argument("linear_combine: dimension mismatch (" + std::to_string(mu.dim()) + " vs " +
                                    std::to_string(nu.dim()) + ")");
    }
    PointList points;
    std::vector<double> weights;
    points.reserve(mu.size() + nu.size());
    weights.reserve(mu.size() + nu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        points.push_back(mu.point(i));
        weights.push_back(a * mu.weight(i));
    }
    for (std::size_t i = 0; i < nu.size(); ++i) {
        points.push_back(nu.point(i));
        weights.push_back(b * nu.weight(i));
    }
    return canonicalize(DiscreteMeasure(mu.dim(), std::move(points), std::move(weights)));
}

DiscreteMeasure push_forward(const DiscreteMeasure& mu, const PointMap& r)
{
    PointList points;
    points.reserve(mu.size());
    int dim = mu.dim();
    for (std::size_t i = 0; i < mu.size(); ++i) {
        Vector y = r(mu.point(i));
        if (!y.allFinite()) {
            throw std::domain_error("push_forward: non-finite image of atom " + std::to_string(i));
        }
        if (i == 0) {
            dim = static_cast<int>(y.size());
        }
        else if (y.size() != dim) {
            throw std::domain_error("push_forward: map returned inconsistent dimensions");
        }
        points.push_back(std::move(y));
    }
    return canonicalize(DiscreteMeasure(dim, std::move(points), mu.weights()));
}

double total_variation(const DiscreteMeasure& mu)
{
    const DiscreteMeasure c = canonicalize(mu);
    double tv               = 0.0;
    for (double w : c.weights()) {
        tv += std::abs(w);
    }
    return tv;
}

double lattice_spacing(const DiscreteMeasure& mu, double eps)
{
    if (!(eps > 0.0)) {
        throw std::invalid_argument("dirac_approximate: eps must be positive");
    }
    const double tv = total_variation(mu);
    if (tv == 0.0) {
        throw std::invalid_argument("dirac_approximate: measure must be nonzero");
    }
    return eps / (2.0 * tv);
}

DiscreteMeasure dirac_approximate(const DiscreteMeasure& mu, double eps, double alpha)
{
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("dirac_approximate: alpha must lie in (0, 1]");
    }
    const double spacing = lattice_spacing(mu, eps);
    PointList points;
    points.reserve(mu.size());
    for (const Vector& x : mu.points()) {
        points.push_back(((x / spacing).array().round() * spacing).matrix());
    }
    return DiscreteMeasure(mu.dim(), std::move(points), mu.weights());
}

double displacement_bound(const DiscreteMeasure& mu, const DiscreteMeasure& paired)
{
    if (mu.size() != paired.size() || mu.dim() != paired.dim()) {
        throw std::invalid_argument("displacement_bound: measures are not paired atom by atom");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        total += std::abs(mu.weight(i)) * (mu.point(i) - paired.point(i)).norm();
    }
    return total;
}

bool approx_equal(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double tol)
{
    if (mu.dim() != nu.dim()) {
        return false;
    }
    const DiscreteMeasure a = canonicalize(mu);
    const DiscreteMeasure b = canonicalize(nu);
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((a.point(i) - b.point(i)).norm() > tol || std::abs(a.weight(i) - b.weight(i)) > tol) {
            return false;
        }
    }
    return true;
}

} // namespace mtd
