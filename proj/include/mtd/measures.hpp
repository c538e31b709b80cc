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
#ifndef MTD_MEASURES_HPP
#define MTD_MEASURES_HPP

#include "mtd/types.hpp"

#include <cstddef>
#include <functional>

namespace mtd
{

/// Points closer than this (Euclidean) are treated as one atom.
inline constexpr double merge_tolerance = 1e-12;

/**
 * Signed finite combination of Dirac masses in R^d.
 *
 * Immutable after construction. The constructor validates shapes and
 * finiteness but does not merge coincident atoms; use canonicalize() for
 * that. All operations below are pure.
 */
class DiscreteMeasure
{
public:
    explicit DiscreteMeasure(int dim);
    DiscreteMeasure(int dim, PointList points, std::vector<double> weights);

    static DiscreteMeasure dirac(const Vector& x, double weight = 1.0);
    static DiscreteMeasure dirac(double x, double weight = 1.0);

    int dim() const
    {
        return m_dim;
    }
    std::size_t size() const
    {
        return m_weights.size();
    }
    bool empty() const
    {
        return m_weights.empty();
    }
    const PointList& points() const
    {
        return m_points;
    }
    const std::vector<double>& weights() const
    {
        return m_weights;
    }
    const Vector& point(std::size_t i) const
    {
        return m_points[i];
    }
    double weight(std::size_t i) const
    {
        return m_weights[i];
    }

    /// Sum of signed weights.
    double mass() const;

    /// Integral of a scalar function against the measure.
    template <class F>
    double integrate(F&& f) const
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < m_weights.size(); ++i) {
            sum += m_weights[i] * f(m_points[i]);
        }
        return sum;
    }

private:
    int m_dim;
    PointList m_points;
    std::vector<double> m_weights;
};

using PointMap = std::function<Vector(const Vector&)>;

/**
 * Merge atoms within merge_tolerance (summing weights) and drop atoms whose
 * merged weight cancels. The result is sorted lexicographically.
 */
DiscreteMeasure canonicalize(const DiscreteMeasure& mu);

/// a*mu + b*nu, canonicalized.
DiscreteMeasure linear_combine(double a, const DiscreteMeasure& mu, double b, const DiscreteMeasure& nu);

/// r#mu: relocate every atom through r. Throws std::domain_error on non-finite images.
DiscreteMeasure push_forward(const DiscreteMeasure& mu, const PointMap& r);

/// Sum of |w| after canonicalization.
double total_variation(const DiscreteMeasure& mu);

/// Spacing of the lattice used by dirac_approximate: eps / (2 TV(mu)).
double lattice_spacing(const DiscreteMeasure& mu, double eps);

/**
 * Snap every atom to the nearest node of the lattice with spacing
 * eps / (2 TV(mu)). The displacement of each atom is at most half a lattice
 * diagonal, so the dual C^{1+alpha} distance to mu is at most eps*sqrt(d)/4.
 */
DiscreteMeasure dirac_approximate(const DiscreteMeasure& mu, double eps, double alpha);

/// sum_i |w_i| |x_i - y_i| for two measures with the same atom count (paired atoms).
double displacement_bound(const DiscreteMeasure& mu, const DiscreteMeasure& paired);

bool approx_equal(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double tol);

} // namespace mtd

#endif // MTD_MEASURES_HPP
