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
#ifndef MTD_FUNCTIONAL_HPP
#define MTD_FUNCTIONAL_HPP

#include "mtd/measures.hpp"

namespace mtd
{

/**
 * Element of the predual Z given by finitely many atoms carrying a density
 * weight and a dipole vector:
 *
 *     <psi, F> = sum_i  s_i psi(x_i) + v_i . grad psi(x_i).
 *
 * Measures are the special case v = 0. Dirac derivatives (x -> delta_x
 * differentiated in direction lambda) are the case s = 0, v = lambda.
 */
class FirstOrderFunctional
{
public:
    explicit FirstOrderFunctional(int dim);
    FirstOrderFunctional(int dim, PointList points, std::vector<double> densities, PointList dipoles);
    explicit FirstOrderFunctional(const DiscreteMeasure& mu);

    int dim() const
    {
        return m_dim;
    }
    std::size_t size() const
    {
        return m_densities.size();
    }
    const PointList& points() const
    {
        return m_points;
    }
    const std::vector<double>& densities() const
    {
        return m_densities;
    }
    const PointList& dipoles() const
    {
        return m_dipoles;
    }

    bool has_dipoles() const;

    /// Action on a C^1 function given by value and gradient callables.
    template <class Value, class Gradient>
    double apply(Value&& value, Gradient&& gradient) const
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < size(); ++i) {
            if (m_densities[i] != 0.0) {
                sum += m_densities[i] * value(m_points[i]);
            }
            if (!m_dipoles[i].isZero(0.0)) {
                sum += m_dipoles[i].dot(gradient(m_points[i]));
            }
        }
        return sum;
    }

    /// sum_i |s_i| + |v_i|; bounds |<psi, F>| for ||psi||_{C^{1+alpha}} <= 1.
    double coefficient_norm() const;

private:
    int m_dim;
    PointList m_points;
    std::vector<double> m_densities;
    PointList m_dipoles;
};

/// Merge coincident atoms, drop atoms whose density and dipole both cancel; sorted output.
FirstOrderFunctional canonicalize(const FirstOrderFunctional& f);

/// a*F + b*G, canonicalized.
FirstOrderFunctional linear_combine(double a, const FirstOrderFunctional& f, double b, const FirstOrderFunctional& g);

/// Dipole functional psi -> direction . grad psi(x).
FirstOrderFunctional dirac_derivative(const Vector& x, const Vector& direction);

} // namespace mtd

#endif // MTD_FUNCTIONAL_HPP
