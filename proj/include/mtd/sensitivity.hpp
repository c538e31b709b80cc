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
#ifndef MTD_SENSITIVITY_HPP
#define MTD_SENSITIVITY_HPP

#include "mtd/dualnorms.hpp"
#include "mtd/fields.hpp"
#include "mtd/functional.hpp"
#include "mtd/pushforward.hpp"

#include <span>
#include <string>
#include <vector>

namespace mtd
{

/**
 * Parameter derivative of the solution at time t as a first-order functional:
 * per initial particle, terminal position X_i, dipole v_i = w0_i e^{W_i} dX_i/dh
 * and density s_i = w0_i e^{W_i} dW_i/dh, acting as
 * <psi, D> = sum_i v_i . grad psi(X_i) + s_i psi(X_i).
 */
class DerivativeFunctional
{
public:
    DerivativeFunctional(int dim, PointList positions, PointList dipoles, std::vector<double> densities, double h,
                         double t);

    int dim() const
    {
        return m_functional.dim();
    }
    std::size_t size() const
    {
        return m_functional.size();
    }
    const PointList& positions() const
    {
        return m_functional.points();
    }
    const PointList& dipoles() const
    {
        return m_functional.dipoles();
    }
    const std::vector<double>& densities() const
    {
        return m_functional.densities();
    }
    double h() const
    {
        return m_h;
    }
    double t() const
    {
        return m_t;
    }
    const FirstOrderFunctional& functional() const
    {
        return m_functional;
    }

    bool is_zero() const;
    /// sum_i |v_i| + |s_i|; bounds |<psi, D>| for every psi in the unit ball.
    double coefficient_norm() const
    {
        return m_functional.coefficient_norm();
    }

private:
    FirstOrderFunctional m_functional;
    double m_h;
    double m_t;
};

DerivativeFunctional derivative_functional(const SolutionCurve& curve);
DerivativeFunctional derivative_functional(const TransportProblem& problem, double h);

/// Rejects non-smooth test functions.
double pair(const DerivativeFunctional& d, const TestFunction& psi);
double pair(const FirstOrderFunctional& f, const TestFunction& psi);
double pair(const DiscreteMeasure& mu, const TestFunction& psi);

struct PanelEntry {
    std::string id;
    TestFunction psi;
};

/// Twelve fixed catalog functions, each scaled to unit C^{1+alpha} budget.
std::vector<PanelEntry> default_panel(double alpha, int dim = 1);

struct QuotientRow {
    double lambda = 0.0;
    std::string psi_id;
    double quotient_pairing   = 0.0;
    double derivative_pairing = 0.0;
    double gap                = 0.0;
};

struct QuotientStudy {
    std::vector<QuotientRow> rows;
    /// Cauchy gaps between the quotients at successive lambda entries.
    std::vector<CauchyGap> cauchy;
};

/// (mu^{h+lambda} - mu^h)/lambda at the problem horizon.
DiscreteMeasure difference_quotient(const TransportProblem& problem, double h, double lambda);

/// The problem with b replaced by b + h b1, so that its h = 0 matches h here.
TransportProblem recentered(const TransportProblem& problem, double h);

QuotientStudy quotient_convergence(const TransportProblem& problem, double h, std::span<const double> lambdas,
                                   const std::vector<PanelEntry>& panel, const NormOptions& options = {},
                                   bool with_cauchy = true);

/// Largest pairing gap per lambda, in ladder order.
std::vector<double> max_gap_per_lambda(const QuotientStudy& study, std::span<const double> lambdas);

struct DiracRemainderRow {
    double lambda    = 0.0;
    double upper     = 0.0;
    double panel     = 0.0;
    double bound     = 0.0;
};

struct DiracPairRow {
    double x     = 0.0;
    double y     = 0.0;
    double upper = 0.0;
    double panel = 0.0;
    double bound = 0.0;
};

struct DiracCurveStudy {
    std::vector<DiracRemainderRow> remainders;
    std::vector<DiracPairRow> pairs;
};

/// delta_{x+lambda} - delta_x - lambda delta'_x.
FirstOrderFunctional dirac_remainder(double x, double lambda);

/**
 * Remainder r(lambda) = ||delta_{x+lambda} - delta_x - lambda delta'_x|| / |lambda| by node LP
 * and panel sup, against |lambda|^alpha/(1+alpha); and ||delta'_x - delta'_y|| against
 * |x-y|^alpha for the given pairs.
 */
DiracCurveStudy dirac_curve_check(double x, std::span<const double> lambdas, double alpha,
                                  std::span<const std::pair<double, double>> pairs, const NormOptions& options = {});

} // namespace mtd

#endif // MTD_SENSITIVITY_HPP
