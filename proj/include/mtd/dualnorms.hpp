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
#ifndef MTD_DUALNORMS_HPP
#define MTD_DUALNORMS_HPP

#include "mtd/functional.hpp"
#include "mtd/measures.hpp"
#include "mtd/pushforward.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mtd
{

/// Unit ball of W^{1,inf}: max(sup|f|, Lip f) <= 1 or sup|f| + Lip f <= 1.
enum class FlatConvention
{
    max,
    sum,
};

std::string_view to_string(FlatConvention convention);

struct NormOptions {
    double alpha          = 0.5;
    std::size_t node_cap  = 400;
    /// Uniform auxiliary nodes on [min - margin, max + margin] of the support.
    std::size_t aux_nodes = 0;
    double aux_margin     = 1.0;
    double tolerance      = 1e-10;
};

struct NormResult {
    double upper = 0.0;
    double lower = 0.0;
    std::vector<double> nodes;
    std::vector<double> values;
    /// Node gradients; empty for the flat norm.
    std::vector<double> gradients;
    double budget_value    = 0.0;
    double budget_gradient = 0.0;
    double budget_holder   = 0.0;
    std::string convention;
    double alpha       = 0.0;
    std::size_t pivots = 0;
    std::size_t rounds = 0;
};

/// Exact flat norm of a signed 1-d measure.
NormResult flat_norm(const DiscreteMeasure& nu, FlatConvention convention = FlatConvention::max,
                     double tolerance = 1e-10);

double flat_metric(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                   FlatConvention convention = FlatConvention::max);

/// Node LP relaxation; an upper bound of the (C^{1+a})* norm.
NormResult holder_dual_upper(const FirstOrderFunctional& f, const NormOptions& options = {});
NormResult holder_dual_upper(const DiscreteMeasure& nu, const NormOptions& options = {});

/// Best value over a parametric family of normalized test functions; a lower bound.
double holder_dual_lower(const FirstOrderFunctional& f, double alpha);
double holder_dual_lower(const DiscreteMeasure& nu, double alpha);

/// Both bounds in one report.
NormResult holder_dual_norm(const FirstOrderFunctional& f, const NormOptions& options = {});

struct CauchyGap {
    double h1       = 0.0;
    double h2       = 0.0;
    double upper    = 0.0;
    double lower    = 0.0;
    double flat     = 0.0;
    double flat_sum = 0.0;
};

/// (mu^{h1} - mu^0)/h1 - (mu^{h2} - mu^0)/h2 at the problem horizon.
DiscreteMeasure quotient_difference(const TransportProblem& problem, double h1, double h2);

CauchyGap cauchy_gap(const TransportProblem& problem, double h1, double h2, const NormOptions& options = {},
                     bool with_lower = true);

/// Least-squares slope of log(y) against log(x); NaN if any entry is non-positive.
double loglog_slope(std::span<const double> x, std::span<const double> y);

} // namespace mtd

#endif // MTD_DUALNORMS_HPP
