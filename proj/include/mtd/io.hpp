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
#ifndef MTD_IO_HPP
#define MTD_IO_HPP

#include "mtd/control.hpp"
#include "mtd/dualnorms.hpp"
#include "mtd/flow.hpp"
#include "mtd/measures.hpp"
#include "mtd/sensitivity.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mtd
{

using Json = nlohmann::ordered_json;

/// Round-trip decimal form (%.17g).
std::string format_double(double value);

/// Rows `x_1,...,x_d,weight`.
void write_measure_csv(std::ostream& os, const DiscreteMeasure& mu);
DiscreteMeasure read_measure_csv(std::istream& is);

/// [{"point": [...], "weight": w}, ...].
Json measure_to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const Json& j);

/// Rows `particle,t,X...,dXdh...,W,dWdh`.
void write_trajectory_csv(std::ostream& os, const TrajectoryBundle& bundle);

/// {upper, lower, witness, convention, alpha}.
Json norm_report(const NormResult& result);

/// Rows `h1,h2,gap_upper,gap_lower,flat_gap,flat_gap_sum`.
void write_cauchy_csv(std::ostream& os, std::span<const CauchyGap> gaps);
/// Rows `lambda,psi_id,quotient_pairing,derivative_pairing,gap`.
void write_convergence_csv(std::ostream& os, std::span<const QuotientRow> rows);
/// Rows `iter,h,objective,gradient,step`.
void write_trace_csv(std::ostream& os, std::span<const TraceRow> rows);

/// Minimal CSV builder with deterministic number formatting.
class CsvTable
{
public:
    explicit CsvTable(std::vector<std::string> header);

    CsvTable& row(std::vector<std::string> cells);
    std::string str() const;

private:
    std::vector<std::string> m_header;
    std::vector<std::vector<std::string>> m_rows;
};

void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

} // namespace mtd

#endif // MTD_IO_HPP
