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
#include "mtd/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mtd
{

std::string format_double(double value)
{
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void write_measure_csv(std::ostream& os, const DiscreteMeasure& mu)
{
    for (int j = 0; j < mu.dim(); ++j) {
        os << "x_" << j + 1 << ',';
    }
    os << "weight\n";
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (int j = 0; j < mu.dim(); ++j) {
            os << format_double(mu.point(i)[j]) << ',';
        }
        os << format_double(mu.weight(i)) << '\n';
    }
}

namespace
{

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(cell);
    }
    return out;
}

double parse_number(const std::string& text, std::size_t line)
{
    std::size_t used = 0;
    double value     = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw std::invalid_argument("measure CSV line " + std::to_string(line) + ": not a number: '" + text + "'");
    }
    return value;
}

} // namespace

DiscreteMeasure read_measure_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line)) {
        throw std::invalid_argument("measure CSV: missing header");
    }
    const auto header = split(line);
    if (header.size() < 2 || header.back() != "weight") {
        throw std::invalid_argument("measure CSV: header must be x_1,...,x_d,weight");
    }
    const int dim = static_cast<int>(header.size()) - 1;
    PointList points;
    std::vector<double> weights;
    std::size_t number = 1;
    while (std::getline(is, line)) {
        ++number;
        if (line.empty()) {
            continue;
        }
        const auto cells = split(line);
        if (static_cast<int>(cells.size()) != dim + 1) {
            throw std::invalid_argument("measure CSV line " + std::to_string(number) + ": expected " +
                                        std::to_string(dim + 1) + " columns");
        }
        Vector x(dim);
        for (int j = 0; j < dim; ++j) {
            x[j] = parse_number(cells[j], number);
        }
        points.push_back(x);
        weights.push_back(parse_number(cells.back(), number));
    }
    return DiscreteMeasure(dim, std::move(points), std::move(weights));
}

Json measure_to_json(const DiscreteMeasure& mu)
{
    Json out = Json::array();
    for (std::size_t i = 0; i < mu.size(); ++i) {
        Json point = Json::array();
        for (int j = 0; j < mu.dim(); ++j) {
            point.push_back(mu.point(i)[j]);
        }
        out.push_back(Json{{"point", point}, {"weight", mu.weight(i)}});
    }
    return out;
}

DiscreteMeasure measure_from_json(const Json& j)
{
    if (!j.is_array() || j.empty()) {
        throw std::invalid_argument("measure: expected a non-empty array of {point, weight}");
    }
    int dim = -1;
    PointList points;
    std::vector<double> weights;
    for (const auto& atom : j) {
        if (!atom.is_object() || !atom.contains("point") || !atom.contains("weight") || atom.size() != 2) {
            throw std::invalid_argument("measure: each atom needs exactly the keys point and weight");
        }
        const auto& p = atom.at("point");
        std::vector<double> coords;
        if (p.is_number()) {
            coords.push_back(p.get<double>());
        } else {
            coords = p.get<std::vector<double>>();
        }
        if (dim < 0) {
            dim = static_cast<int>(coords.size());
        }
        if (static_cast<int>(coords.size()) != dim || dim == 0) {
            throw std::invalid_argument("measure: inconsistent point dimensions");
        }
        points.push_back(Eigen::Map<const Vector>(coords.data(), dim));
        weights.push_back(atom.at("weight").get<double>());
    }
    return DiscreteMeasure(dim, std::move(points), std::move(weights));
}

void write_trajectory_csv(std::ostream& os, const TrajectoryBundle& bundle)
{
    const int d = bundle.dim();
    os << "particle,t";
    for (int j = 0; j < d; ++j) {
        os << ",X_" << j + 1;
    }
    for (int j = 0; j < d; ++j) {
        os << ",dXdh_" << j + 1;
    }
    os << ",W,dWdh\n";
    for (std::size_t i = 0; i < bundle.particles(); ++i) {
        for (std::size_t k = 0; k < bundle.nodes(); ++k) {
            os << i << ',' << format_double(bundle.time(k));
            const auto s = bundle.state(i, k);
            for (Eigen::Index r = 0; r < s.size(); ++r) {
                os << ',' << format_double(s[r]);
            }
            os << '\n';
        }
    }
}

Json norm_report(const NormResult& result)
{
    Json witness{{"nodes", result.nodes}, {"values", result.values}};
    if (!result.gradients.empty()) {
        witness["gradients"] = result.gradients;
    }
    witness["budget"] = {{"value", result.budget_value},
                         {"gradient", result.budget_gradient},
                         {"holder", result.budget_holder}};
    return Json{{"upper", result.upper},
                {"lower", result.lower},
                {"witness", witness},
                {"convention", result.convention},
                {"alpha", result.alpha}};
}

CsvTable::CsvTable(std::vector<std::string> header)
    : m_header(std::move(header))
{
}

CsvTable& CsvTable::row(std::vector<std::string> cells)
{
    if (cells.size() != m_header.size()) {
        throw std::logic_error("CsvTable: row width does not match the header");
    }
    m_rows.push_back(std::move(cells));
    return *this;
}

std::string CsvTable::str() const
{
    std::ostringstream os;
    auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t j = 0; j < cells.size(); ++j) {
            os << (j ? "," : "") << cells[j];
        }
        os << '\n';
    };
    emit(m_header);
    for (const auto& r : m_rows) {
        emit(r);
    }
    return os.str();
}

void write_cauchy_csv(std::ostream& os, std::span<const CauchyGap> gaps)
{
    CsvTable table({"h1", "h2", "gap_upper", "gap_lower", "flat_gap", "flat_gap_sum"});
    for (const auto& g : gaps) {
        table.row({format_double(g.h1), format_double(g.h2), format_double(g.upper), format_double(g.lower),
                   format_double(g.flat), format_double(g.flat_sum)});
    }
    os << table.str();
}

void write_convergence_csv(std::ostream& os, std::span<const QuotientRow> rows)
{
    CsvTable table({"lambda", "psi_id", "quotient_pairing", "derivative_pairing", "gap"});
    for (const auto& r : rows) {
        table.row({format_double(r.lambda), r.psi_id, format_double(r.quotient_pairing),
                   format_double(r.derivative_pairing), format_double(r.gap)});
    }
    os << table.str();
}

void write_trace_csv(std::ostream& os, std::span<const TraceRow> rows)
{
    CsvTable table({"iter", "h", "objective", "gradient", "step"});
    for (const auto& r : rows) {
        table.row({std::to_string(r.iter), format_double(r.h), format_double(r.objective), format_double(r.gradient),
                   format_double(r.step)});
    }
    os << table.str();
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os << content;
    if (!os) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace mtd
