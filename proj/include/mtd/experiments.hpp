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
#ifndef MTD_EXPERIMENTS_HPP
#define MTD_EXPERIMENTS_HPP

#include "mtd/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace mtd
{

/// One built-in check of an experiment: passed iff value <relation> threshold.
struct Assertion {
    std::string name;
    bool passed      = false;
    double value     = 0.0;
    double threshold = 0.0;
    std::string relation;
};

struct ExperimentResult {
    ExperimentKind kind = ExperimentKind::counterexample;
    std::vector<Assertion> assertions;
    /// Files written, relative to the output directory, in write order.
    std::vector<std::string> files;

    bool passed() const;
};

/**
 * Run one experiment and write its CSV sweeps plus summary.json into
 * out_dir. Outputs depend only on the config, never on timing or thread
 * count. Numeric failures are rethrown as std::runtime_error prefixed with
 * the experiment kind.
 */
ExperimentResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// The summary document written as summary.json.
Json summary_json(const ExperimentConfig& config, const ExperimentResult& result);

} // namespace mtd

#endif // MTD_EXPERIMENTS_HPP
