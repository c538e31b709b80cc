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
#include "mtd/experiments.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace mtd;

namespace
{

std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("mtd_unit_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

ExperimentConfig config(const std::string& text)
{
    const auto r = parse_config(text);
    if (!r.ok()) {
        throw std::invalid_argument(r.errors.front());
    }
    return *r.config;
}

} // namespace

TEST(Experiments, SummaryListsAssertionsAndFiles)
{
    const auto dir = scratch("summary");
    const auto cfg = config(R"({"experiment": "counterexample", "counterexample": {"lipschitz_samples": 5}})");
    const auto res = run_experiment(cfg, dir);
    EXPECT_TRUE(res.passed());
    const Json summary = Json::parse(read_file(dir / "summary.json"));
    EXPECT_EQ(summary["experiment"], "counterexample");
    EXPECT_EQ(summary["passed"], true);
    EXPECT_EQ(summary["assertions"].size(), res.assertions.size());
    for (const auto& f : res.files) {
        EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
    }
    Json echo = to_json(cfg);
    echo.erase("output");
    EXPECT_EQ(summary["config"], echo);
}

TEST(Experiments, FailingAssertionIsReported)
{
    const auto dir = scratch("failing");
    const auto cfg = config(R"({"experiment": "weak_residual", "weak_residual": {"min_ratio": 1e12}})");
    const auto res = run_experiment(cfg, dir);
    EXPECT_FALSE(res.passed());
    const Json summary = Json::parse(read_file(dir / "summary.json"));
    EXPECT_EQ(summary["passed"], false);
}

TEST(Experiments, RepeatedRunsAreByteIdentical)
{
    const auto cfg = config(R"({"experiment": "dirac_approx", "dirac_approx": {"samples": 40}})");
    const auto a   = scratch("det_a");
    const auto b   = scratch("det_b");
    const auto ra  = run_experiment(cfg, a);
    const auto rb  = run_experiment(cfg, b);
    ASSERT_EQ(ra.files, rb.files);
    for (const auto& f : ra.files) {
        EXPECT_EQ(read_file(a / f), read_file(b / f)) << f;
    }
    EXPECT_EQ(read_file(a / "summary.json"), read_file(b / "summary.json"));
}

TEST(Experiments, NumericErrorsCarryExperimentContext)
{
    auto cfg           = config(R"({"experiment": "weak_residual"})");
    cfg.weak_residual.decay_end = 5.0; // support beyond the horizon
    try {
        run_experiment(cfg, scratch("context"));
        FAIL() << "expected an exception";
    } catch (const std::runtime_error& e) {
        EXPECT_EQ(std::string(e.what()).rfind("weak_residual: ", 0), 0u) << e.what();
    }
}
