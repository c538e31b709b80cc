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
#include "mtd/config.hpp"
#include "mtd/experiments.hpp"
#include "mtd/io.hpp"
#include "mtd/parallel.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace
{

constexpr int kExitAssertion = 1;
constexpr int kExitConfig    = 2;
constexpr int kExitRuntime   = 3;

struct Flags {
    std::string config;
    std::string out;
    int threads = 0;
    std::optional<std::uint64_t> seed;
};

void add_flags(CLI::App* cmd, Flags& flags, bool config_required)
{
    auto* opt = cmd->add_option("--config", flags.config, "Experiment config (JSON, comments allowed)");
    if (config_required) {
        opt->required()->check(CLI::ExistingFile);
    } else {
        opt->check(CLI::ExistingFile);
    }
    cmd->add_option("--out", flags.out, "Output directory (overrides MTD_OUT_DIR and the config)");
    cmd->add_option("--threads", flags.threads, "Worker threads (overrides MTD_THREADS)")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", flags.seed, "Seed for sampled experiments");
}

std::optional<std::string> env(const char* name)
{
    const char* value = std::getenv(name);
    if (value == nullptr || *value == '\0') {
        return std::nullopt;
    }
    return std::string(value);
}

/// Load the config, or the defaults of `kind` when no file is given.
std::optional<mtd::ExperimentConfig> load(const Flags& flags, std::optional<mtd::ExperimentKind> kind)
{
    mtd::ParseResult parsed;
    if (flags.config.empty()) {
        parsed = mtd::parse_config(mtd::Json{{"experiment", std::string(mtd::to_string(*kind))}});
    } else {
        parsed = mtd::parse_config(mtd::read_file(flags.config));
    }
    if (!parsed.ok()) {
        std::cerr << "invalid config" << (flags.config.empty() ? "" : " " + flags.config) << ":\n";
        for (const auto& e : parsed.errors) {
            std::cerr << "  " << e << "\n";
        }
        return std::nullopt;
    }
    mtd::ExperimentConfig cfg = *parsed.config;
    if (kind && cfg.kind != *kind) {
        std::cerr << "config describes experiment '" << mtd::to_string(cfg.kind) << "', not '"
                  << mtd::to_string(*kind) << "'\n";
        return std::nullopt;
    }
    if (const auto out = env("MTD_OUT_DIR")) {
        cfg.output = *out;
    }
    if (!flags.out.empty()) {
        cfg.output = flags.out;
    }
    if (flags.seed) {
        cfg.seed = *flags.seed;
    }
    return cfg;
}

int threads_from(const Flags& flags)
{
    if (flags.threads > 0) {
        return flags.threads;
    }
    if (const auto value = env("MTD_THREADS")) {
        try {
            const int n = std::stoi(*value);
            if (n > 0) {
                return n;
            }
        } catch (const std::exception&) {
        }
        std::cerr << "ignoring MTD_THREADS='" << *value << "'\n";
    }
    return 1;
}

int run(const Flags& flags, std::optional<mtd::ExperimentKind> kind)
{
    std::optional<mtd::ExperimentConfig> cfg;
    try {
        cfg = load(flags, kind);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }
    if (!cfg) {
        return kExitConfig;
    }
    mtd::set_thread_count(threads_from(flags));
    try {
        const mtd::ExperimentResult result = mtd::run_experiment(*cfg, cfg->output);
        for (const auto& a : result.assertions) {
            std::cout << (a.passed ? "PASS " : "FAIL ") << a.name << ": " << mtd::format_double(a.value) << " "
                      << a.relation << " " << mtd::format_double(a.threshold) << "\n";
        }
        std::cout << mtd::to_string(cfg->kind) << ": " << (result.passed() ? "passed" : "FAILED") << " ("
                  << cfg->output << "/summary.json)\n";
        return result.passed() ? 0 : kExitAssertion;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Measure transport sensitivity experiments"};
    app.require_subcommand(1);

    Flags run_flags;
    auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a config file");
    add_flags(run_cmd, run_flags, true);

    Flags plan_flags;
    auto* plan_cmd = app.add_subcommand("plan", "Validate a config and print it with defaults resolved");
    add_flags(plan_cmd, plan_flags, true);

    std::vector<std::pair<mtd::ExperimentKind, CLI::App*>> kind_cmds;
    std::vector<Flags> kind_flags(mtd::all_experiment_kinds().size());
    for (std::size_t i = 0; i < kind_flags.size(); ++i) {
        const mtd::ExperimentKind kind = mtd::all_experiment_kinds()[i];
        auto* cmd = app.add_subcommand(std::string(mtd::to_string(kind)),
                                       "Run the " + std::string(mtd::to_string(kind)) +
                                           " experiment (defaults unless --config is given)");
        add_flags(cmd, kind_flags[i], false);
        kind_cmds.emplace_back(kind, cmd);
    }

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) {
        return run(run_flags, std::nullopt);
    }
    if (plan_cmd->parsed()) {
        std::optional<mtd::ExperimentConfig> cfg;
        try {
            cfg = load(plan_flags, std::nullopt);
        } catch (const std::exception& e) {
            std::cerr << e.what() << "\n";
            return kExitConfig;
        }
        if (!cfg) {
            return kExitConfig;
        }
        std::cout << mtd::to_json(*cfg).dump(2) << "\n";
        return 0;
    }
    for (std::size_t i = 0; i < kind_cmds.size(); ++i) {
        if (kind_cmds[i].second->parsed()) {
            return run(kind_flags[i], kind_cmds[i].first);
        }
    }
    return kExitConfig;
}
