// SPDX-License-Identifier: Apache-2.0
//
// tenbeam: wideband hybrid beamforming via Vandermonde-constrained tensor decomposition
// Copyright (C) 2026 tenbeam contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Experiment driver: `tenbeam run <config.json>` sweeps Monte-Carlo channel
// realizations through every configured factorization method and writes a CSV;
// `tenbeam plotdata <results.csv> --metric se|nmse` reduces a CSV to
// per-method two-column series files.

#include "tenbeam/experiment.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

int do_run(const std::string& config_path, const std::string& out_override,
           bool has_seed, std::uint64_t seed_override, int jobs) {
    tenbeam::ExperimentConfig cfg;
    try {
        cfg = tenbeam::load_experiment_config(config_path);
        if (!out_override.empty())
            cfg.output_path = out_override;
        if (has_seed)
            cfg.master_seed = seed_override;
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        const std::vector<tenbeam::ResultRow> rows = tenbeam::run_experiment(cfg, jobs);
        tenbeam::write_result_csv(cfg.output_path, rows);
        std::cout << tenbeam::summary_table(rows);
        std::cout << "wrote " << rows.size() << " rows to " << cfg.output_path << '\n';
    } catch (const tenbeam::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

int do_plotdata(const std::string& csv_path, const std::string& metric) {
    try {
        const auto written = tenbeam::emit_plotdata(csv_path, metric);
        for (const auto& p : written)
            std::cout << "wrote " << p.string() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"wideband hybrid precoder factorization experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::uint64_t seed_override = 0;
    int jobs = 1;
    CLI::App* run = app.add_subcommand("run", "run the experiment described by a JSON config");
    run->add_option("config", config_path, "experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    run->add_option("--out", out_override, "output CSV path (overrides the config)");
    CLI::Option* seed_opt =
        run->add_option("--seed", seed_override, "master seed (overrides the config)");
    run->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    std::string csv_path;
    std::string metric = "se";
    CLI::App* plotdata =
        app.add_subcommand("plotdata", "reduce a results CSV to per-method series files");
    plotdata->add_option("csv", csv_path, "results CSV produced by run")->required();
    plotdata->add_option("--metric", metric, "metric to reduce")
        ->check(CLI::IsMember({"se", "nmse"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (run->parsed())
        return do_run(config_path, out_override, seed_opt->count() > 0, seed_override,
                      jobs);
    return do_plotdata(csv_path, metric);
}
