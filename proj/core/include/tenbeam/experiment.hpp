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

#ifndef TENBEAM_EXPERIMENT_HPP
#define TENBEAM_EXPERIMENT_HPP

#include "tenbeam/channel.hpp"
#include "tenbeam/cpd.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace tenbeam {

/// Thrown on malformed or inconsistent experiment configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One named parameter varied across the experiment. Supported names:
/// "snr_db" (real values), "n_rf" and "n_streams" (integral values).
struct SweepSpec {
    std::string parameter = "snr_db";
    std::vector<double> values;
};

struct ExperimentConfig {
    ChannelConfig channel;
    std::vector<std::string> methods; // subset of {vtpar, somp, pe, fully_digital}
    SweepSpec sweep;
    int realizations = 1;
    Index n_streams = 1;
    Index n_rf_tx = 2;
    Index n_rf_rx = 2;
    std::string output_path = "results.csv";
    // Channel-derived stacks are only approximately low-rank; the
    // unconstrained decomposition then tends toward off-unit-circle
    // (growing/damped) first-mode columns whose read-off scaling collapses.
    // Experiments therefore default to the structure-projected sweep variant;
    // set tals.vandermonde_projection = false to run the plain pipeline.
    TalsOptions tals = [] {
        TalsOptions t;
        t.vandermonde_projection = true;
        return t;
    }();
    Index codebook_size = 32;    // DFT codebook columns for somp
    std::uint64_t master_seed = 0;
    bool record_runtime = true;  // false zeroes the runtime column for byte-stable output

    void validate() const; // throws ConfigError with a field-precise message
};

// Parses a JSON config file; unknown keys are rejected so typos surface early.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// One CSV row: a (method, sweep value, realization) cell.
struct ResultRow {
    std::string method;
    std::string sweep_parameter;
    double sweep_value = 0.0;
    std::uint64_t seed = 0;
    double mean_se = 0.0;
    double mean_nmse = 0.0;
    long overhead = 0;
    double runtime_ms = 0.0;
    std::string status = "ok"; // or an identifiability violation marker
};

// Runs every sweep point x realization x method. Per-realization seeds come
// from derive_seed(master_seed, realization) and are shared across sweep
// values (common random numbers). Rows come back sorted by
// (sweep value, seed, method) regardless of worker count.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, int jobs = 1);

// Writes header + rows through a temp file renamed into place.
void write_result_csv(const std::filesystem::path& path,
                      const std::vector<ResultRow>& rows);

std::vector<ResultRow> read_result_csv(const std::filesystem::path& path);

// Mean and standard error per (method, sweep value), formatted as text.
std::string summary_table(const std::vector<ResultRow>& rows);

// Writes one two-column (sweep value, mean metric) file per method next to
// the CSV, named "<stem>.<method>.<metric>.dat". metric is "se" or "nmse".
// Returns the paths written.
std::vector<std::filesystem::path> emit_plotdata(const std::filesystem::path& csv_path,
                                                 const std::string& metric);

} // namespace tenbeam

#endif // TENBEAM_EXPERIMENT_HPP
