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

#include "tenbeam/experiment.hpp"

#include "tenbeam/baselines.hpp"
#include "tenbeam/evalkit.hpp"
#include "tenbeam/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace tenbeam {

namespace {

using nlohmann::json;

constexpr const char* kCsvHeader =
    "method,sweep_parameter,sweep_value,seed,mean_se,mean_nmse,overhead,runtime_ms,status";

const std::set<std::string>& known_methods() {
    static const std::set<std::string> methods{"vtpar", "somp", "pe", "fully_digital"};
    return methods;
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : j.items())
        if (!allowed.contains(key))
            throw ConfigError("unknown key \"" + key + "\" in " + where);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ChannelConfig channel_from_json(const json& j) {
    reject_unknown_keys(j, {"n_tx", "n_rx", "n_subbands", "subband_size", "n_clusters",
                            "n_rays", "delay_spread_s", "subcarrier_spacing_hz",
                            "angle_spread_rad", "snr_db", "power_budget"},
                        "channel");
    ChannelConfig c;
    c.n_tx = j.value("n_tx", c.n_tx);
    c.n_rx = j.value("n_rx", c.n_rx);
    c.n_subbands = j.value("n_subbands", c.n_subbands);
    c.subband_size = j.value("subband_size", c.subband_size);
    c.n_clusters = j.value("n_clusters", c.n_clusters);
    c.n_rays = j.value("n_rays", c.n_rays);
    c.delay_spread_s = j.value("delay_spread_s", c.delay_spread_s);
    c.subcarrier_spacing_hz = j.value("subcarrier_spacing_hz", c.subcarrier_spacing_hz);
    c.angle_spread_rad = j.value("angle_spread_rad", c.angle_spread_rad);
    c.snr_db = j.value("snr_db", c.snr_db);
    c.power_budget = j.value("power_budget", c.power_budget);
    return c;
}

// The channel and endpoint dimensions one task actually runs with, after the
// sweep value is substituted.
struct TaskSetup {
    ChannelConfig channel;
    Index n_rf_tx = 1;
    Index n_rf_rx = 1;
    Index n_streams = 1;
};

TaskSetup apply_sweep(const ExperimentConfig& cfg, double value) {
    TaskSetup s;
    s.channel = cfg.channel;
    s.n_rf_tx = cfg.n_rf_tx;
    s.n_rf_rx = cfg.n_rf_rx;
    s.n_streams = cfg.n_streams;
    if (cfg.sweep.parameter == "snr_db") {
        s.channel.snr_db = value;
    } else if (cfg.sweep.parameter == "n_rf") {
        s.n_rf_tx = static_cast<Index>(value);
        s.n_rf_rx = static_cast<Index>(value);
    } else if (cfg.sweep.parameter == "n_streams") {
        s.n_streams = static_cast<Index>(value);
    } else {
        throw ConfigError("unsupported sweep parameter \"" + cfg.sweep.parameter + "\"");
    }
    return s;
}

void check_dimension_chain(const TaskSetup& s, double value, const std::string& param) {
    const auto context = [&] {
        return param + " = " + fmt(value);
    };
    if (s.n_streams < 1)
        throw ConfigError("n_streams must be >= 1 at " + context());
    if (s.n_rf_tx < s.n_streams || s.n_rf_rx < s.n_streams)
        throw ConfigError("RF chain counts must be >= n_streams at " + context());
    if (s.n_rf_tx > s.channel.n_tx || s.n_rf_rx > s.channel.n_rx)
        throw ConfigError("RF chain counts must be <= antenna counts at " + context());
    if (s.n_streams > std::min(s.channel.n_tx, s.channel.n_rx))
        throw ConfigError("n_streams must be <= min antenna count at " + context());
}

struct MethodOutput {
    CMat analog_tx;
    std::vector<CMat> baseband_tx;
    CMat analog_rx;
    std::vector<CMat> baseband_rx;
    long overhead = 0;
};

MethodOutput run_method(const std::string& method, const TaskSetup& setup,
                        const DigitalPrecoderStack& f_opt,
                        const DigitalPrecoderStack& w_opt, const ExperimentConfig& cfg,
                        std::uint64_t task_seed) {
    MethodOutput out;
    if (method == "fully_digital") {
        out.analog_tx = CMat::Identity(setup.channel.n_tx, setup.channel.n_tx);
        out.analog_rx = CMat::Identity(setup.channel.n_rx, setup.channel.n_rx);
        out.baseband_tx = f_opt.per_band();
        out.baseband_rx = w_opt.per_band();
        out.overhead = 0;
        return out;
    }
    if (method == "vtpar") {
        AssembleOptions opts;
        opts.tals = cfg.tals;
        opts.tals.seed = derive_seed(task_seed, 11);
        HybridFactorization tx = assemble(f_opt, setup.n_rf_tx, opts);
        opts.tals.seed = derive_seed(task_seed, 12);
        HybridFactorization rx = assemble(w_opt, setup.n_rf_rx, opts);
        out.analog_tx = std::move(tx.analog);
        out.baseband_tx = std::move(tx.baseband);
        out.analog_rx = std::move(rx.analog);
        out.baseband_rx = std::move(rx.baseband);
        out.overhead = feedback_overhead(FeedbackScheme::vandermonde, setup.channel.n_tx,
                                         setup.n_rf_tx);
        return out;
    }
    if (method == "somp") {
        const Codebook cb_tx = dft_codebook(setup.channel.n_tx, cfg.codebook_size);
        const Codebook cb_rx = dft_codebook(
            setup.channel.n_rx, std::max(setup.channel.n_rx, cfg.codebook_size));
        SompResult tx = somp(f_opt, cb_tx, setup.n_rf_tx);
        SompResult rx = somp(w_opt, cb_rx, setup.n_rf_rx);
        out.analog_tx = std::move(tx.analog);
        out.baseband_tx = std::move(tx.baseband);
        out.analog_rx = std::move(rx.analog);
        out.baseband_rx = std::move(rx.baseband);
        out.overhead = feedback_overhead(FeedbackScheme::codebook, setup.channel.n_tx,
                                         setup.n_rf_tx);
        return out;
    }
    if (method == "pe") {
        PeOptions opts;
        opts.seed = derive_seed(task_seed, 21);
        PeResult tx = pe_altmin(f_opt, setup.n_rf_tx, opts);
        opts.seed = derive_seed(task_seed, 22);
        PeResult rx = pe_altmin(w_opt, setup.n_rf_rx, opts);
        out.analog_tx = std::move(tx.analog);
        out.baseband_tx = std::move(tx.baseband);
        out.analog_rx = std::move(rx.analog);
        out.baseband_rx = std::move(rx.baseband);
        out.overhead = feedback_overhead(FeedbackScheme::unit_modulus, setup.channel.n_tx,
                                         setup.n_rf_tx);
        return out;
    }
    throw ConfigError("unknown method \"" + method + "\"");
}

std::vector<ResultRow> run_task(const ExperimentConfig& cfg, double sweep_value,
                                std::uint64_t task_seed) {
    TaskSetup setup = apply_sweep(cfg, sweep_value);
    setup.channel.seed = task_seed;

    const ChannelEnsemble ens = generate_channel(setup.channel);
    const DigitalPrecoderStack f_opt = optimal_precoders(ens, setup.n_streams);
    const DigitalPrecoderStack w_opt = wmmse_combiners(ens, f_opt);

    std::vector<ResultRow> rows;
    rows.reserve(cfg.methods.size());
    for (const std::string& method : cfg.methods) {
        ResultRow row;
        row.method = method;
        row.sweep_parameter = cfg.sweep.parameter;
        row.sweep_value = sweep_value;
        row.seed = task_seed;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const MethodOutput mo =
                run_method(method, setup, f_opt, w_opt, cfg, task_seed);
            double se = 0.0;
            for (Index k = 0; k < setup.channel.n_subbands; ++k)
                se += spectral_efficiency(
                    ens.per_band[static_cast<std::size_t>(k)], mo.analog_tx,
                    mo.baseband_tx[static_cast<std::size_t>(k)], mo.analog_rx,
                    mo.baseband_rx[static_cast<std::size_t>(k)],
                    setup.channel.power_budget, ens.noise_variance, setup.n_streams);
            row.mean_se = se / static_cast<double>(setup.channel.n_subbands);
            if (method == "fully_digital") {
                row.mean_nmse = 0.0;
            } else {
                const std::vector<double> nmse = factorization_nmse(
                    f_opt, mo.analog_tx, std::span<const CMat>(mo.baseband_tx));
                double acc = 0.0;
                for (double v : nmse)
                    acc += v;
                row.mean_nmse = acc / static_cast<double>(nmse.size());
            }
            row.overhead = mo.overhead;
        } catch (const IdentifiabilityError&) {
            row.status = "identifiability_violation";
        } catch (const std::exception&) {
            row.status = "error";
        }
        if (cfg.record_runtime) {
            const auto t1 = std::chrono::steady_clock::now();
            row.runtime_ms =
                std::chrono::duration<double, std::milli>(t1 - t0).count();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ','))
        fields.push_back(field);
    if (!line.empty() && line.back() == ',')
        fields.emplace_back();
    return fields;
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("malformed CSV field " + what + ": \"" + s + "\"");
    }
}

} // namespace

void ExperimentConfig::validate() const {
    channel.validate();
    if (methods.empty())
        throw ConfigError("methods must list at least one method");
    std::set<std::string> seen;
    for (const std::string& m : methods) {
        if (!known_methods().contains(m))
            throw ConfigError("unknown method \"" + m + "\"");
        if (!seen.insert(m).second)
            throw ConfigError("method \"" + m + "\" listed twice");
    }
    if (realizations < 1)
        throw ConfigError("realizations must be >= 1");
    if (sweep.values.empty())
        throw ConfigError("sweep.values must be non-empty");
    const std::set<std::string> params{"snr_db", "n_rf", "n_streams"};
    if (!params.contains(sweep.parameter))
        throw ConfigError("sweep.parameter must be one of snr_db, n_rf, n_streams");
    if (sweep.parameter != "snr_db")
        for (double v : sweep.values)
            if (!(v >= 1.0) || v != std::floor(v))
                throw ConfigError("sweep values for " + sweep.parameter +
                                  " must be positive integers");
    {
        std::set<double> unique(sweep.values.begin(), sweep.values.end());
        if (unique.size() != sweep.values.size())
            throw ConfigError("sweep.values contains duplicates");
    }
    if (output_path.empty())
        throw ConfigError("output path must be non-empty");
    if (codebook_size < channel.n_tx)
        throw ConfigError("codebook_size must be >= n_tx");
    if (tals.max_iters < 1)
        throw ConfigError("tals.max_iters must be >= 1");
    if (tals.restarts < 1)
        throw ConfigError("tals.restarts must be >= 1");

    for (double v : sweep.values)
        check_dimension_chain(apply_sweep(*this, v), v, sweep.parameter);
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }

    reject_unknown_keys(j, {"channel", "methods", "sweep", "realizations", "n_streams",
                            "n_rf_tx", "n_rf_rx", "output", "seed", "codebook_size",
                            "record_runtime", "tals"},
                        "config root");

    ExperimentConfig cfg;
    try {
        if (j.contains("channel"))
            cfg.channel = channel_from_json(j.at("channel"));
        if (j.contains("methods"))
            cfg.methods = j.at("methods").get<std::vector<std::string>>();
        if (j.contains("sweep")) {
            const json& s = j.at("sweep");
            reject_unknown_keys(s, {"parameter", "values"}, "sweep");
            cfg.sweep.parameter = s.value("parameter", cfg.sweep.parameter);
            cfg.sweep.values = s.at("values").get<std::vector<double>>();
        }
        cfg.realizations = j.value("realizations", cfg.realizations);
        cfg.n_streams = j.value("n_streams", cfg.n_streams);
        cfg.n_rf_tx = j.value("n_rf_tx", cfg.n_rf_tx);
        cfg.n_rf_rx = j.value("n_rf_rx", cfg.n_rf_rx);
        cfg.output_path = j.value("output", cfg.output_path);
        cfg.master_seed = j.value("seed", cfg.master_seed);
        cfg.codebook_size = j.value("codebook_size", cfg.codebook_size);
        cfg.record_runtime = j.value("record_runtime", cfg.record_runtime);
        if (j.contains("tals")) {
            const json& t = j.at("tals");
            reject_unknown_keys(t,
                                {"max_iters", "rel_tol", "abs_tol", "restarts",
                                 "vandermonde_projection"},
                                "tals");
            cfg.tals.max_iters = t.value("max_iters", cfg.tals.max_iters);
            cfg.tals.rel_tol = t.value("rel_tol", cfg.tals.rel_tol);
            cfg.tals.abs_tol = t.value("abs_tol", cfg.tals.abs_tol);
            cfg.tals.restarts = t.value("restarts", cfg.tals.restarts);
            cfg.tals.vandermonde_projection =
                t.value("vandermonde_projection", cfg.tals.vandermonde_projection);
        }
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }

    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path.string() + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return cfg;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, int jobs) {
    cfg.validate();
    struct Task {
        double sweep_value;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    tasks.reserve(cfg.sweep.values.size() * static_cast<std::size_t>(cfg.realizations));
    for (double v : cfg.sweep.values)
        for (int r = 0; r < cfg.realizations; ++r)
            tasks.push_back({v, derive_seed(cfg.master_seed,
                                            static_cast<std::uint64_t>(r))});

    std::vector<std::vector<ResultRow>> slots(tasks.size());
    const int workers = std::clamp<int>(jobs, 1, static_cast<int>(tasks.size()));
    if (workers == 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i)
            slots[i] = run_task(cfg, tasks[i].sweep_value, tasks[i].seed);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= tasks.size())
                    return;
                try {
                    slots[i] = run_task(cfg, tasks[i].sweep_value, tasks[i].seed);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(worker);
        for (std::thread& t : pool)
            t.join();
        if (failure)
            std::rethrow_exception(failure);
    }

    std::vector<ResultRow> rows;
    for (std::vector<ResultRow>& slot : slots)
        for (ResultRow& row : slot)
            rows.push_back(std::move(row));
    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        if (a.sweep_value != b.sweep_value)
            return a.sweep_value < b.sweep_value;
        if (a.seed != b.seed)
            return a.seed < b.seed;
        return a.method < b.method;
    });
    return rows;
}

void write_result_csv(const std::filesystem::path& path,
                      const std::vector<ResultRow>& rows) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << kCsvHeader << '\n';
        for (const ResultRow& r : rows)
            out << r.method << ',' << r.sweep_parameter << ',' << fmt(r.sweep_value)
                << ',' << r.seed << ',' << fmt(r.mean_se) << ',' << fmt(r.mean_nmse)
                << ',' << r.overhead << ',' << fmt(r.runtime_ms) << ',' << r.status
                << '\n';
        if (!out)
            throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::vector<ResultRow> read_result_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open CSV " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("CSV " + path.string() + " is empty");
    if (line != kCsvHeader)
        throw std::runtime_error("CSV " + path.string() + " has an unexpected header");

    std::vector<ResultRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 9)
            throw std::runtime_error("CSV " + path.string() + " line " +
                                     std::to_string(lineno) + ": expected 9 fields");
        ResultRow r;
        r.method = f[0];
        r.sweep_parameter = f[1];
        r.sweep_value = parse_double(f[2], "sweep_value");
        r.seed = static_cast<std::uint64_t>(
            std::strtoull(f[3].c_str(), nullptr, 10));
        r.mean_se = parse_double(f[4], "mean_se");
        r.mean_nmse = parse_double(f[5], "mean_nmse");
        r.overhead = static_cast<long>(parse_double(f[6], "overhead"));
        r.runtime_ms = parse_double(f[7], "runtime_ms");
        r.status = f[8];
        rows.push_back(std::move(r));
    }
    if (rows.empty())
        throw std::runtime_error("CSV " + path.string() + " has no data rows");
    return rows;
}

std::string summary_table(const std::vector<ResultRow>& rows) {
    // (method, sweep value) -> mean_se samples
    std::map<std::pair<std::string, double>, std::vector<double>> se;
    std::map<std::pair<std::string, double>, std::vector<double>> nmse;
    std::string param = "sweep";
    for (const ResultRow& r : rows) {
        if (r.status != "ok")
            continue;
        param = r.sweep_parameter;
        se[{r.method, r.sweep_value}].push_back(r.mean_se);
        nmse[{r.method, r.sweep_value}].push_back(r.mean_nmse);
    }
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-14s %12s %8s %12s %12s %12s\n", "method",
                  param.c_str(), "n", "mean_se", "stderr_se", "mean_nmse");
    out << buf;
    for (const auto& [key, samples] : se) {
        double mean = 0.0;
        for (double v : samples)
            mean += v;
        mean /= static_cast<double>(samples.size());
        double var = 0.0;
        for (double v : samples)
            var += (v - mean) * (v - mean);
        const double stderr_se =
            samples.size() > 1
                ? std::sqrt(var / static_cast<double>(samples.size() - 1)) /
                      std::sqrt(static_cast<double>(samples.size()))
                : 0.0;
        const std::vector<double>& nm = nmse[key];
        double nmean = 0.0;
        for (double v : nm)
            nmean += v;
        if (!nm.empty())
            nmean /= static_cast<double>(nm.size());
        std::snprintf(buf, sizeof buf, "%-14s %12.4g %8zu %12.4f %12.4f %12.4g\n",
                      key.first.c_str(), key.second, samples.size(), mean, stderr_se,
                      nmean);
        out << buf;
    }
    return out.str();
}

std::vector<std::filesystem::path> emit_plotdata(const std::filesystem::path& csv_path,
                                                 const std::string& metric) {
    if (metric != "se" && metric != "nmse")
        throw std::runtime_error("metric must be \"se\" or \"nmse\"");
    const std::vector<ResultRow> rows = read_result_csv(csv_path);

    std::map<std::string, std::map<double, std::vector<double>>> series;
    for (const ResultRow& r : rows) {
        if (r.status != "ok")
            continue;
        series[r.method][r.sweep_value].push_back(metric == "se" ? r.mean_se
                                                                 : r.mean_nmse);
    }
    if (series.empty())
        throw std::runtime_error("CSV " + csv_path.string() + " has no usable rows");

    std::vector<std::filesystem::path> written;
    for (const auto& [method, points] : series) {
        std::filesystem::path out_path = csv_path;
        out_path.replace_filename(csv_path.stem().string() + "." + method + "." +
                                  metric + ".dat");
        std::ofstream out(out_path, std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open " + out_path.string());
        for (const auto& [value, samples] : points) {
            double mean = 0.0;
            for (double v : samples)
                mean += v;
            mean /= static_cast<double>(samples.size());
            out << fmt(value) << ' ' << fmt(mean) << '\n';
        }
        if (!out)
            throw std::runtime_error("write failed for " + out_path.string());
        written.push_back(out_path);
    }
    return written;
}

} // namespace tenbeam
