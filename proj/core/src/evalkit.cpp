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

#include "tenbeam/evalkit.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>

namespace tenbeam {

namespace {

double se_from_products(const CMat& channel, const CMat& f, const CMat& w,
                        double power_budget, double noise_variance, Index n_streams) {
    if (n_streams < 1)
        throw std::invalid_argument("spectral_efficiency: n_streams must be >= 1");
    if (!(power_budget > 0.0) || !(noise_variance > 0.0))
        throw std::invalid_argument(
            "spectral_efficiency: power budget and noise variance must be > 0");
    if (f.rows() != channel.cols() || w.rows() != channel.rows())
        throw std::invalid_argument("spectral_efficiency: endpoint dims do not match channel");
    if (f.cols() != n_streams || w.cols() != n_streams)
        throw std::invalid_argument(
            "spectral_efficiency: precoder/combiner must have n_streams columns");

    const CMat gamma = noise_variance * (w.adjoint() * w);
    {
        const SvdResult gs = svd(gamma);
        const double smax = gs.singular_values(0);
        const double smin = gs.singular_values(gs.singular_values.size() - 1);
        if (!(smin > 0.0) || smax / smin > 1e12)
            throw IllConditionedCombiner(
                "spectral_efficiency: combiner Gram condition number exceeds 1e12");
    }

    const Eigen::LLT<CMat> llt(gamma);
    if (llt.info() != Eigen::Success)
        throw IllConditionedCombiner("spectral_efficiency: combiner Gram not positive definite");

    const CMat m = w.adjoint() * channel * f;
    const CMat s = llt.matrixL().solve(m);
    const CMat inner =
        CMat::Identity(n_streams, n_streams) +
        (power_budget / static_cast<double>(n_streams)) * (s * s.adjoint());
    const Eigen::LLT<CMat> llt2(inner);
    if (llt2.info() != Eigen::Success)
        throw std::runtime_error("spectral_efficiency: log-det argument not positive definite");
    double rate = 0.0;
    for (Index i = 0; i < n_streams; ++i)
        rate += 2.0 * std::log2(llt2.matrixLLT()(i, i).real());
    return rate;
}

} // namespace

double spectral_efficiency(const CMat& channel, const CMat& analog_tx,
                           const CMat& baseband_tx, const CMat& analog_rx,
                           const CMat& baseband_rx, double power_budget,
                           double noise_variance, Index n_streams) {
    if (analog_tx.cols() != baseband_tx.rows() || analog_rx.cols() != baseband_rx.rows())
        throw std::invalid_argument("spectral_efficiency: analog/baseband dims do not chain");
    return se_from_products(channel, analog_tx * baseband_tx, analog_rx * baseband_rx,
                            power_budget, noise_variance, n_streams);
}

double spectral_efficiency_digital(const CMat& channel, const CMat& precoder,
                                   const CMat& combiner, double power_budget,
                                   double noise_variance, Index n_streams) {
    return se_from_products(channel, precoder, combiner, power_budget, noise_variance,
                            n_streams);
}

std::vector<double> factorization_nmse(const DigitalPrecoderStack& stack,
                                       const CMat& analog,
                                       std::span<const CMat> baseband) {
    if (baseband.size() != static_cast<std::size_t>(stack.n_bands()))
        throw std::invalid_argument("factorization_nmse: band counts differ");
    if (analog.rows() != stack.entry_dim())
        throw std::invalid_argument("factorization_nmse: analog row count mismatch");
    std::vector<double> out(baseband.size());
    for (Index k = 0; k < stack.n_bands(); ++k) {
        const CMat& bb = baseband[static_cast<std::size_t>(k)];
        if (bb.rows() != analog.cols() || bb.cols() != stack.n_streams())
            throw std::invalid_argument("factorization_nmse: baseband dims mismatch");
        const double num = (stack.band(k) - analog * bb).squaredNorm();
        const double den = stack.band(k).squaredNorm();
        out[static_cast<std::size_t>(k)] = den > 0.0 ? num / den : num;
    }
    return out;
}

long feedback_overhead(FeedbackScheme scheme, Index n, Index n_rf) {
    if (n < 1 || n_rf < 1)
        throw std::invalid_argument("feedback_overhead: counts must be >= 1");
    switch (scheme) {
    case FeedbackScheme::unit_modulus: return static_cast<long>(n * n_rf);
    case FeedbackScheme::codebook: return static_cast<long>(n_rf);
    case FeedbackScheme::vandermonde: return static_cast<long>(n_rf);
    }
    throw std::invalid_argument("feedback_overhead: unknown scheme");
}

std::string EvalReport::csv_header() {
    return "method,mean_rate,mean_nmse,overhead,runtime_ms";
}

std::string EvalReport::csv_row(const std::string& method) const {
    double nmse = 0.0;
    for (double v : per_band_nmse)
        nmse += v;
    if (!per_band_nmse.empty())
        nmse /= static_cast<double>(per_band_nmse.size());
    long total_overhead = 0;
    for (const auto& [name, count] : overhead)
        total_overhead += count;

    char buf[512];
    char a[64], b[64], c[64];
    std::snprintf(a, sizeof a, "%.17g", mean_rate);
    std::snprintf(b, sizeof b, "%.17g", nmse);
    std::snprintf(c, sizeof c, "%.17g", runtime_ms);
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%ld,%s", method.c_str(), a, b,
                  total_overhead, c);
    return buf;
}

std::string EvalReport::json_record(const std::string& method) const {
    nlohmann::json j{{"method", method},
                     {"per_band_rate", per_band_rate},
                     {"mean_rate", mean_rate},
                     {"per_band_nmse", per_band_nmse},
                     {"overhead", overhead},
                     {"runtime_ms", runtime_ms}};
    return j.dump();
}

} // namespace tenbeam
