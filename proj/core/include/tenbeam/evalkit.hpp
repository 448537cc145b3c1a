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

#ifndef TENBEAM_EVALKIT_HPP
#define TENBEAM_EVALKIT_HPP

#include "tenbeam/vtpar.hpp"

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tenbeam {

/// Thrown when the combiner Gram matrix is too ill-conditioned to invert.
struct IllConditionedCombiner : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Achievable rate of one band in bits/s/Hz:
//   R = log2 det(I + (alpha/n_streams) * G^{-1} W^H H F F^H H^H W)
// with F = analog_tx * baseband_tx, W = analog_rx * baseband_rx and
// G = noise_variance * W^H W, evaluated through a Cholesky solve.
// Throws IllConditionedCombiner when cond(G) exceeds 1e12.
double spectral_efficiency(const CMat& channel, const CMat& analog_tx,
                           const CMat& baseband_tx, const CMat& analog_rx,
                           const CMat& baseband_rx, double power_budget,
                           double noise_variance, Index n_streams);

// Convenience overload for fully digital endpoints (identity analog stages).
double spectral_efficiency_digital(const CMat& channel, const CMat& precoder,
                                   const CMat& combiner, double power_budget,
                                   double noise_variance, Index n_streams);

/// Anything exposing a frequency-flat analog stage plus per-band digital
/// stages can be scored against a factorization target.
template <typename T>
concept HybridFactorizationLike = requires(const T& t) {
    { t.analog } -> std::convertible_to<const CMat&>;
    { t.baseband } -> std::convertible_to<const std::vector<CMat>&>;
};

// Per band, squared Frobenius error of the product against the target,
// normalized by the target's squared norm.
std::vector<double> factorization_nmse(const DigitalPrecoderStack& stack,
                                       const CMat& analog,
                                       std::span<const CMat> baseband);

template <HybridFactorizationLike T>
std::vector<double> factorization_nmse(const DigitalPrecoderStack& stack, const T& hf) {
    return factorization_nmse(stack, hf.analog, std::span<const CMat>(hf.baseband));
}

enum class FeedbackScheme {
    unit_modulus, // one phase per analog entry: N * N_RF reals
    codebook,     // one column index per RF chain: N_RF integers
    vandermonde   // one generator phase per RF chain: N_RF reals
};

long feedback_overhead(FeedbackScheme scheme, Index n, Index n_rf);

/// Aggregated metrics for one method on one channel realization.
struct EvalReport {
    std::vector<double> per_band_rate; // bits/s/Hz
    double mean_rate = 0.0;
    std::vector<double> per_band_nmse;
    std::map<std::string, long> overhead; // method name -> parameter count
    double runtime_ms = 0.0;

    std::string csv_row(const std::string& method) const;
    std::string json_record(const std::string& method) const;
    static std::string csv_header();
};

} // namespace tenbeam

#endif // TENBEAM_EVALKIT_HPP
