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

#ifndef TENBEAM_CHANNEL_HPP
#define TENBEAM_CHANNEL_HPP

#include "tenbeam/vtpar.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace tenbeam {

/// Clustered geometric wideband channel parameters. Half-wavelength uniform
/// linear arrays at both ends; per-band matrices are averages over the
/// subcarriers of each subband.
struct ChannelConfig {
    Index n_tx = 32;
    Index n_rx = 8;
    Index n_subbands = 30;   // K
    Index subband_size = 12; // subcarriers averaged into one band
    Index n_clusters = 5;
    Index n_rays = 10;       // rays per cluster
    double delay_spread_s = 300e-9;
    double subcarrier_spacing_hz = 60e3;
    double angle_spread_rad = 0.1309; // Laplacian scale of per-ray offsets (~7.5 deg)
    std::uint64_t seed = 0;
    double snr_db = 0.0;
    double power_budget = 1.0; // alpha

    void validate() const; // throws std::invalid_argument on bad fields
};

/// Per-band channel matrices plus the noise variance implied by the configured
/// SNR: noise_variance = power_budget * 10^(-snr_db/10).
struct ChannelEnsemble {
    std::vector<CMat> per_band; // K matrices, N_r x N_t
    double noise_variance = 1.0;
    ChannelConfig config;
};

// Draws cluster delays (exponential), cluster angles (uniform), per-ray angle
// offsets (Laplacian) and ray gains (complex Gaussian), applies the
// Saleh-Valenzuela cluster power decay e^{-tau/delay_spread}, forms
// per-subcarrier responses and averages them into per-band matrices. Gains are
// scaled so the expected squared Frobenius norm of a band matrix is
// n_tx * n_rx. Deterministic for a given config (including seed).
ChannelEnsemble generate_channel(const ChannelConfig& cfg);

// Per-band factorization targets: the n_streams dominant right singular
// vectors of each band matrix, under the deterministic SVD phase gauge.
DigitalPrecoderStack optimal_precoders(const ChannelEnsemble& ens, Index n_streams);

// Per-band linear MMSE receive filters for the effective channels
// H[k] * F_opt[k]: W[k] = Heff * (Heff^H Heff + noise_variance * I)^{-1},
// returned as N_r x N_s matrices.
DigitalPrecoderStack wmmse_combiners(const ChannelEnsemble& ens,
                                     const DigitalPrecoderStack& precoders);

// Replayable on-disk format: one JSON header line (dims, noise variance,
// config echo), then interleaved little-endian real/imag doubles for the K
// band matrices in row-major order.
void save_ensemble(const std::filesystem::path& path, const ChannelEnsemble& ens);
ChannelEnsemble load_ensemble(const std::filesystem::path& path);

} // namespace tenbeam

#endif // TENBEAM_CHANNEL_HPP
