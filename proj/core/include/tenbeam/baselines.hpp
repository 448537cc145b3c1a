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
// Baseline factorizations of the same per-band digital targets under the two
// classical analog feasible sets: codebook column selection (simultaneous OMP)
// and unconstrained unit-modulus entries (phase-extraction alternating
// minimization).

#ifndef TENBEAM_BASELINES_HPP
#define TENBEAM_BASELINES_HPP

#include "tenbeam/vtpar.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace tenbeam {

enum class CodebookKind { dft, custom };

/// Candidate analog columns; every entry has unit modulus.
struct Codebook {
    CMat columns; // N x N_cb
    CodebookKind kind = CodebookKind::custom;
};

// DFT codebook: column m entry n is e^{j*2*pi*n*m/n_cb}, unnormalized (unit
// modulus entries, column norm sqrt(N)). Requires n_cb >= n.
Codebook dft_codebook(Index n, Index n_cb);

/// Codebook-constrained factorization; analog columns are drawn from the
/// codebook and the selected indices are the feedback payload.
struct SompResult {
    CMat analog;
    std::vector<CMat> baseband;
    std::vector<Index> selected;           // codebook indices, selection order
    std::vector<double> residual_history;  // total stacked residual after each pick
    bool power_normalized = false;
};

// Simultaneous OMP across bands: greedily picks the codebook column with the
// largest summed correlation against the per-band residuals, re-solves the
// baseband least squares after every pick, and normalizes each band's residual
// before the next correlation. Ties break on the lowest index; chosen columns
// are masked out. Precoder stacks are power-normalized per band at the end.
SompResult somp(const DigitalPrecoderStack& stack, const Codebook& cb, Index n_rf);

struct PeOptions {
    int max_iters = 200;
    double rel_tol = 1e-8;  // on the relative objective change per iteration
    std::uint64_t seed = 0; // for the random-phase initial analog matrix
    std::optional<CMat> init; // explicit initial analog matrix (overrides seed)
};

/// Unit-modulus factorization; the N * N_RF analog phases are the feedback payload.
struct PeResult {
    CMat analog;
    std::vector<CMat> baseband;
    std::vector<double> objective_history; // sum_k ||target[k] - analog*baseband[k]||_F^2
    int iterations = 0;
    bool converged = false;
    bool power_normalized = false;
};

// Phase-extraction alternating minimization: baseband step solves the per-band
// least squares through the pseudo-inverse of the analog matrix; analog step
// sets every entry to the phase of the accumulated target-baseband correlation
// G = sum_k target[k] * baseband[k]^H (entries with G == 0 get phase 0).
// Precoder stacks are power-normalized per band at the end.
PeResult pe_altmin(const DigitalPrecoderStack& stack, Index n_rf,
                   const PeOptions& opts = {});

} // namespace tenbeam

#endif // TENBEAM_BASELINES_HPP
