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
// Hybrid precoder/combiner factorization with a Vandermonde-constrained analog
// stage. The per-band digital targets are stacked side by side, the first and
// last N-1 rows of the stack form two slabs of a third-order tensor, and a
// rank-N_RF CPD of that tensor exposes the analog phase of each RF chain in
// its first-mode factor. Phases are read off by shift correlation, the scale
// ambiguity of the CPD is resolved through the known Vandermonde leading
// entries, and the baseband factor reshapes into the per-band matrices.

#ifndef TENBEAM_VTPAR_HPP
#define TENBEAM_VTPAR_HPP

#include "tenbeam/cpd.hpp"

#include <string>
#include <vector>

namespace tenbeam {

enum class StackRole { precoder, combiner };

/// The K per-band fully-digital factorization targets, one N x N_s matrix per
/// subband. Precoder stacks hold right-singular-vector columns and must have
/// unit-norm columns; combiner stacks are unconstrained.
class DigitalPrecoderStack {
  public:
    DigitalPrecoderStack(std::vector<CMat> per_band, StackRole role);

    const std::vector<CMat>& per_band() const { return per_band_; }
    const CMat& band(Index k) const { return per_band_[static_cast<std::size_t>(k)]; }
    StackRole role() const { return role_; }

    Index entry_dim() const { return per_band_.front().rows(); }  // N
    Index n_streams() const { return per_band_.front().cols(); }  // N_s
    Index n_bands() const { return static_cast<Index>(per_band_.size()); } // K

  private:
    std::vector<CMat> per_band_;
    StackRole role_;
};

struct IdentifiabilityResult {
    bool ok = false;
    std::string violation; // names the failed inequality; empty when ok
};

// Essential-uniqueness gate for the two-slab model with a Vandermonde first
// factor: requires n >= n_rf + 1 (tall subarrays) and n_bands * n_streams >=
// n_rf (tall baseband factor). Single-carrier stacks with n_rf > n_streams
// fail the second inequality.
IdentifiabilityResult identifiability_check(Index n, Index n_rf, Index n_bands,
                                            Index n_streams);

// Two-slab tensor of dims (N-1, K*N_s, 2): slab 0 holds the first N-1 rows of
// the horizontal stack [target(0) ... target(K-1)], slab 1 the last N-1 rows.
Tensor3 build_two_slab_tensor(const DigitalPrecoderStack& stack);

// Per-column phase estimate arg(sum_n a(n+1) * conj(a(n))), wrapped to
// [-pi, pi]. Exact for noiseless scaled Vandermonde columns and invariant to
// each column's complex scale.
RVec recover_phases(const CMat& a_factor);

struct ResolvedFactors {
    CMat analog;           // N x F, rebuilt exactly from the phases
    CMat baseband_stacked; // (K*N_s) x F, scale ambiguity resolved
    CMat slab_gains;       // 2 x F; row 0 all ones, row 1 ~ e^{j*phi}
};

// Undoes the reciprocal column scaling of the CPD using the unit leading
// entries of the two Vandermonde-structured factors: with lambda1 = a(0,i) and
// lambda3 = c(0,i), the baseband column is multiplied by lambda1 * lambda3.
// The analog matrix is rebuilt from the phases (one extra row relative to the
// subarray factor), so its entries are unit modulus by construction.
ResolvedFactors resolve_scaling(const CpdFactors& factors, const RVec& phases);

struct VtparDiagnostics {
    TalsReport tals;
    // ||target[k] - analog * baseband[k]||_F / ||target[k]||_F, measured
    // before any power normalization.
    std::vector<double> per_band_error;
    bool phase_collision = false;   // two recovered phases closer than 1e-6 rad
    bool baseband_rank_deficient = false;
    bool forced = false;            // identifiability gate overridden
    bool power_normalized = false;
};

/// Analog phases plus per-band baseband matrices. The analog matrix is the
/// Vandermonde expansion of the phases, so every entry has unit modulus.
struct HybridFactorization {
    RVec phases;                // N_RF phase angles in [-pi, pi]
    CMat analog;                // N x N_RF
    std::vector<CMat> baseband; // K matrices, N_RF x N_s
    VtparDiagnostics diagnostics;
};

struct IdentifiabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AssembleOptions {
    TalsOptions tals;
    bool force = false; // run despite a failed identifiability check
};

// Full pipeline: two-slab tensor -> rank-n_rf TALS -> phase recovery -> scale
// resolution -> reshape into per-band baseband matrices. Precoder stacks are
// power-normalized per band afterwards so ||analog * baseband[k]||_F^2 equals
// the stream count; combiner stacks are returned unnormalized.
HybridFactorization assemble(const DigitalPrecoderStack& stack, Index n_rf,
                             const AssembleOptions& opts = {});

} // namespace tenbeam

#endif // TENBEAM_VTPAR_HPP
