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

#ifndef TENBEAM_CPD_HPP
#define TENBEAM_CPD_HPP

#include "tenbeam/tensor.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tenbeam {

/// Rank-F PARAFAC/CPD factors of a third-order tensor: slab p of the model is
/// a * Diag(c.row(p)) * b^T (plain transpose, no conjugation).
struct CpdFactors {
    CMat a; // I x F
    CMat b; // J x F
    CMat c; // P x F

    Index rank() const { return a.cols(); }
};

struct TalsOptions {
    int max_iters = 500;
    // Stop when the residual change per sweep drops below rel_tol * residual,
    // or when the residual itself falls below abs_tol.
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    // Number of starting points; the fit with the lowest final residual wins,
    // ties broken by start index. For two-slab tensors with rank <=
    // min(rows, cols) the first start is a deterministic matrix-pencil solve
    // (exact on noiseless two-slab models); all other starts are random.
    // Ignored when init is provided.
    int restarts = 5;
    std::uint64_t seed = 0;
    std::optional<CpdFactors> init;
    // Per-sweep factor update order; a permutation of {0 (A), 1 (B), 2 (C)}.
    std::array<int, 3> update_order{0, 1, 2};
    // Snap the first-mode factor to the nearest scaled Vandermonde column
    // right after each A update, so the B and C solves adapt to the
    // structured factor. Off by default: the default pipeline reads structure
    // off the unconstrained factors afterwards. With the projection on, the
    // residual history is no longer guaranteed non-increasing (the snap is
    // not a least-squares step).
    bool vandermonde_projection = false;
};

struct TalsReport {
    int iterations = 0;
    std::vector<double> residual_history; // relative fit error after each sweep
    bool converged = false;
    double final_residual = 0.0;
    int best_restart = 0;
    std::vector<std::string> warnings;
};

// Dense tensor from CPD factors; slab p = a * Diag(c.row(p)) * b^T.
Tensor3 reconstruct(const CpdFactors& f);

// Relative fit error ||t - reconstruct(f)||_F / ||t||_F (absolute if ||t|| = 0).
double residual(const Tensor3& t, const CpdFactors& f);

// Trilinear alternating least squares: cyclic exact least-squares updates of
// the three factors until the residual stalls or max_iters is hit.
// Deterministic for a given seed and option set.
std::pair<CpdFactors, TalsReport> tals(const Tensor3& t, Index rank,
                                       const TalsOptions& opts = {});

} // namespace tenbeam

#endif // TENBEAM_CPD_HPP
