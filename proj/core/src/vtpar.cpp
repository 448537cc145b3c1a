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

#include "tenbeam/vtpar.hpp"

#include <cmath>
#include <numbers>

namespace tenbeam {

DigitalPrecoderStack::DigitalPrecoderStack(std::vector<CMat> per_band, StackRole role)
    : per_band_(std::move(per_band)), role_(role) {
    if (per_band_.empty())
        throw std::invalid_argument("DigitalPrecoderStack: need at least one band");
    const Index n = per_band_.front().rows();
    const Index ns = per_band_.front().cols();
    if (n < 1 || ns < 1)
        throw std::invalid_argument("DigitalPrecoderStack: band matrices must be non-empty");
    for (const CMat& m : per_band_) {
        if (m.rows() != n || m.cols() != ns)
            throw std::invalid_argument("DigitalPrecoderStack: band dims differ");
        if (!m.allFinite())
            throw std::invalid_argument("DigitalPrecoderStack: non-finite entries");
    }
    if (role_ == StackRole::precoder)
        for (const CMat& m : per_band_)
            for (Index j = 0; j < ns; ++j)
                if (std::abs(m.col(j).norm() - 1.0) > 1e-9)
                    throw std::invalid_argument(
                        "DigitalPrecoderStack: precoder columns must have unit norm");
}

IdentifiabilityResult identifiability_check(Index n, Index n_rf, Index n_bands,
                                            Index n_streams) {
    if (n < 1 || n_rf < 1 || n_bands < 1 || n_streams < 1)
        throw std::invalid_argument("identifiability_check: all counts must be >= 1");
    if (n < n_rf + 1)
        return {false, "N < N_RF + 1"};
    if (n_bands * n_streams < n_rf)
        return {false, "K*N_s < N_RF"};
    return {true, ""};
}

Tensor3 build_two_slab_tensor(const DigitalPrecoderStack& stack) {
    const Index n = stack.entry_dim();
    if (n < 2)
        throw std::invalid_argument("build_two_slab_tensor: need at least two rows per band");
    const Index ns = stack.n_streams();
    const Index k = stack.n_bands();
    CMat x(n, k * ns);
    for (Index band = 0; band < k; ++band)
        x.middleCols(band * ns, ns) = stack.band(band);
    Tensor3 t(n - 1, k * ns, 2);
    t.slab(0) = x.topRows(n - 1);
    t.slab(1) = x.bottomRows(n - 1);
    return t;
}

RVec recover_phases(const CMat& a_factor) {
    if (a_factor.rows() < 2)
        throw std::invalid_argument("recover_phases: need at least two rows");
    RVec phases(a_factor.cols());
    for (Index i = 0; i < a_factor.cols(); ++i) {
        if (a_factor.col(i).norm() <= 1e-14)
            throw std::invalid_argument("recover_phases: column " + std::to_string(i) +
                                        " is numerically zero");
        Complex acc(0.0, 0.0);
        for (Index n = 0; n + 1 < a_factor.rows(); ++n)
            acc += a_factor(n + 1, i) * std::conj(a_factor(n, i));
        phases(i) = std::arg(acc);
    }
    return phases;
}

ResolvedFactors resolve_scaling(const CpdFactors& factors, const RVec& phases) {
    if (factors.c.rows() != 2)
        throw std::invalid_argument("resolve_scaling: third factor must have exactly 2 rows");
    if (factors.rank() != phases.size())
        throw std::invalid_argument("resolve_scaling: rank and phase count differ");

    ResolvedFactors out;
    out.analog = vandermonde_matrix(phases, factors.a.rows() + 1);
    out.baseband_stacked = factors.b;
    out.slab_gains = CMat(2, factors.rank());
    for (Index i = 0; i < factors.rank(); ++i) {
        const Complex l1 = factors.a(0, i);
        const Complex l3 = factors.c(0, i);
        if (std::abs(l1) < 1e-12 || std::abs(l3) < 1e-12)
            throw std::invalid_argument(
                "resolve_scaling: leading factor entry below 1e-12, scaling is "
                "ill-conditioned");
        out.baseband_stacked.col(i) *= l1 * l3;
        out.slab_gains(0, i) = Complex(1.0, 0.0);
        out.slab_gains(1, i) = factors.c(1, i) / l3;
    }
    return out;
}

HybridFactorization assemble(const DigitalPrecoderStack& stack, Index n_rf,
                             const AssembleOptions& opts) {
    if (n_rf < 1)
        throw std::invalid_argument("assemble: n_rf must be >= 1");

    HybridFactorization hf;
    const IdentifiabilityResult gate = identifiability_check(
        stack.entry_dim(), n_rf, stack.n_bands(), stack.n_streams());
    if (!gate.ok) {
        if (!opts.force)
            throw IdentifiabilityError("assemble: identifiability violated: " +
                                       gate.violation);
        hf.diagnostics.forced = true;
    }

    const Tensor3 t = build_two_slab_tensor(stack);
    auto [factors, report] = tals(t, n_rf, opts.tals);
    hf.diagnostics.tals = std::move(report);

    hf.phases = recover_phases(factors.a);
    const ResolvedFactors resolved = resolve_scaling(factors, hf.phases);
    hf.analog = resolved.analog;

    const Index ns = stack.n_streams();
    const Index kbands = stack.n_bands();
    hf.baseband.reserve(static_cast<std::size_t>(kbands));
    for (Index k = 0; k < kbands; ++k)
        hf.baseband.push_back(resolved.baseband_stacked.middleRows(k * ns, ns).transpose());

    hf.diagnostics.per_band_error.resize(static_cast<std::size_t>(kbands));
    for (Index k = 0; k < kbands; ++k) {
        const double denom = stack.band(k).norm();
        const double err = (stack.band(k) - hf.analog * hf.baseband[static_cast<std::size_t>(k)]).norm();
        hf.diagnostics.per_band_error[static_cast<std::size_t>(k)] =
            denom > 0.0 ? err / denom : err;
    }

    for (Index i = 0; i < n_rf && !hf.diagnostics.phase_collision; ++i)
        for (Index j = i + 1; j < n_rf; ++j) {
            const double gap = std::abs(
                std::remainder(hf.phases(i) - hf.phases(j), 2.0 * std::numbers::pi));
            if (gap < 1e-6) {
                hf.diagnostics.phase_collision = true;
                break;
            }
        }

    {
        const SvdResult bsvd = svd(resolved.baseband_stacked);
        const double smax = bsvd.singular_values(0);
        const double smin = bsvd.singular_values(bsvd.singular_values.size() - 1);
        hf.diagnostics.baseband_rank_deficient =
            resolved.baseband_stacked.rows() < n_rf || smin <= 1e-10 * smax;
    }

    if (stack.role() == StackRole::precoder) {
        const double target = std::sqrt(static_cast<double>(ns));
        for (Index k = 0; k < kbands; ++k) {
            auto& bb = hf.baseband[static_cast<std::size_t>(k)];
            const double norm = (hf.analog * bb).norm();
            if (norm > 0.0)
                bb *= target / norm;
        }
        hf.diagnostics.power_normalized = true;
    }
    return hf;
}

} // namespace tenbeam
