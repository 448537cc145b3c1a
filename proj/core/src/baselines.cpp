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

#include "tenbeam/baselines.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace tenbeam {

namespace {

void normalize_power(const CMat& analog, std::vector<CMat>& baseband, Index n_streams) {
    const double target = std::sqrt(static_cast<double>(n_streams));
    for (CMat& bb : baseband) {
        const double norm = (analog * bb).norm();
        if (norm > 0.0)
            bb *= target / norm;
    }
}

} // namespace

Codebook dft_codebook(Index n, Index n_cb) {
    if (n < 1)
        throw std::invalid_argument("dft_codebook: n must be >= 1");
    if (n_cb < n)
        throw std::invalid_argument("dft_codebook: need n_cb >= n");
    Codebook cb;
    cb.kind = CodebookKind::dft;
    cb.columns = CMat(n, n_cb);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n_cb);
    for (Index m = 0; m < n_cb; ++m)
        for (Index r = 0; r < n; ++r)
            cb.columns(r, m) = std::polar(1.0, step * static_cast<double>(r * m));
    return cb;
}

SompResult somp(const DigitalPrecoderStack& stack, const Codebook& cb, Index n_rf) {
    const Index n = stack.entry_dim();
    const Index n_cb = cb.columns.cols();
    if (n_rf < 1)
        throw std::invalid_argument("somp: n_rf must be >= 1");
    if (n_rf > n_cb)
        throw std::invalid_argument("somp: n_rf exceeds the codebook size");
    if (cb.columns.rows() != n)
        throw std::invalid_argument("somp: codebook row count does not match the stack");
    for (Index m = 0; m < n_cb; ++m)
        for (Index r = 0; r < n; ++r)
            if (std::abs(std::abs(cb.columns(r, m)) - 1.0) > 1e-9)
                throw std::invalid_argument("somp: codebook entries must have unit modulus");

    const Index kbands = stack.n_bands();
    std::vector<CMat> res(static_cast<std::size_t>(kbands));
    for (Index k = 0; k < kbands; ++k)
        res[static_cast<std::size_t>(k)] = stack.band(k);

    SompResult out;
    out.analog = CMat(n, 0);
    std::vector<bool> used(static_cast<std::size_t>(n_cb), false);

    for (Index t = 0; t < n_rf; ++t) {
        Index best = -1;
        double best_score = -1.0;
        for (Index m = 0; m < n_cb; ++m) {
            if (used[static_cast<std::size_t>(m)])
                continue;
            double score = 0.0;
            for (const CMat& r : res)
                score += (cb.columns.col(m).adjoint() * r).squaredNorm();
            if (best < 0 || score > best_score) {
                best = m;
                best_score = score;
            }
        }
        used[static_cast<std::size_t>(best)] = true;
        out.selected.push_back(best);
        out.analog.conservativeResize(n, t + 1);
        out.analog.col(t) = cb.columns.col(best);

        const CMat pinv_a = pseudo_inverse(out.analog);
        std::vector<CMat> bb(static_cast<std::size_t>(kbands));
        double total = 0.0;
        for (Index k = 0; k < kbands; ++k) {
            bb[static_cast<std::size_t>(k)] = pinv_a * stack.band(k);
            const CMat r = stack.band(k) - out.analog * bb[static_cast<std::size_t>(k)];
            total += r.squaredNorm();
            const double rn = r.norm();
            res[static_cast<std::size_t>(k)] = rn > 1e-14 ? CMat(r / rn) : r;
        }
        out.residual_history.push_back(std::sqrt(total));
        if (t == n_rf - 1)
            out.baseband = std::move(bb);
    }

    if (stack.role() == StackRole::precoder) {
        normalize_power(out.analog, out.baseband, stack.n_streams());
        out.power_normalized = true;
    }
    return out;
}

PeResult pe_altmin(const DigitalPrecoderStack& stack, Index n_rf, const PeOptions& opts) {
    const Index n = stack.entry_dim();
    const Index ns = stack.n_streams();
    const Index kbands = stack.n_bands();
    if (n_rf < ns)
        throw std::invalid_argument("pe_altmin: need n_rf >= n_streams");
    if (opts.max_iters < 1)
        throw std::invalid_argument("pe_altmin: max_iters must be >= 1");

    PeResult out;
    if (opts.init) {
        if (opts.init->rows() != n || opts.init->cols() != n_rf)
            throw std::invalid_argument("pe_altmin: init matrix has wrong dims");
        for (Index j = 0; j < n_rf; ++j)
            for (Index i = 0; i < n; ++i)
                if (std::abs(std::abs((*opts.init)(i, j)) - 1.0) > 1e-9)
                    throw std::invalid_argument(
                        "pe_altmin: init entries must have unit modulus");
        out.analog = *opts.init;
    } else {
        std::mt19937_64 rng(opts.seed);
        std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
        out.analog = CMat(n, n_rf);
        for (Index j = 0; j < n_rf; ++j)
            for (Index i = 0; i < n; ++i)
                out.analog(i, j) = std::polar(1.0, u(rng));
    }

    double prev = 0.0;
    for (int it = 0; it < opts.max_iters; ++it) {
        const CMat pinv_a = pseudo_inverse(out.analog);
        out.baseband.resize(static_cast<std::size_t>(kbands));
        double obj = 0.0;
        for (Index k = 0; k < kbands; ++k) {
            auto& bb = out.baseband[static_cast<std::size_t>(k)];
            bb = pinv_a * stack.band(k);
            obj += (stack.band(k) - out.analog * bb).squaredNorm();
        }
        out.objective_history.push_back(obj);
        out.iterations = it + 1;
        if (it > 0 && std::abs(prev - obj) <= opts.rel_tol * std::max(prev, 1e-300)) {
            out.converged = true;
            break;
        }
        prev = obj;

        CMat g = CMat::Zero(n, n_rf);
        for (Index k = 0; k < kbands; ++k)
            g += stack.band(k) * out.baseband[static_cast<std::size_t>(k)].adjoint();
        for (Index j = 0; j < n_rf; ++j)
            for (Index i = 0; i < n; ++i)
                out.analog(i, j) = g(i, j) == Complex(0.0, 0.0)
                                       ? Complex(1.0, 0.0)
                                       : std::polar(1.0, std::arg(g(i, j)));
    }

    if (stack.role() == StackRole::precoder) {
        normalize_power(out.analog, out.baseband, ns);
        out.power_normalized = true;
    }
    return out;
}

} // namespace tenbeam
