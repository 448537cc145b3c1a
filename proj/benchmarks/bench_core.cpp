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
#include "tenbeam/channel.hpp"
#include "tenbeam/cpd.hpp"
#include "tenbeam/rng.hpp"
#include "tenbeam/vtpar.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace tenbeam;

Tensor3 synthetic_tensor(Index i, Index j, Index p, Index rank, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CpdFactors f;
    f.a = randn_complex(i, rank, rng);
    f.b = randn_complex(j, rank, rng);
    f.c = randn_complex(p, rank, rng);
    return reconstruct(f);
}

DigitalPrecoderStack synthetic_stack(Index n, Index n_rf, Index k, Index ns,
                                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    RVec phases(n_rf);
    for (Index i = 0; i < n_rf; ++i)
        phases(i) = u(rng);
    const CMat analog = vandermonde_matrix(phases, n);
    std::vector<CMat> bands;
    bands.reserve(static_cast<std::size_t>(k));
    for (Index b = 0; b < k; ++b) {
        CMat m = analog * randn_complex(n_rf, ns, rng);
        for (Index c = 0; c < ns; ++c)
            m.col(c) /= m.col(c).norm();
        bands.push_back(std::move(m));
    }
    return {std::move(bands), StackRole::precoder};
}

void bm_tals_paper_shape(benchmark::State& state) {
    const Tensor3 t = synthetic_tensor(31, 60, 2, 2, 7);
    TalsOptions opts;
    opts.restarts = 1;
    for (auto _ : state) {
        auto [factors, report] = tals(t, 2, opts);
        benchmark::DoNotOptimize(report.final_residual);
    }
}
BENCHMARK(bm_tals_paper_shape);

void bm_assemble(benchmark::State& state) {
    const DigitalPrecoderStack stack = synthetic_stack(32, 2, 30, 1, 11);
    AssembleOptions opts;
    opts.tals.restarts = 1;
    for (auto _ : state) {
        const HybridFactorization hf = assemble(stack, 2, opts);
        benchmark::DoNotOptimize(hf.phases);
    }
}
BENCHMARK(bm_assemble);

void bm_somp(benchmark::State& state) {
    const DigitalPrecoderStack stack = synthetic_stack(32, 2, 30, 1, 13);
    const Codebook cb = dft_codebook(32, 32);
    for (auto _ : state) {
        const SompResult r = somp(stack, cb, 2);
        benchmark::DoNotOptimize(r.selected);
    }
}
BENCHMARK(bm_somp);

void bm_pe_altmin(benchmark::State& state) {
    const DigitalPrecoderStack stack = synthetic_stack(32, 2, 30, 1, 17);
    for (auto _ : state) {
        const PeResult r = pe_altmin(stack, 2);
        benchmark::DoNotOptimize(r.iterations);
    }
}
BENCHMARK(bm_pe_altmin);

void bm_generate_channel(benchmark::State& state) {
    ChannelConfig cfg;
    cfg.seed = 23;
    for (auto _ : state) {
        const ChannelEnsemble ens = generate_channel(cfg);
        benchmark::DoNotOptimize(ens.per_band.size());
    }
}
BENCHMARK(bm_generate_channel);

} // namespace

BENCHMARK_MAIN();
