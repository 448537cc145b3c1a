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
// Tests for the evaluation kit: log-det spectral efficiency against scalar
// and eigen-domain closed forms, invariances, dominance of the unconstrained
// digital precoder, factorization error, feedback parameter counts, and
// report serialization.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tenbeam/channel.hpp"
#include "tenbeam/evalkit.hpp"
#include "tenbeam/linalg.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace {

using tenbeam::CMat;
using tenbeam::Complex;
using tenbeam::Index;

CMat random_cmat(Index rows, Index cols, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    CMat m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            m(i, j) = Complex(dist(rng), dist(rng));
    return m;
}

CMat random_unit_modulus(Index rows, Index cols, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    CMat m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            m(i, j) = std::polar(1.0, u(rng));
    return m;
}

const CMat kOne = CMat::Ones(1, 1);

} // namespace

TEST_CASE("spectral_efficiency: scalar channel closed form") {
    // H = F = W = 1, alpha = sigma^2 = 1: R = log2(1 + 1) = 1 bit/s/Hz.
    CHECK(tenbeam::spectral_efficiency(kOne, kOne, kOne, kOne, kOne, 1.0, 1.0, 1) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // Quadrupling the power budget adds log2(5)/log2(2) - 1 relative to that.
    CHECK(tenbeam::spectral_efficiency(kOne, kOne, kOne, kOne, kOne, 4.0, 1.0, 1) ==
          doctest::Approx(std::log2(5.0)).epsilon(1e-12));
}

TEST_CASE("spectral_efficiency: zero channel carries nothing") {
    const CMat h = CMat::Zero(2, 3);
    const CMat f = CMat::Identity(3, 1);
    const CMat w = CMat::Identity(2, 1);
    CHECK(tenbeam::spectral_efficiency_digital(h, f, w, 1.0, 1.0, 1) ==
          doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("spectral_efficiency: eigen-domain closed form for one stream") {
    const CMat h = random_cmat(4, 6, 3u);
    const auto s = tenbeam::svd(h);
    const CMat f = s.v.col(0);
    const CMat w = s.u.col(0);
    const double alpha = 2.0, sigma2 = 0.5;
    const double sig = s.singular_values(0);
    // Matched rank-1 endpoints reduce the log-det to a scalar SNR.
    const double expect = std::log2(1.0 + alpha * sig * sig / sigma2);
    CHECK(tenbeam::spectral_efficiency_digital(h, f, w, alpha, sigma2, 1) ==
          doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("spectral_efficiency: hybrid and digital paths agree for identity analog") {
    const CMat h = random_cmat(4, 6, 5u);
    const CMat f = random_cmat(6, 2, 6u);
    const CMat w = random_cmat(4, 2, 7u);
    const double hybrid = tenbeam::spectral_efficiency(
        h, CMat::Identity(6, 6), f, CMat::Identity(4, 4), w, 1.5, 0.7, 2);
    const double digital = tenbeam::spectral_efficiency_digital(h, f, w, 1.5, 0.7, 2);
    CHECK(hybrid == doctest::Approx(digital).epsilon(1e-12));
}

TEST_CASE("spectral_efficiency: invariant under unitary baseband rotation at the "
          "receiver") {
    const CMat h = random_cmat(5, 7, 11u);
    const CMat f = random_cmat(7, 2, 12u);
    const CMat w = random_cmat(5, 2, 13u);
    const double base = tenbeam::spectral_efficiency_digital(h, f, w, 1.0, 0.3, 2);

    // A rotation of the combiner columns re-parameterizes the same subspace.
    const double c = std::cos(0.6), s = std::sin(0.6);
    CMat q(2, 2);
    q << Complex(c, 0), Complex(-s, 0), Complex(s, 0), Complex(c, 0);
    const double rotated =
        tenbeam::spectral_efficiency_digital(h, f, CMat(w * q), 1.0, 0.3, 2);
    CHECK(std::abs(rotated - base) <= 1e-9);
}

TEST_CASE("spectral_efficiency: the unconstrained digital precoder dominates "
          "hybrid factorizations for one stream") {
    for (unsigned seed = 1; seed <= 10; ++seed) {
        tenbeam::ChannelConfig cfg;
        cfg.n_tx = 8;
        cfg.n_rx = 4;
        cfg.n_subbands = 3;
        cfg.subband_size = 4;
        cfg.seed = seed;
        const auto ens = tenbeam::generate_channel(cfg);
        const auto fopt = tenbeam::optimal_precoders(ens, 1);
        const auto wopt = tenbeam::wmmse_combiners(ens, fopt);

        for (Index k = 0; k < fopt.n_bands(); ++k) {
            const CMat& h = ens.per_band[static_cast<std::size_t>(k)];
            const double digital = tenbeam::spectral_efficiency_digital(
                h, fopt.band(k), wopt.band(k), 1.0, ens.noise_variance, 1);

            // Any unit-modulus analog stage with a power-matched baseband.
            const CMat a_tx = random_unit_modulus(8, 2, seed * 100 + (unsigned)k);
            CMat b_tx = random_cmat(2, 1, seed * 100 + 50 + (unsigned)k);
            b_tx /= (a_tx * b_tx).norm();  // ||F_RF F_BB|| = sqrt(n_s) = 1
            const CMat a_rx = random_unit_modulus(4, 2, seed * 100 + 70 + (unsigned)k);
            const CMat b_rx = random_cmat(2, 1, seed * 100 + 90 + (unsigned)k);
            const double hybrid = tenbeam::spectral_efficiency(
                h, a_tx, b_tx, a_rx, b_rx, 1.0, ens.noise_variance, 1);
            CHECK(digital >= hybrid - 1e-9);
        }
    }
}

TEST_CASE("spectral_efficiency: nearly parallel combiner columns are rejected") {
    const CMat h = random_cmat(4, 6, 21u);
    const CMat f = random_cmat(6, 2, 22u);
    CMat w(4, 2);
    w.col(0) = random_cmat(4, 1, 23u);
    w.col(1) = w.col(0) * Complex(1.0 + 1e-14, 0.0);  // numerically dependent
    CHECK_THROWS_AS(tenbeam::spectral_efficiency_digital(h, f, w, 1.0, 1.0, 2),
                    tenbeam::IllConditionedCombiner);
}

TEST_CASE("spectral_efficiency: validation") {
    const CMat h = random_cmat(4, 6, 31u);
    const CMat f = random_cmat(6, 2, 32u);
    const CMat w = random_cmat(4, 2, 33u);
    CHECK_THROWS_AS(tenbeam::spectral_efficiency_digital(h, f, w, 1.0, 1.0, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(tenbeam::spectral_efficiency_digital(h, f, w, 0.0, 1.0, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(tenbeam::spectral_efficiency_digital(h, f, w, 1.0, -1.0, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        tenbeam::spectral_efficiency_digital(h, random_cmat(5, 2, 34u), w, 1.0, 1.0, 2),
        std::invalid_argument);
    CHECK_THROWS_AS(tenbeam::spectral_efficiency(h, CMat::Identity(6, 6),
                                                 random_cmat(5, 2, 35u),
                                                 CMat::Identity(4, 4), w, 1.0, 1.0, 2),
                    std::invalid_argument);
}

TEST_CASE("factorization_nmse: hand oracle and concept overload") {
    CMat target(2, 1);
    target << Complex(1, 0), Complex(0, 0);
    tenbeam::DigitalPrecoderStack st({target}, tenbeam::StackRole::combiner);

    const CMat analog = CMat::Identity(2, 2);
    std::vector<CMat> bb(1);
    bb[0] = CMat::Zero(2, 1);
    bb[0](0, 0) = Complex(0.5, 0.0);
    // Product is [0.5, 0]: squared error 0.25 against squared norm 1.
    const auto direct = tenbeam::factorization_nmse(st, analog, bb);
    REQUIRE(direct.size() == 1);
    CHECK(direct[0] == doctest::Approx(0.25).epsilon(1e-14));

    struct Hf {
        CMat analog;
        std::vector<CMat> baseband;
    } hf{analog, bb};
    const auto via_concept = tenbeam::factorization_nmse(st, hf);
    CHECK(via_concept[0] == doctest::Approx(direct[0]).epsilon(1e-15));

    std::vector<CMat> wrong(2, bb[0]);
    CHECK_THROWS_AS(tenbeam::factorization_nmse(st, analog, wrong),
                    std::invalid_argument);
}

TEST_CASE("feedback_overhead: parameter counts per scheme") {
    using tenbeam::FeedbackScheme;
    CHECK(tenbeam::feedback_overhead(FeedbackScheme::unit_modulus, 32, 2) == 64);
    CHECK(tenbeam::feedback_overhead(FeedbackScheme::codebook, 32, 2) == 2);
    CHECK(tenbeam::feedback_overhead(FeedbackScheme::vandermonde, 32, 2) == 2);
    // The full-matrix scheme scales with the array, the others do not.
    CHECK(tenbeam::feedback_overhead(FeedbackScheme::unit_modulus, 1, 3) == 3);
    CHECK(tenbeam::feedback_overhead(FeedbackScheme::codebook, 256, 4) == 4);
    CHECK_THROWS_AS(tenbeam::feedback_overhead(FeedbackScheme::codebook, 0, 2),
                    std::invalid_argument);
}

TEST_CASE("EvalReport: CSV and JSON serialization") {
    tenbeam::EvalReport rep;
    rep.per_band_rate = {1.0, 3.0};
    rep.mean_rate = 2.0;
    rep.per_band_nmse = {0.5, 0.25};
    rep.overhead = {{"analog", 64}, {"generator", 2}};
    rep.runtime_ms = 12.5;

    CHECK(tenbeam::EvalReport::csv_header() ==
          "method,mean_rate,mean_nmse,overhead,runtime_ms");
    CHECK(rep.csv_row("vtpar") == "vtpar,2,0.375,66,12.5");

    const auto j = nlohmann::json::parse(rep.json_record("vtpar"));
    CHECK(j.at("method") == "vtpar");
    CHECK(j.at("mean_rate").get<double>() == doctest::Approx(2.0));
    CHECK(j.at("per_band_rate").size() == 2);
    CHECK(j.at("overhead").at("analog").get<long>() == 64);
    CHECK(j.at("runtime_ms").get<double>() == doctest::Approx(12.5));
}
