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

#include "tenbeam/channel.hpp"

#include "tenbeam/rng.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "ensemble files are little-endian; big-endian hosts are unsupported");

namespace tenbeam {

namespace {

using nlohmann::json;

double laplacian(double scale, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double u = u01(rng) - 0.5;
    while (std::abs(u) >= 0.5) // excludes the log(0) endpoint
        u = u01(rng) - 0.5;
    const double sign = u < 0.0 ? -1.0 : 1.0;
    return -scale * sign * std::log(1.0 - 2.0 * std::abs(u));
}

CVec steering(double angle, Index n) {
    CVec a(n);
    const double step = std::numbers::pi * std::sin(angle);
    for (Index i = 0; i < n; ++i)
        a(i) = std::polar(1.0, static_cast<double>(i) * step);
    return a;
}

// Expected per-cluster band energy factor E[e^{-tau/T} |mean_q e^{-j2*pi*q*scs*tau}|^2]
// for tau ~ Exp(mean T), in closed form. The e^{-tau/T} weight is the
// Saleh-Valenzuela cluster power decay; the squared mean captures the
// shrinkage caused by averaging subband_size decorrelating subcarrier
// phasors. Per difference d, E[e^{-tau/T} cos(2*pi*d*scs*tau)] = 2/(4 + w^2).
double band_energy_factor(Index subband_size, double scs, double delay_spread) {
    const double s = static_cast<double>(subband_size);
    double acc = 0.0;
    for (Index d = -(subband_size - 1); d < subband_size; ++d) {
        const double w = 2.0 * std::numbers::pi * static_cast<double>(d) * scs * delay_spread;
        acc += (s - static_cast<double>(d < 0 ? -d : d)) * 2.0 / (4.0 + w * w);
    }
    return acc / (s * s);
}

json config_to_json(const ChannelConfig& c) {
    return json{{"n_tx", c.n_tx},
                {"n_rx", c.n_rx},
                {"n_subbands", c.n_subbands},
                {"subband_size", c.subband_size},
                {"n_clusters", c.n_clusters},
                {"n_rays", c.n_rays},
                {"delay_spread_s", c.delay_spread_s},
                {"subcarrier_spacing_hz", c.subcarrier_spacing_hz},
                {"angle_spread_rad", c.angle_spread_rad},
                {"seed", c.seed},
                {"snr_db", c.snr_db},
                {"power_budget", c.power_budget}};
}

ChannelConfig config_from_json(const json& j) {
    ChannelConfig c;
    c.n_tx = j.at("n_tx").get<Index>();
    c.n_rx = j.at("n_rx").get<Index>();
    c.n_subbands = j.at("n_subbands").get<Index>();
    c.subband_size = j.at("subband_size").get<Index>();
    c.n_clusters = j.at("n_clusters").get<Index>();
    c.n_rays = j.at("n_rays").get<Index>();
    c.delay_spread_s = j.at("delay_spread_s").get<double>();
    c.subcarrier_spacing_hz = j.at("subcarrier_spacing_hz").get<double>();
    c.angle_spread_rad = j.at("angle_spread_rad").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.snr_db = j.at("snr_db").get<double>();
    c.power_budget = j.at("power_budget").get<double>();
    return c;
}

} // namespace

void ChannelConfig::validate() const {
    if (n_tx < 1 || n_rx < 1)
        throw std::invalid_argument("ChannelConfig: antenna counts must be >= 1");
    if (n_subbands < 1)
        throw std::invalid_argument("ChannelConfig: n_subbands must be >= 1");
    if (subband_size < 1)
        throw std::invalid_argument("ChannelConfig: subband_size must be >= 1");
    if (n_clusters < 1 || n_rays < 1)
        throw std::invalid_argument("ChannelConfig: cluster and ray counts must be >= 1");
    if (!(delay_spread_s > 0.0))
        throw std::invalid_argument("ChannelConfig: delay_spread_s must be > 0");
    if (!(subcarrier_spacing_hz > 0.0))
        throw std::invalid_argument("ChannelConfig: subcarrier_spacing_hz must be > 0");
    if (angle_spread_rad < 0.0)
        throw std::invalid_argument("ChannelConfig: angle_spread_rad must be >= 0");
    if (!(power_budget > 0.0))
        throw std::invalid_argument("ChannelConfig: power_budget must be > 0");
    if (!std::isfinite(snr_db))
        throw std::invalid_argument("ChannelConfig: snr_db must be finite");
}

ChannelEnsemble generate_channel(const ChannelConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::exponential_distribution<double> delay(1.0 / cfg.delay_spread_s);
    std::uniform_real_distribution<double> center(-std::numbers::pi / 2.0,
                                                  std::numbers::pi / 2.0);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));

    // One frequency-flat aggregate per cluster; the cluster delay is the only
    // frequency-dependent quantity, so subcarrier responses are cheap scalars.
    // Cluster power follows the Saleh-Valenzuela exponential decay
    // e^{-tau/delay_spread}, applied as a deterministic scale on the drawn
    // unit-variance ray gains.
    std::vector<double> delays(static_cast<std::size_t>(cfg.n_clusters));
    std::vector<CMat> aggregates(static_cast<std::size_t>(cfg.n_clusters));
    for (Index c = 0; c < cfg.n_clusters; ++c) {
        delays[static_cast<std::size_t>(c)] = delay(rng);
        const double aod_center = center(rng);
        const double aoa_center = center(rng);
        CMat g = CMat::Zero(cfg.n_rx, cfg.n_tx);
        for (Index r = 0; r < cfg.n_rays; ++r) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            const double aod = aod_center + laplacian(cfg.angle_spread_rad, rng);
            const double aoa = aoa_center + laplacian(cfg.angle_spread_rad, rng);
            g += Complex(re, im) *
                 (steering(aoa, cfg.n_rx) * steering(aod, cfg.n_tx).adjoint());
        }
        g *= std::sqrt(std::exp(-delays[static_cast<std::size_t>(c)] / cfg.delay_spread_s));
        aggregates[static_cast<std::size_t>(c)] = std::move(g);
    }

    const double energy = band_energy_factor(cfg.subband_size,
                                             cfg.subcarrier_spacing_hz,
                                             cfg.delay_spread_s);
    const double gamma =
        1.0 / std::sqrt(static_cast<double>(cfg.n_clusters * cfg.n_rays) * energy);

    ChannelEnsemble ens;
    ens.config = cfg;
    ens.noise_variance = cfg.power_budget * std::pow(10.0, -cfg.snr_db / 10.0);
    ens.per_band.resize(static_cast<std::size_t>(cfg.n_subbands));
    for (Index k = 0; k < cfg.n_subbands; ++k) {
        CMat h = CMat::Zero(cfg.n_rx, cfg.n_tx);
        for (Index c = 0; c < cfg.n_clusters; ++c) {
            Complex avg(0.0, 0.0);
            for (Index s = 0; s < cfg.subband_size; ++s) {
                const double f = static_cast<double>(k * cfg.subband_size + s) *
                                 cfg.subcarrier_spacing_hz;
                avg += std::polar(1.0, -2.0 * std::numbers::pi * f *
                                           delays[static_cast<std::size_t>(c)]);
            }
            avg /= static_cast<double>(cfg.subband_size);
            h += avg * aggregates[static_cast<std::size_t>(c)];
        }
        ens.per_band[static_cast<std::size_t>(k)] = gamma * h;
    }
    return ens;
}

DigitalPrecoderStack optimal_precoders(const ChannelEnsemble& ens, Index n_streams) {
    if (ens.per_band.empty())
        throw std::invalid_argument("optimal_precoders: empty ensemble");
    const Index n_rx = ens.per_band.front().rows();
    const Index n_tx = ens.per_band.front().cols();
    if (n_streams < 1 || n_streams > std::min(n_rx, n_tx))
        throw std::invalid_argument(
            "optimal_precoders: n_streams must be in [1, min(n_rx, n_tx)]");
    std::vector<CMat> bands;
    bands.reserve(ens.per_band.size());
    for (const CMat& h : ens.per_band)
        bands.push_back(svd(h).v.leftCols(n_streams));
    return {std::move(bands), StackRole::precoder};
}

DigitalPrecoderStack wmmse_combiners(const ChannelEnsemble& ens,
                                     const DigitalPrecoderStack& precoders) {
    if (ens.per_band.size() != static_cast<std::size_t>(precoders.n_bands()))
        throw std::invalid_argument("wmmse_combiners: band counts differ");
    if (!(ens.noise_variance > 0.0))
        throw std::invalid_argument("wmmse_combiners: noise variance must be > 0");
    const Index ns = precoders.n_streams();
    std::vector<CMat> combiners;
    combiners.reserve(ens.per_band.size());
    for (Index k = 0; k < precoders.n_bands(); ++k) {
        const CMat heff = ens.per_band[static_cast<std::size_t>(k)] * precoders.band(k);
        const CMat gram = heff.adjoint() * heff +
                          ens.noise_variance * CMat::Identity(ns, ns);
        const Eigen::LLT<CMat> llt(gram);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("wmmse_combiners: regularized Gram not positive definite");
        combiners.push_back(llt.solve(heff.adjoint()).adjoint());
    }
    return {std::move(combiners), StackRole::combiner};
}

void save_ensemble(const std::filesystem::path& path, const ChannelEnsemble& ens) {
    if (ens.per_band.empty())
        throw std::invalid_argument("save_ensemble: empty ensemble");
    const Index n_rx = ens.per_band.front().rows();
    const Index n_tx = ens.per_band.front().cols();
    json header{{"format", "tenbeam-ensemble"},
                {"version", 1},
                {"n_rx", n_rx},
                {"n_tx", n_tx},
                {"n_bands", ens.per_band.size()},
                {"noise_variance", ens.noise_variance},
                {"config", config_to_json(ens.config)}};

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("save_ensemble: cannot open " + path.string());
    out << header.dump() << '\n';
    for (const CMat& h : ens.per_band)
        for (Index i = 0; i < n_rx; ++i)
            for (Index j = 0; j < n_tx; ++j) {
                const double re = h(i, j).real();
                const double im = h(i, j).imag();
                out.write(reinterpret_cast<const char*>(&re), sizeof re);
                out.write(reinterpret_cast<const char*>(&im), sizeof im);
            }
    if (!out)
        throw std::runtime_error("save_ensemble: write failed for " + path.string());
}

ChannelEnsemble load_ensemble(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("load_ensemble: cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("load_ensemble: missing header line");

    json header;
    try {
        header = json::parse(line);
    } catch (const json::exception& e) {
        throw std::runtime_error("load_ensemble: bad header: " + std::string(e.what()));
    }
    if (header.value("format", "") != "tenbeam-ensemble")
        throw std::runtime_error("load_ensemble: not a tenbeam ensemble file");

    ChannelEnsemble ens;
    const Index n_rx = header.at("n_rx").get<Index>();
    const Index n_tx = header.at("n_tx").get<Index>();
    const Index n_bands = header.at("n_bands").get<Index>();
    if (n_rx < 1 || n_tx < 1 || n_bands < 1)
        throw std::runtime_error("load_ensemble: invalid dims in header");
    ens.noise_variance = header.at("noise_variance").get<double>();
    ens.config = config_from_json(header.at("config"));

    ens.per_band.resize(static_cast<std::size_t>(n_bands));
    for (CMat& h : ens.per_band) {
        h.resize(n_rx, n_tx);
        for (Index i = 0; i < n_rx; ++i)
            for (Index j = 0; j < n_tx; ++j) {
                double re = 0.0, im = 0.0;
                in.read(reinterpret_cast<char*>(&re), sizeof re);
                in.read(reinterpret_cast<char*>(&im), sizeof im);
                if (!in)
                    throw std::runtime_error("load_ensemble: truncated payload");
                h(i, j) = Complex(re, im);
            }
    }
    return ens;
}

} // namespace tenbeam
