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

#include "tenbeam/cpd.hpp"

#include "tenbeam/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace tenbeam {

namespace {

void check_factor_dims(const CpdFactors& f) {
    if (f.a.cols() < 1)
        throw std::invalid_argument("CpdFactors: rank must be >= 1");
    if (f.a.cols() != f.b.cols() || f.a.cols() != f.c.cols())
        throw std::invalid_argument("CpdFactors: factor column counts differ");
}

CpdFactors random_init(const Tensor3& t, Index rank, std::mt19937_64& rng) {
    CpdFactors f;
    f.a = randn_complex(t.rows(), rank, rng);
    f.b = randn_complex(t.cols(), rank, rng);
    f.c = randn_complex(t.slabs(), rank, rng);
    return f;
}

// Closed-form start for two-slab tensors: with slab0 = A*B^T and
// slab1 = A*D*B^T, the compressed pencil U^H*slab1*V*Sigma^{-1} (from the
// rank-truncated SVD of slab0) has eigenvalues diag(D) and eigenvectors that
// expose A and B. Exact for noiseless rank-F two-slab models; ALS sweeps then
// only need to polish. Declined when slab0 is effectively rank-deficient.
std::optional<CpdFactors> pencil_init(const Tensor3& t, Index rank) {
    if (t.slabs() != 2 || rank > std::min(t.rows(), t.cols()))
        return std::nullopt;
    const SvdResult s0 = svd(CMat(t.slab(0)));
    if (!(s0.singular_values(rank - 1) > 1e-13 * s0.singular_values(0)) ||
        !(s0.singular_values(rank - 1) > 0.0))
        return std::nullopt;
    const CMat u = s0.u.leftCols(rank);
    const CMat v = s0.v.leftCols(rank);
    const RVec sig = s0.singular_values.head(rank);
    const CMat pencil = u.adjoint() * t.slab(1) * v * sig.cwiseInverse().asDiagonal();
    Eigen::ComplexEigenSolver<CMat> eig(pencil);
    if (eig.info() != Eigen::Success)
        return std::nullopt;
    const Eigen::FullPivLU<CMat> lu(eig.eigenvectors());
    if (!lu.isInvertible())
        return std::nullopt;
    CpdFactors f;
    f.a = u * eig.eigenvectors();
    f.b = lu.solve(sig.asDiagonal() * v.adjoint()).transpose();
    f.c = CMat(2, rank);
    f.c.row(0).setOnes();
    f.c.row(1) = eig.eigenvalues().transpose();
    if (!f.a.allFinite() || !f.b.allFinite() || !f.c.allFinite())
        return std::nullopt;
    return f;
}

// Snaps each column of a to the closest (in least squares) scaled Vandermonde
// column. The optimal generator phase maximizes the periodogram
// |sum_n a_n e^{-j phi n}|^2; found by a dense grid scan plus ternary
// refinement, which is exact enough at these column lengths.
void snap_to_vandermonde(CMat& a) {
    const Index n_rows = a.rows();
    const auto periodogram = [&](const CVec& col, double phi) {
        // Incremental rotation: one sincos per call instead of one per row.
        const Complex w = std::polar(1.0, -phi);
        Complex rot(1.0, 0.0);
        Complex acc(0.0, 0.0);
        for (Index n = 0; n < n_rows; ++n) {
            acc += col(n) * rot;
            rot *= w;
        }
        return std::norm(acc);
    };
    const int grid = std::max<int>(256, 8 * static_cast<int>(n_rows));
    for (Index f = 0; f < a.cols(); ++f) {
        const CVec col = a.col(f);
        if (col.norm() <= 1e-14)
            continue;
        double best_phi = 0.0;
        double best_val = -1.0;
        for (int m = 0; m < grid; ++m) {
            const double phi = -std::numbers::pi + 2.0 * std::numbers::pi * m / grid;
            const double val = periodogram(col, phi);
            if (val > best_val) {
                best_val = val;
                best_phi = phi;
            }
        }
        double lo = best_phi - 2.0 * std::numbers::pi / grid;
        double hi = best_phi + 2.0 * std::numbers::pi / grid;
        for (int it = 0; it < 60; ++it) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            if (periodogram(col, m1) < periodogram(col, m2))
                lo = m1;
            else
                hi = m2;
        }
        const double phi = 0.5 * (lo + hi);
        CVec v(n_rows);
        for (Index n = 0; n < n_rows; ++n)
            v(n) = std::polar(1.0, static_cast<double>(n) * phi);
        const Complex scale = v.dot(col) / static_cast<double>(n_rows);
        a.col(f) = scale * v;
    }
}

struct SweepOutcome {
    CpdFactors factors;
    TalsReport report;
};

SweepOutcome run_sweeps(const Tensor3& t, const TalsOptions& opts, CpdFactors f) {
    const CMat t1t = unfold(t, 1).transpose();
    const CMat t2t = unfold(t, 2).transpose();
    const CMat t3t = unfold(t, 3).transpose();

    TalsReport rep;
    double prev = residual(t, f);
    for (int it = 0; it < opts.max_iters; ++it) {
        for (int step : opts.update_order) {
            switch (step) {
            case 0:
                f.a = least_squares(khatri_rao(f.c, f.b), t1t).transpose();
                // Projected ALS: constrain A right after its own update so the
                // subsequent B and C solves adapt to the structured factor.
                if (opts.vandermonde_projection)
                    snap_to_vandermonde(f.a);
                break;
            case 1: f.b = least_squares(khatri_rao(f.c, f.a), t2t).transpose(); break;
            case 2: f.c = least_squares(khatri_rao(f.b, f.a), t3t).transpose(); break;
            }
        }

        const double res = residual(t, f);
        rep.residual_history.push_back(res);
        rep.iterations = it + 1;
        if (res <= opts.abs_tol ||
            std::abs(prev - res) <= opts.rel_tol * std::max(res, opts.abs_tol)) {
            rep.converged = true;
            prev = res;
            break;
        }
        prev = res;
    }
    rep.final_residual = rep.residual_history.empty() ? prev : rep.residual_history.back();
    return {std::move(f), std::move(rep)};
}

} // namespace

Tensor3 reconstruct(const CpdFactors& f) {
    check_factor_dims(f);
    Tensor3 t(f.a.rows(), f.b.rows(), f.c.rows());
    for (Index p = 0; p < t.slabs(); ++p)
        t.slab(p) = f.a * f.c.row(p).asDiagonal() * f.b.transpose();
    return t;
}

double residual(const Tensor3& t, const CpdFactors& f) {
    const Tensor3 model = reconstruct(f);
    if (model.rows() != t.rows() || model.cols() != t.cols() || model.slabs() != t.slabs())
        throw std::invalid_argument("residual: factor dims do not match the tensor");
    double err2 = 0.0;
    for (Index p = 0; p < t.slabs(); ++p)
        err2 += (t.slab(p) - model.slab(p)).squaredNorm();
    const double err = std::sqrt(err2);
    const double denom = t.norm();
    return denom > 0.0 ? err / denom : err;
}

std::pair<CpdFactors, TalsReport> tals(const Tensor3& t, Index rank,
                                       const TalsOptions& opts) {
    if (rank < 1)
        throw std::invalid_argument("tals: rank must be >= 1");
    if (!t.all_finite())
        throw std::invalid_argument("tals: tensor has non-finite entries");
    if (opts.max_iters < 1)
        throw std::invalid_argument("tals: max_iters must be >= 1");
    if (opts.restarts < 1)
        throw std::invalid_argument("tals: restarts must be >= 1");
    {
        std::array<int, 3> sorted = opts.update_order;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != std::array<int, 3>{0, 1, 2})
            throw std::invalid_argument("tals: update_order must be a permutation of {0,1,2}");
    }

    std::vector<std::string> warnings;
    if (rank > t.rows() * t.cols())
        warnings.push_back("rank exceeds rows*cols: the third-mode coefficient matrix "
                           "cannot have full column rank, fit is not identifiable");

    SweepOutcome best;
    if (opts.init) {
        const CpdFactors& f0 = *opts.init;
        check_factor_dims(f0);
        if (f0.rank() != rank || f0.a.rows() != t.rows() || f0.b.rows() != t.cols() ||
            f0.c.rows() != t.slabs())
            throw std::invalid_argument("tals: init factor dims do not match tensor/rank");
        best = run_sweeps(t, opts, f0);
        best.report.best_restart = 0;
    } else {
        const int restarts = opts.restarts;
        const std::optional<CpdFactors> structured = pencil_init(t, rank);
        bool have = false;
        for (int s = 0; s < restarts; ++s) {
            CpdFactors f0;
            if (s == 0 && structured) {
                f0 = *structured;
            } else {
                std::mt19937_64 rng(
                    derive_seed(opts.seed, static_cast<std::uint64_t>(s)));
                f0 = random_init(t, rank, rng);
            }
            SweepOutcome out = run_sweeps(t, opts, std::move(f0));
            if (!have || out.report.final_residual < best.report.final_residual) {
                best = std::move(out);
                best.report.best_restart = s;
                have = true;
            }
        }
    }
    best.report.warnings.insert(best.report.warnings.begin(), warnings.begin(),
                                warnings.end());
    return {std::move(best.factors), std::move(best.report)};
}

} // namespace tenbeam
