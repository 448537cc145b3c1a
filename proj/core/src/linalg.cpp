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

#include "tenbeam/linalg.hpp"

#include <cmath>

namespace tenbeam {

SvdResult svd(const CMat& m) {
    if (m.rows() < 1 || m.cols() < 1)
        throw std::invalid_argument("svd: matrix must be non-empty");
    if (!m.allFinite())
        throw std::invalid_argument("svd: matrix has non-finite entries");

    Eigen::JacobiSVD<CMat> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() != Eigen::Success) {
        const CMat rec =
            dec.matrixU() * dec.singularValues().asDiagonal() * dec.matrixV().adjoint();
        const double denom = m.norm();
        const double res = denom > 0.0 ? (m - rec).norm() / denom : (m - rec).norm();
        throw SvdError("svd: did not converge within the iteration cap", res);
    }

    SvdResult out{dec.matrixU(), dec.singularValues(), dec.matrixV()};
    for (Index j = 0; j < out.v.cols(); ++j) {
        for (Index i = 0; i < out.v.rows(); ++i) {
            const Complex z = out.v(i, j);
            if (std::abs(z) > 1e-12) {
                const Complex c = std::conj(z) / std::abs(z);
                out.v.col(j) *= c;
                out.u.col(j) *= c; // u*c * s * (v*c)^H == u*s*v^H, |c| = 1
                break;
            }
        }
    }
    return out;
}

CMat pseudo_inverse(const CMat& m, double rcond) {
    if (rcond < 0.0)
        throw std::invalid_argument("pseudo_inverse: rcond must be non-negative");
    const SvdResult dec = svd(m);
    const double cutoff = rcond * dec.singular_values(0);
    RVec inv = RVec::Zero(dec.singular_values.size());
    for (Index i = 0; i < inv.size(); ++i)
        if (dec.singular_values(i) > cutoff && dec.singular_values(i) > 0.0)
            inv(i) = 1.0 / dec.singular_values(i);
    return dec.v * inv.asDiagonal() * dec.u.adjoint();
}

CMat khatri_rao(const CMat& a, const CMat& b) {
    if (a.cols() != b.cols())
        throw std::invalid_argument("khatri_rao: column counts differ");
    CMat out(a.rows() * b.rows(), a.cols());
    for (Index f = 0; f < a.cols(); ++f)
        for (Index i = 0; i < a.rows(); ++i)
            out.block(i * b.rows(), f, b.rows(), 1) = a(i, f) * b.col(f);
    return out;
}

CMat least_squares(const CMat& a, const CMat& y) {
    if (a.rows() != y.rows())
        throw std::invalid_argument("least_squares: row counts of a and y differ");
    Eigen::CompleteOrthogonalDecomposition<CMat> cod(a);
    return cod.solve(y);
}

CMat vandermonde_matrix(const RVec& phases, Index n_rows) {
    if (n_rows < 1)
        throw std::invalid_argument("vandermonde_matrix: need at least one row");
    CMat out(n_rows, phases.size());
    for (Index i = 0; i < phases.size(); ++i)
        for (Index n = 0; n < n_rows; ++n)
            out(n, i) = std::polar(1.0, static_cast<double>(n) * phases(i));
    return out;
}

} // namespace tenbeam
