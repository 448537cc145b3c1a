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

#ifndef TENBEAM_LINALG_HPP
#define TENBEAM_LINALG_HPP

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace tenbeam {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;

/// SVD did not converge; carries the residual of the last iterate.
struct SvdError : std::runtime_error {
    explicit SvdError(const std::string& what, double residual_)
        : std::runtime_error(what), residual(residual_) {}
    double residual;
};

/// Thin SVD m = u * diag(singular_values) * v^H with orthonormal u, v columns
/// and non-increasing singular values.
struct SvdResult {
    CMat u;
    RVec singular_values;
    CMat v;
};

// Thin SVD with a deterministic phase gauge: the first nonzero entry of each
// column of v is made real and positive (u is rotated accordingly), so repeated
// runs and downstream factorization targets are reproducible.
SvdResult svd(const CMat& m);

// Moore-Penrose inverse via SVD; singular values at or below rcond * s_max are
// truncated to zero.
CMat pseudo_inverse(const CMat& m, double rcond = 1e-12);

// Column-wise Kronecker product: column f of the result is kron(a.col(f), b.col(f)),
// with kron(x, y)[i * y.size() + j] = x[i] * y[j].
CMat khatri_rao(const CMat& a, const CMat& b);

// Minimum-norm minimizer x of ||a * x - y||_F, computed through a rank-revealing
// orthogonal factorization (no normal equations).
CMat least_squares(const CMat& a, const CMat& y);

// [1, e^{j*phi}, ..., e^{j*(n_rows-1)*phi}]^T per column; the steering-vector
// structure of a half-wavelength uniform linear array.
CMat vandermonde_matrix(const RVec& phases, Index n_rows);

} // namespace tenbeam

#endif // TENBEAM_LINALG_HPP
