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

#ifndef TENBEAM_TENSOR_HPP
#define TENBEAM_TENSOR_HPP

#include "tenbeam/linalg.hpp"

#include <span>
#include <vector>

namespace tenbeam {

/// Dense complex third-order tensor of dims (I, J, P), stored slab-major:
/// frontal slab p is the I x J slice, laid out column-major so that slab(p)
/// maps directly onto an Eigen matrix.
class Tensor3 {
  public:
    Tensor3(Index rows, Index cols, Index slabs);

    // Stacks P equally-sized I x J matrices as the frontal slabs.
    static Tensor3 from_slabs(std::span<const CMat> slabs);

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    Index slabs() const { return slabs_; }
    Index size() const { return rows_ * cols_ * slabs_; }

    Complex& operator()(Index i, Index j, Index p) { return data_[offset(i, j, p)]; }
    const Complex& operator()(Index i, Index j, Index p) const { return data_[offset(i, j, p)]; }

    Eigen::Map<CMat> slab(Index p);
    Eigen::Map<const CMat> slab(Index p) const;

    double norm() const;
    bool all_finite() const;

  private:
    Index offset(Index i, Index j, Index p) const { return p * rows_ * cols_ + j * rows_ + i; }

    Index rows_, cols_, slabs_;
    std::vector<Complex> data_;
};

// Mode-n matricization. The layout convention is fixed so that a tensor whose
// slab p equals A * Diag(C.row(p)) * B^T unfolds as
//   mode 1: A * khatri_rao(C, B)^T   (I x J*P, column p*J + j holds T(:, j, p))
//   mode 2: B * khatri_rao(C, A)^T   (J x I*P, column p*I + i holds T(i, :, p))
//   mode 3: C * khatri_rao(B, A)^T   (P x I*J, column j*I + i holds T(i, j, :))
CMat unfold(const Tensor3& t, int mode);

// Inverse of unfold for the same mode and target dims.
Tensor3 fold(const CMat& m, int mode, Index rows, Index cols, Index slabs);

} // namespace tenbeam

#endif // TENBEAM_TENSOR_HPP
