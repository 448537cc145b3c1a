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

#include "tenbeam/tensor.hpp"

namespace tenbeam {

Tensor3::Tensor3(Index rows, Index cols, Index slabs)
    : rows_(rows), cols_(cols), slabs_(slabs) {
    if (rows < 1 || cols < 1 || slabs < 1)
        throw std::invalid_argument("Tensor3: all dims must be >= 1");
    data_.assign(static_cast<std::size_t>(size()), Complex(0.0, 0.0));
}

Tensor3 Tensor3::from_slabs(std::span<const CMat> slabs) {
    if (slabs.empty())
        throw std::invalid_argument("Tensor3::from_slabs: need at least one slab");
    const Index rows = slabs.front().rows();
    const Index cols = slabs.front().cols();
    for (const CMat& s : slabs)
        if (s.rows() != rows || s.cols() != cols)
            throw std::invalid_argument("Tensor3::from_slabs: slab dims differ");
    Tensor3 t(rows, cols, static_cast<Index>(slabs.size()));
    for (Index p = 0; p < t.slabs(); ++p)
        t.slab(p) = slabs[static_cast<std::size_t>(p)];
    return t;
}

Eigen::Map<CMat> Tensor3::slab(Index p) {
    if (p < 0 || p >= slabs_)
        throw std::out_of_range("Tensor3::slab: index out of range");
    return {data_.data() + p * rows_ * cols_, rows_, cols_};
}

Eigen::Map<const CMat> Tensor3::slab(Index p) const {
    if (p < 0 || p >= slabs_)
        throw std::out_of_range("Tensor3::slab: index out of range");
    return {data_.data() + p * rows_ * cols_, rows_, cols_};
}

double Tensor3::norm() const {
    return Eigen::Map<const CVec>(data_.data(), size()).norm();
}

bool Tensor3::all_finite() const {
    return Eigen::Map<const CVec>(data_.data(), size()).allFinite();
}

CMat unfold(const Tensor3& t, int mode) {
    const Index i = t.rows(), j = t.cols(), p = t.slabs();
    switch (mode) {
    case 1: {
        CMat out(i, j * p);
        for (Index s = 0; s < p; ++s)
            out.middleCols(s * j, j) = t.slab(s);
        return out;
    }
    case 2: {
        CMat out(j, i * p);
        for (Index s = 0; s < p; ++s)
            out.middleCols(s * i, i) = t.slab(s).transpose();
        return out;
    }
    case 3: {
        CMat out(p, i * j);
        for (Index s = 0; s < p; ++s)
            out.row(s) = Eigen::Map<const Eigen::RowVectorXcd>(t.slab(s).data(), i * j);
        return out;
    }
    default:
        throw std::invalid_argument("unfold: mode must be 1, 2, or 3");
    }
}

Tensor3 fold(const CMat& m, int mode, Index rows, Index cols, Index slabs) {
    Tensor3 t(rows, cols, slabs);
    switch (mode) {
    case 1:
        if (m.rows() != rows || m.cols() != cols * slabs)
            throw std::invalid_argument("fold: matrix shape does not match mode-1 layout");
        for (Index p = 0; p < slabs; ++p)
            t.slab(p) = m.middleCols(p * cols, cols);
        return t;
    case 2:
        if (m.rows() != cols || m.cols() != rows * slabs)
            throw std::invalid_argument("fold: matrix shape does not match mode-2 layout");
        for (Index p = 0; p < slabs; ++p)
            t.slab(p) = m.middleCols(p * rows, rows).transpose();
        return t;
    case 3: {
        if (m.rows() != slabs || m.cols() != rows * cols)
            throw std::invalid_argument("fold: matrix shape does not match mode-3 layout");
        for (Index p = 0; p < slabs; ++p) {
            const Eigen::RowVectorXcd r = m.row(p);
            t.slab(p) = Eigen::Map<const CMat>(r.data(), rows, cols);
        }
        return t;
    }
    default:
        throw std::invalid_argument("fold: mode must be 1, 2, or 3");
    }
}

} // namespace tenbeam
