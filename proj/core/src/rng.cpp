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

#include "tenbeam/rng.hpp"

#include <cmath>

namespace tenbeam {

CMat randn_complex(Index rows, Index cols, std::mt19937_64& rng) {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("randn_complex: dims must be >= 1");
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    CMat out(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) {
            const double re = n(rng);
            const double im = n(rng);
            out(i, j) = Complex(re, im);
        }
    return out;
}

} // namespace tenbeam
