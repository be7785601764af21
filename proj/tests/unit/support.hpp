// SPDX-License-Identifier: Apache-2.0
//
// mimo-manifold: array-independent MIMO channel models via manifold decomposition
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

#pragma once

#include <cstdint>

#include "mimo/mimo.hpp"

namespace test
{

inline mimo::CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed)
{
    return mimo::gaussian_matrix(rows, cols, seed, "test", 0);
}

inline mimo::CMatrix random_unitary(Eigen::Index n, std::uint64_t seed)
{
    return Eigen::HouseholderQR<mimo::CMatrix>(random_matrix(n, n, seed)).householderQ() *
           mimo::CMatrix::Identity(n, n);
}

// Single path with unit variance at the given angles.
inline mimo::PathSet single_path(double phi_t, double phi_r, double variance = 1.0)
{
    mimo::PathSet p;
    p.clusters.push_back(mimo::Cluster{phi_t, phi_r, 0.0, 0.0, 1, variance});
    p.paths.push_back(mimo::Path{variance, phi_t, phi_r, 0});
    return p;
}

} // namespace test
