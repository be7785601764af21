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
#include <vector>

#include "mimo/core.hpp"

namespace mimo
{

enum class EnsembleKind
{
    Physical,         // N_R x N_T channels seen through concrete arrays
    ArrayIndependent, // M_R x M_T channels in the Fourier basis
};

enum class Normalization
{
    None,
    AverageEnergy, // mean squared Frobenius norm equals rows * cols
};

struct ChannelEnsemble
{
    std::vector<CMatrix> realizations;
    EnsembleKind kind = EnsembleKind::Physical;
    std::uint64_t seed = 0;
    Normalization normalization = Normalization::None;

    std::size_t size() const noexcept { return realizations.size(); }
    bool empty() const noexcept { return realizations.empty(); }
    Eigen::Index rows() const { return realizations.empty() ? 0 : realizations.front().rows(); }
    Eigen::Index cols() const { return realizations.empty() ? 0 : realizations.front().cols(); }

    // Throws EmptyEnsemble or ShapeMismatch.
    void validate() const
    {
        if (realizations.empty())
            throw Error(Errc::EmptyEnsemble, "ensemble has no realizations");
        for (const auto &h : realizations)
            if (h.rows() != rows() || h.cols() != cols())
                throw Error(Errc::ShapeMismatch, "ensemble realizations differ in shape");
    }

    double mean_energy() const
    {
        validate();
        double sum = 0.0;
        for (const auto &h : realizations)
            sum += h.squaredNorm();
        return sum / static_cast<double>(realizations.size());
    }
};

// Uniform scalar scaling so that the mean squared Frobenius norm equals rows * cols.
inline ChannelEnsemble normalize_ensemble(ChannelEnsemble e)
{
    const double energy = e.mean_energy();
    if (!(energy > 0.0) || !std::isfinite(energy))
        throw Error(Errc::ZeroEnergy, "cannot normalize an ensemble with zero or non-finite energy");
    const double target = static_cast<double>(e.rows() * e.cols());
    const double scale = std::sqrt(target / energy);
    if (scale != 1.0)
        for (auto &h : e.realizations)
            h *= scale;
    e.normalization = Normalization::AverageEnergy;
    return e;
}

} // namespace mimo
