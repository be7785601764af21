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

#include <algorithm>
#include <vector>

#include "mimo/arrays.hpp"
#include "mimo/core.hpp"
#include "mimo/parallel.hpp"

namespace mimo
{

// Array-independent basis d(phi) with components exp(j k phi)/sqrt(M) for
// k = (M-1)/2 down to -(M-1)/2.
class FourierBasis
{
  public:
    explicit FourierBasis(int m) : m_(m) { require_odd(m, "M"); }

    int size() const noexcept { return m_; }

    CVector operator()(double phi) const
    {
        CVector d(m_);
        const int h = half_order(m_);
        const double norm = 1.0 / std::sqrt(static_cast<double>(m_));
        for (int i = 0; i < m_; ++i)
            d(i) = std::polar(norm, (h - i) * phi);
        return d;
    }

  private:
    int m_;
};

inline CVector fourier_basis_eval(const FourierBasis &basis, double phi) { return basis(phi); }

// Unitary M x M matrix whose columns are d at the virtual angles.
inline CMatrix dft_matrix(int m)
{
    require_odd(m, "M");
    return steering_columns(FourierBasis(m), m);
}

struct SamplingMatrix
{
    CMatrix entries;           // N x M
    double residual_sup = 0.0; // max over the grid of |b(phi) - Gamma d(phi)|
};

inline constexpr int kDefaultGridSize = 4096;

/*!
 * Fourier projection Gamma = (M/2pi) * integral of b(phi) d(phi)^H over the circle.
 *
 * The integral is a uniform-grid sum over grid_size points on [-pi, pi). Partial sums
 * are formed over a fixed block layout and combined in block order, so the result does
 * not depend on the worker count.
 */
template <class Response>
SamplingMatrix sampling_matrix(Response &&response, int m, int grid_size = kDefaultGridSize)
{
    require_odd(m, "M");
    if (grid_size < 4 * m)
        throw Error(Errc::GridTooCoarse, "grid of " + std::to_string(grid_size) + " points is below 4*M = " +
                                             std::to_string(4 * m));
    const FourierBasis basis(m);
    const auto n = response(0.0).size();
    const auto grid = static_cast<std::size_t>(grid_size);
    auto angle = [&](std::size_t g) { return -kPi + kTwoPi * static_cast<double>(g) / grid_size; };

    constexpr std::size_t kBlocks = 64;
    const std::size_t per_block = (grid + kBlocks - 1) / kBlocks;
    std::vector<CMatrix> partial(kBlocks, CMatrix::Zero(n, m));
    parallel_for(kBlocks, [&](std::size_t blk) {
        const std::size_t hi = std::min(grid, (blk + 1) * per_block);
        for (std::size_t g = blk * per_block; g < hi; ++g)
        {
            const double phi = angle(g);
            partial[blk].noalias() += response(phi) * basis(phi).adjoint();
        }
    });
    SamplingMatrix out;
    out.entries = CMatrix::Zero(n, m);
    for (const auto &p : partial)
        out.entries += p;
    out.entries *= static_cast<double>(m) / grid_size;

    std::vector<double> worst(kBlocks, 0.0);
    parallel_for(kBlocks, [&](std::size_t blk) {
        const std::size_t hi = std::min(grid, (blk + 1) * per_block);
        for (std::size_t g = blk * per_block; g < hi; ++g)
        {
            const double phi = angle(g);
            worst[blk] = std::max(worst[blk], (response(phi) - out.entries * basis(phi)).norm());
        }
    });
    out.residual_sup = *std::max_element(worst.begin(), worst.end());
    return out;
}

// Gamma implied by a square steering matrix, B = Gamma D with the error term ignored.
inline CMatrix gamma_from_steering(const CMatrix &b)
{
    return b * dft_matrix(static_cast<int>(b.cols())).adjoint();
}

struct FactorizeOptions
{
    double max_condition = 1e6;
};

namespace detail
{
inline void require_invertible(const CMatrix &m, const char *end, double max_condition)
{
    if (m.rows() != m.cols())
        throw Error(Errc::NonSquare, std::string(end) + " matrix is " + std::to_string(m.rows()) + "x" +
                                         std::to_string(m.cols()) + "; factorization needs M = N");
    const double k = condition_number(m);
    if (!(k <= max_condition))
        throw Error(Errc::IllConditioned, std::string(end) + " matrix condition number " + std::to_string(k) +
                                              " exceeds " + std::to_string(max_condition));
}

// Returns A^{-1} X A^{-H}-style two-sided solve: left^{-1} * h * right^{-H}.
inline CMatrix two_sided_solve(const CMatrix &left, const CMatrix &h, const CMatrix &right)
{
    const CMatrix y = Eigen::PartialPivLU<CMatrix>(left).solve(h);
    return Eigen::PartialPivLU<CMatrix>(right).solve(y.adjoint()).adjoint();
}
} // namespace detail

// H0 = D_R B_R^{-1} H B_T^{-H} D_T^H from a sounding with square steering matrices.
inline CMatrix factorize_channel(const CMatrix &h, const CMatrix &b_t, const CMatrix &b_r,
                                 const FactorizeOptions &opt = {})
{
    detail::require_invertible(b_t, "transmit steering", opt.max_condition);
    detail::require_invertible(b_r, "receive steering", opt.max_condition);
    if (h.rows() != b_r.rows() || h.cols() != b_t.rows())
        throw Error(Errc::ShapeMismatch, "channel shape does not match the steering matrices");
    const CMatrix d_t = dft_matrix(static_cast<int>(b_t.cols()));
    const CMatrix d_r = dft_matrix(static_cast<int>(b_r.cols()));
    return d_r * detail::two_sided_solve(b_r, h, b_t) * d_t.adjoint();
}

// Same factorization written with square sampling matrices: H0 = Gamma_R^{-1} H Gamma_T^{-H}.
inline CMatrix factorize_channel_gamma(const CMatrix &h, const CMatrix &gamma_t, const CMatrix &gamma_r,
                                       const FactorizeOptions &opt = {})
{
    detail::require_invertible(gamma_t, "transmit sampling", opt.max_condition);
    detail::require_invertible(gamma_r, "receive sampling", opt.max_condition);
    if (h.rows() != gamma_r.rows() || h.cols() != gamma_t.rows())
        throw Error(Errc::ShapeMismatch, "channel shape does not match the sampling matrices");
    return detail::two_sided_solve(gamma_r, h, gamma_t);
}

// Gamma_R H0 Gamma_T^H.
inline CMatrix synthesize_channel(const CMatrix &h0, const CMatrix &gamma_t, const CMatrix &gamma_r)
{
    if (gamma_r.cols() != h0.rows() || gamma_t.cols() != h0.cols())
        throw Error(Errc::ShapeMismatch, "H0 shape does not match the sampling matrices");
    return gamma_r * h0 * gamma_t.adjoint();
}

// Relative Frobenius size of the modeling error |H - Gamma_R H0 Gamma_T^H| / |H|.
inline double reconstruction_residual(const CMatrix &h, const CMatrix &h0, const CMatrix &gamma_t,
                                      const CMatrix &gamma_r)
{
    const double nh = h.norm();
    if (!(nh > 0.0))
        throw Error(Errc::ZeroChannel, "reference channel has zero Frobenius norm");
    const CMatrix s = synthesize_channel(h0, gamma_t, gamma_r);
    if (s.rows() != h.rows() || s.cols() != h.cols())
        throw Error(Errc::ShapeMismatch, "synthesized channel shape differs from H");
    return (h - s).norm() / nh;
}

} // namespace mimo
