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
#include <cmath>
#include <vector>

#include "mimo/arrays.hpp"
#include "mimo/core.hpp"
#include "mimo/ensemble.hpp"
#include "mimo/manifold.hpp"
#include "mimo/parallel.hpp"
#include "mimo/scattering.hpp"

namespace mimo
{

// f_M(phi) = d(0)^H d(phi) = sin(M phi/2) / (M sin(phi/2)).
inline double dirichlet_kernel(int m, double phi)
{
    const double s = std::sin(phi / 2);
    if (std::abs(s) < 1e-9)
        return std::cos(m * phi / 2) / std::cos(phi / 2);
    return std::sin(m * phi / 2) / (m * s);
}

// g_N at spatial angle r sin(phi): sin(pi N x) / (N sin(pi x)).
inline double sayeed_kernel(int n, double r, double phi)
{
    const double x = r * std::sin(phi);
    const double s = std::sin(kPi * x);
    if (std::abs(s) < 1e-9)
        return std::cos(kPi * n * x) / std::cos(kPi * x);
    return std::sin(kPi * n * x) / (n * s);
}

// Entry (m, l) = f_M(angles[l] - 2 pi m / M), rows in ascending virtual index.
inline RMatrix kernel_matrix(int m, const std::vector<double> &angles)
{
    const auto va = virtual_angles(m);
    RMatrix k(m, static_cast<Eigen::Index>(angles.size()));
    for (Eigen::Index l = 0; l < k.cols(); ++l)
        for (int q = 0; q < m; ++q)
            k(q, l) = dirichlet_kernel(m, angles[static_cast<std::size_t>(l)] - va[static_cast<std::size_t>(q)]);
    return k;
}

struct VirtualChannel
{
    CMatrix entries; // M_R x M_T
    std::vector<double> virtual_angles_t;
    std::vector<double> virtual_angles_r;
};

// H_V = D_R^H H0 D_T.
inline VirtualChannel to_virtual(const CMatrix &h0, const CMatrix &d_t, const CMatrix &d_r)
{
    if (d_r.rows() != h0.rows() || d_t.rows() != h0.cols() || d_t.rows() != d_t.cols() || d_r.rows() != d_r.cols())
        throw Error(Errc::ShapeMismatch, "H0 shape does not match the DFT matrices");
    return VirtualChannel{d_r.adjoint() * h0 * d_t, virtual_angles(static_cast<int>(d_t.cols())),
                          virtual_angles(static_cast<int>(d_r.cols()))};
}

inline VirtualChannel to_virtual(const CMatrix &h0)
{
    return to_virtual(h0, dft_matrix(static_cast<int>(h0.cols())), dft_matrix(static_cast<int>(h0.rows())));
}

// H0 = D_R H_V D_T^H.
inline CMatrix from_virtual(const CMatrix &h_v, const CMatrix &d_t, const CMatrix &d_r)
{
    if (d_r.cols() != h_v.rows() || d_t.cols() != h_v.cols())
        throw Error(Errc::ShapeMismatch, "H_V shape does not match the DFT matrices");
    return d_r * h_v * d_t.adjoint();
}

inline CMatrix from_virtual(const VirtualChannel &v, const CMatrix &d_t, const CMatrix &d_r)
{
    return from_virtual(v.entries, d_t, d_r);
}

// Kernel-domain evaluation H_V(q,p) = sum_l alpha_l f_MR(phi_R,l - phi_q) f_MT(phi_T,l - phi_p),
// without forming H0.
inline CMatrix virtual_channel_from_paths(const PathSet &paths, const CVector &gains, int m_t, int m_r)
{
    require_odd(m_t, "M_T");
    require_odd(m_r, "M_R");
    if (gains.size() != static_cast<Eigen::Index>(paths.size()))
        throw Error(Errc::ShapeMismatch, "gain count differs from path count");
    std::vector<double> at, ar;
    at.reserve(paths.size());
    ar.reserve(paths.size());
    for (const auto &p : paths.paths)
    {
        at.push_back(p.phi_t);
        ar.push_back(p.phi_r);
    }
    const RMatrix kt = kernel_matrix(m_t, at);
    const RMatrix kr = kernel_matrix(m_r, ar);
    const RMatrix re = kr * (gains.real().asDiagonal() * kt.transpose());
    const RMatrix im = kr * (gains.imag().asDiagonal() * kt.transpose());
    CMatrix out(m_r, m_t);
    out.real() = re;
    out.imag() = im;
    return out;
}

// Virtual index p with -pi/M <= phi - 2 pi p / M < pi/M, for phi in [-pi, pi).
inline int virtual_bin(int m, double phi)
{
    const double x = wrap_angle(phi);
    const int h = half_order(m);
    int p = static_cast<int>(std::floor(x * m / kTwoPi + 0.5));
    // Settle rounding at the bin edges against the defining inequality.
    if (x - kTwoPi * p / m >= kPi / m)
        ++p;
    else if (x - kTwoPi * p / m < -kPi / m)
        --p;
    return std::clamp(p, -h, h);
}

struct PathPartition
{
    int m_t = 1;
    int m_r = 1;
    std::vector<std::vector<std::size_t>> bins; // (q + h_R) * M_T + (p + h_T)
    double resolution_t = kTwoPi;
    double resolution_r = kTwoPi;

    const std::vector<std::size_t> &bin(int q, int p) const
    {
        return bins[static_cast<std::size_t>((q + half_order(m_r)) * m_t + (p + half_order(m_t)))];
    }
};

inline PathPartition partition_paths(const PathSet &paths, int m_t, int m_r)
{
    require_odd(m_t, "M_T");
    require_odd(m_r, "M_R");
    PathPartition out;
    out.m_t = m_t;
    out.m_r = m_r;
    out.resolution_t = kTwoPi / m_t;
    out.resolution_r = kTwoPi / m_r;
    out.bins.resize(static_cast<std::size_t>(m_t) * static_cast<std::size_t>(m_r));
    const int ht = half_order(m_t);
    const int hr = half_order(m_r);
    for (std::size_t l = 0; l < paths.size(); ++l)
    {
        const int p = virtual_bin(m_t, paths.paths[l].phi_t);
        const int q = virtual_bin(m_r, paths.paths[l].phi_r);
        out.bins[static_cast<std::size_t>((q + hr) * m_t + (p + ht))].push_back(l);
    }
    return out;
}

// Coherent gain sum per bin: the piecewise-constant approximation of H_V.
inline CMatrix approx_virtual_from_partition(const PathSet &paths, const PathPartition &partition,
                                             const CVector &gains)
{
    if (gains.size() != static_cast<Eigen::Index>(paths.size()))
        throw Error(Errc::ShapeMismatch, "gain count differs from path count");
    CMatrix out = CMatrix::Zero(partition.m_r, partition.m_t);
    for (int r = 0; r < partition.m_r; ++r)
        for (int c = 0; c < partition.m_t; ++c)
            for (std::size_t l : partition.bins[static_cast<std::size_t>(r * partition.m_t + c)])
                out(r, c) += gains(static_cast<Eigen::Index>(l));
    return out;
}

struct SubmatrixBounds
{
    int p_minus = 0;
    int p_plus = 0;
    int q_minus = 0;
    int q_plus = 0;
};

namespace detail
{
inline double snap(double x) { return std::abs(x - std::round(x)) < 1e-9 ? std::round(x) : x; }
} // namespace detail

/*!
 * Virtual index window of the dominant sub-matrix of a cluster.
 *
 * The angular support is center +- width * spread at each end. Bounds are
 * floor(M phi_- / 2pi) and ceil(M phi_+ / 2pi), clamped to the virtual index range.
 */
inline SubmatrixBounds cluster_submatrix_bounds(const Cluster &c, int m_t, int m_r, double width = 2.0)
{
    require_odd(m_t, "M_T");
    require_odd(m_r, "M_R");
    auto bounds = [width](double center, double spread, int m) {
        const int h = half_order(m);
        const double lo = detail::snap(m * (center - width * spread) / kTwoPi);
        const double hi = detail::snap(m * (center + width * spread) / kTwoPi);
        return std::pair{std::clamp(static_cast<int>(std::floor(lo)), -h, h),
                         std::clamp(static_cast<int>(std::ceil(hi)), -h, h)};
    };
    const auto [pm, pp] = bounds(c.center_t, c.spread_t, m_t);
    const auto [qm, qp] = bounds(c.center_r, c.spread_r, m_r);
    return SubmatrixBounds{pm, pp, qm, qp};
}

// Entrywise mean of |H_V| over the ensemble, scaled to a maximum of 1.
inline RMatrix virtual_power_image(const ChannelEnsemble &e, int m_t, int m_r)
{
    if (e.empty())
        throw Error(Errc::EmptyEnsemble, "ensemble has no realizations");
    e.validate();
    if (e.rows() != m_r || e.cols() != m_t)
        throw Error(Errc::ShapeMismatch, "ensemble shape does not match M_R x M_T");
    const CMatrix d_t = dft_matrix(m_t);
    const CMatrix d_r = dft_matrix(m_r);
    std::vector<RMatrix> mags(e.size());
    parallel_for(e.size(), [&](std::size_t i) { mags[i] = (d_r.adjoint() * e.realizations[i] * d_t).cwiseAbs(); });
    RMatrix sum = RMatrix::Zero(m_r, m_t);
    for (const auto &m : mags)
        sum += m;
    const double peak = sum.maxCoeff();
    if (!(peak > 0.0))
        throw Error(Errc::ZeroEnergy, "virtual power image is identically zero");
    return sum / peak;
}

// Unitary N-point DFT at spatial angles i/N over the principal period; column i is
// the ULA response at spatial angle i/N for the broadside orientation.
inline CMatrix sayeed_dft_matrix(int n)
{
    if (n < 1)
        throw Error(Errc::InvalidArgument, "DFT size must be positive");
    const int first = (n % 2 == 1) ? -(n - 1) / 2 : -n / 2;
    CMatrix a(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (int c = 0; c < n; ++c)
    {
        const double theta = static_cast<double>(first + c) / n;
        for (int k = 0; k < n; ++k)
            a(k, c) = std::polar(norm, -kTwoPi * (k - (n - 1) / 2.0) * theta);
    }
    return a;
}

inline void require_ula(const SteeringModel &m, const char *end)
{
    if (m.kind() != ArrayKind::Ula)
        throw Error(Errc::NotUla, std::string(end) + " array is not a ULA");
}

// Conventional virtual representation A_R^H H A_T for ULAs at both ends.
inline CMatrix sayeed_vcr_transform(const CMatrix &h, const SteeringModel &model_t, const SteeringModel &model_r)
{
    require_ula(model_t, "transmit");
    require_ula(model_r, "receive");
    if (h.rows() != model_r.n_elements() || h.cols() != model_t.n_elements())
        throw Error(Errc::ShapeMismatch, "channel shape does not match the arrays");
    return sayeed_dft_matrix(model_r.n_elements()).adjoint() * h * sayeed_dft_matrix(model_t.n_elements());
}

inline CMatrix sayeed_vcr_inverse(const CMatrix &h_v, const SteeringModel &model_t, const SteeringModel &model_r)
{
    require_ula(model_t, "transmit");
    require_ula(model_r, "receive");
    return sayeed_dft_matrix(model_r.n_elements()) * h_v * sayeed_dft_matrix(model_t.n_elements()).adjoint();
}

} // namespace mimo
