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
#include "mimo/parallel.hpp"

namespace mimo
{

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

namespace detail
{
inline void require_finite(const CMatrix &h)
{
    if (!h.allFinite())
        throw Error(Errc::NonFinite, "channel matrix has non-finite entries");
}
} // namespace detail

// sum_i log2(1 + (rho/N_T) sigma_i^2) over the singular values of H.
inline double capacity(const CMatrix &h, double snr_db)
{
    detail::require_finite(h);
    if (h.size() == 0)
        return 0.0;
    const double scale = db_to_linear(snr_db) / static_cast<double>(h.cols());
    const RVector s = Eigen::JacobiSVD<CMatrix>(h).singularValues();
    double c = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        c += std::log2(1.0 + scale * s(i) * s(i));
    return c;
}

// log2 det(I + (rho/N_T) H H^H) through a Cholesky factor; cross-check for capacity().
inline double capacity_logdet(const CMatrix &h, double snr_db)
{
    detail::require_finite(h);
    const double scale = db_to_linear(snr_db) / static_cast<double>(h.cols());
    const CMatrix g = CMatrix::Identity(h.rows(), h.rows()) + scale * h * h.adjoint();
    const Eigen::LLT<CMatrix> llt(g);
    if (llt.info() != Eigen::Success)
        throw Error(Errc::NonFinite, "Gram matrix is not positive definite");
    double c = 0.0;
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        c += 2.0 * std::log2(llt.matrixL()(i, i).real());
    return c;
}

struct CapacityStats
{
    std::vector<double> per_realization; // bits/s/Hz, realization order
    double ergodic = 0.0;
    std::vector<double> cdf; // per_realization sorted ascending
    double snr_db = 20.0;
};

inline CapacityStats ergodic_capacity(const ChannelEnsemble &e, double snr_db)
{
    if (e.empty())
        throw Error(Errc::EmptyEnsemble, "ensemble has no realizations");
    if (e.normalization != Normalization::AverageEnergy)
        throw Error(Errc::UnnormalizedEnsemble, "capacity needs an energy-normalized ensemble");
    e.validate();
    CapacityStats out;
    out.snr_db = snr_db;
    out.per_realization.resize(e.size());
    parallel_for(e.size(), [&](std::size_t i) { out.per_realization[i] = capacity(e.realizations[i], snr_db); });
    double sum = 0.0;
    for (double c : out.per_realization)
        sum += c;
    out.ergodic = sum / static_cast<double>(e.size());
    out.cdf = out.per_realization;
    std::sort(out.cdf.begin(), out.cdf.end());
    return out;
}

inline double median(std::vector<double> v)
{
    if (v.empty())
        throw Error(Errc::EmptyEnsemble, "median of an empty sample");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline CVector vec(const CMatrix &h) { return h.reshaped(); }

// E[vec(H) vec(H)^H] with column stacking, Hermitian-symmetrized.
inline CMatrix full_correlation(const ChannelEnsemble &e)
{
    if (e.empty())
        throw Error(Errc::EmptyEnsemble, "ensemble has no realizations");
    e.validate();
    const auto dim = e.rows() * e.cols();
    const CMatrix sum = deterministic_sum(e.size(), CMatrix(CMatrix::Zero(dim, dim)), [&](std::size_t i) -> CMatrix {
        const CVector v = vec(e.realizations[i]);
        return v * v.adjoint();
    });
    const CMatrix r = sum / static_cast<double>(e.size());
    return (r + r.adjoint()) / 2.0;
}

// Uniform azimuth grid of n points on [lo, hi).
inline std::vector<double> uniform_grid(int n, double lo = -kPi, double hi = kPi)
{
    if (n < 1)
        throw Error(Errc::InvalidArgument, "grid needs at least one point");
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / n;
    return g;
}

struct ApsGrid
{
    RMatrix values;             // rows follow axis_r, columns follow axis_t
    std::vector<double> axis_t; // transmit azimuths
    std::vector<double> axis_r; // receive azimuths
    double loading = 0.0;       // relative diagonal loading actually applied
};

inline constexpr double kDefaultLoading = 1e-6;
inline constexpr int kDefaultApsGrid = 181;

/*!
 * Capon spectrum 1 / (b^H R^{-1} b) with b = conj(b_T(phi_T)) kron b_R(phi_R).
 *
 * R is the empirical full correlation loaded by loading * tr(R) / (N_T N_R) on the
 * diagonal. With fewer realizations than N_T N_R the estimate is rank deficient, so
 * the loading is raised to at least 1e-3 and a warning is issued.
 */
inline ApsGrid capon_aps(const ChannelEnsemble &e, const SteeringModel &model_t, const SteeringModel &model_r,
                         std::vector<double> grid_t, std::vector<double> grid_r, double loading = kDefaultLoading)
{
    if (grid_t.empty() || grid_r.empty())
        throw Error(Errc::InvalidArgument, "APS grids must be nonempty");
    if (!(loading >= 0.0))
        throw Error(Errc::InvalidArgument, "diagonal loading must be non-negative");
    e.validate();
    const auto nt = e.cols();
    const auto nr = e.rows();
    if (nt != model_t.n_elements() || nr != model_r.n_elements())
        throw Error(Errc::ShapeMismatch, "ensemble shape does not match the arrays");
    const auto dim = nt * nr;
    if (e.size() < static_cast<std::size_t>(dim))
    {
        warn("Capon correlation from " + std::to_string(e.size()) + " realizations is rank deficient for dimension " +
             std::to_string(dim) + "; raising diagonal loading");
        loading = std::max(loading, 1e-3);
    }
    CMatrix r = full_correlation(e);
    const double load = loading * r.trace().real() / static_cast<double>(dim);
    r.diagonal().array() += load;
    const Eigen::LLT<CMatrix> llt(r);
    if (llt.info() != Eigen::Success)
        throw Error(Errc::SingularCorrelation, "loaded correlation matrix is not positive definite");

    std::vector<CVector> bt(grid_t.size()), br(grid_r.size());
    for (std::size_t i = 0; i < grid_t.size(); ++i)
        bt[i] = model_t(grid_t[i]).conjugate();
    for (std::size_t i = 0; i < grid_r.size(); ++i)
        br[i] = model_r(grid_r[i]);

    ApsGrid out;
    out.values.resize(static_cast<Eigen::Index>(grid_r.size()), static_cast<Eigen::Index>(grid_t.size()));
    out.loading = loading;
    const auto lower = llt.matrixL();
    parallel_for(grid_r.size(), [&](std::size_t ir) {
        CVector b(dim);
        for (std::size_t it = 0; it < grid_t.size(); ++it)
        {
            for (Eigen::Index c = 0; c < nt; ++c)
                b.segment(c * nr, nr) = bt[it](c) * br[ir];
            const CVector w = lower.solve(b);
            const double q = w.squaredNorm();
            if (!(q > 0.0) || !std::isfinite(q))
                throw Error(Errc::SingularCorrelation, "Capon quadratic form is not positive");
            out.values(static_cast<Eigen::Index>(ir), static_cast<Eigen::Index>(it)) = 1.0 / q;
        }
    });
    out.axis_t = std::move(grid_t);
    out.axis_r = std::move(grid_r);
    return out;
}

inline ApsGrid capon_aps(const ChannelEnsemble &e, const SteeringModel &model_t, const SteeringModel &model_r)
{
    return capon_aps(e, model_t, model_r, uniform_grid(kDefaultApsGrid), uniform_grid(kDefaultApsGrid));
}

struct ConditionReport
{
    double kappa_b_t = 0.0;
    double kappa_b_r = 0.0;
    double mean_kappa_h = 0.0;
    double ergodic_capacity = 0.0;
};

inline ConditionReport condition_report(const ChannelEnsemble &e, const CMatrix &b_t, const CMatrix &b_r,
                                        double snr_db = 20.0)
{
    ConditionReport out;
    out.kappa_b_t = condition_number(b_t);
    out.kappa_b_r = condition_number(b_r);
    out.ergodic_capacity = ergodic_capacity(e, snr_db).ergodic;
    std::vector<double> kappa(e.size());
    parallel_for(e.size(), [&](std::size_t i) { kappa[i] = condition_number(e.realizations[i]); });
    double sum = 0.0;
    for (double k : kappa)
        sum += k;
    out.mean_kappa_h = sum / static_cast<double>(e.size());
    return out;
}

} // namespace mimo
