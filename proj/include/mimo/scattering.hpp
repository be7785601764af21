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

#include "mimo/arrays.hpp"
#include "mimo/core.hpp"
#include "mimo/ensemble.hpp"
#include "mimo/manifold.hpp"
#include "mimo/parallel.hpp"
#include "mimo/rng.hpp"

namespace mimo
{

// A scattering cluster. Path angles are Gaussian around the centers with the
// spreads as standard deviations.
struct Cluster
{
    double center_t = 0.0;
    double center_r = 0.0;
    double spread_t = 0.0;
    double spread_r = 0.0;
    int n_paths = 50;
    double power = 1.0;
};

struct Path
{
    double gain_variance = 0.0;
    double phi_t = 0.0;
    double phi_r = 0.0;
    int cluster = 0; // index into PathSet::clusters
};

struct PathSet
{
    std::vector<Path> paths;
    std::vector<Cluster> clusters;
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return paths.size(); }

    double total_power() const noexcept
    {
        double s = 0.0;
        for (const auto &p : paths)
            s += p.gain_variance;
        return s;
    }
};

struct ScenarioRange
{
    int min_clusters = 1;
    int max_clusters = 5;
    int paths_per_cluster = 50;
};

inline void validate_cluster(const Cluster &c)
{
    if (!(c.spread_t >= 0.0) || !(c.spread_r >= 0.0))
        throw Error(Errc::InvalidArgument, "cluster spreads must be non-negative");
    if (c.n_paths < 1)
        throw Error(Errc::InvalidArgument, "cluster needs at least one path");
    if (!(c.power > 0.0))
        throw Error(Errc::InvalidArgument, "cluster power must be positive");
}

// Random environment: cluster count uniform on the range, centers uniform on
// [-pi, pi), spreads uniform on [0, pi/2], unit power per cluster.
inline std::vector<Cluster> generate_scenario(std::uint64_t seed, const ScenarioRange &range = {})
{
    if (range.min_clusters < 1 || range.max_clusters < range.min_clusters)
        throw Error(Errc::EmptyRange, "cluster count range [" + std::to_string(range.min_clusters) + ", " +
                                          std::to_string(range.max_clusters) + "] is empty");
    if (range.paths_per_cluster < 1)
        throw Error(Errc::EmptyRange, "paths per cluster must be positive");
    rng::Stream s(rng::derive_seed(seed, "scenario"));
    const int count = s.uniform_int(range.min_clusters, range.max_clusters);
    std::vector<Cluster> out(static_cast<std::size_t>(count));
    for (auto &c : out)
    {
        c.center_t = wrap_angle(s.uniform(-kPi, kPi));
        c.center_r = wrap_angle(s.uniform(-kPi, kPi));
        c.spread_t = s.uniform(0.0, kPi / 2);
        c.spread_r = s.uniform(0.0, kPi / 2);
        c.n_paths = range.paths_per_cluster;
        c.power = 1.0;
    }
    return out;
}

// Three diagonal clusters at -0.3pi, 0 and 0.3pi with spread 0.1pi and 50 paths each.
inline std::vector<Cluster> table2_clusters()
{
    std::vector<Cluster> out;
    for (double c : {-0.3, 0.0, 0.3})
        out.push_back(Cluster{c * kPi, c * kPi, 0.1 * kPi, 0.1 * kPi, 50, 1.0});
    return out;
}

namespace detail
{
inline void draw_angles(std::vector<Path> &paths, const std::vector<Cluster> &clusters, rng::Stream &s)
{
    for (auto &p : paths)
    {
        const auto &c = clusters[static_cast<std::size_t>(p.cluster)];
        p.phi_t = wrap_angle(c.center_t + c.spread_t * s.normal());
        p.phi_r = wrap_angle(c.center_r + c.spread_r * s.normal());
    }
}
} // namespace detail

// Per-path angles drawn independently per end; sigma_l^2 = power / n_paths.
inline PathSet expand_paths(const std::vector<Cluster> &clusters, std::uint64_t seed)
{
    if (clusters.empty())
        throw Error(Errc::InvalidArgument, "no clusters to expand");
    PathSet out;
    out.clusters = clusters;
    out.seed = seed;
    for (std::size_t k = 0; k < clusters.size(); ++k)
    {
        validate_cluster(clusters[k]);
        const double var = clusters[k].power / clusters[k].n_paths;
        for (int i = 0; i < clusters[k].n_paths; ++i)
            out.paths.push_back(Path{var, 0.0, 0.0, static_cast<int>(k)});
    }
    rng::Stream s(rng::derive_seed(seed, "paths"));
    detail::draw_angles(out.paths, out.clusters, s);
    return out;
}

struct RealizeOptions
{
    bool redraw_angles = false; // redraw every path angle per realization
};

// Gains of realization `index`: alpha_l ~ CN(0, sigma_l^2) keyed by (seed, index, l).
inline CVector path_gains(const PathSet &paths, std::uint64_t seed, std::uint64_t index)
{
    const rng::CounterRng g(rng::derive_seed(seed, "gains", index));
    CVector a(static_cast<Eigen::Index>(paths.size()));
    for (std::size_t l = 0; l < paths.size(); ++l)
        a(static_cast<Eigen::Index>(l)) = std::sqrt(paths.paths[l].gain_variance) * g.complex_normal(l);
    return a;
}

// Path geometry used by realization `index`.
inline PathSet realization_paths(const PathSet &paths, std::uint64_t seed, std::uint64_t index,
                                 const RealizeOptions &opt)
{
    if (!opt.redraw_angles)
        return paths;
    PathSet out = paths;
    rng::Stream s(rng::derive_seed(seed, "angles", index));
    detail::draw_angles(out.paths, out.clusters, s);
    return out;
}

/*!
 * Generator for sum_l alpha_l x_R(phi_R,l) x_T(phi_T,l)^H with a pluggable per-end response.
 *
 * Realization i is a pure function of (seed, i), so ensembles built in parallel or
 * streamed one realization at a time are identical. The same seed gives the same gains
 * whatever the responses are, which pairs physical and array-independent channels.
 */
template <class ResponseT, class ResponseR>
class RayChannel
{
  public:
    RayChannel(PathSet paths, ResponseT tx, ResponseR rx, std::uint64_t seed, RealizeOptions opt = {})
        : paths_(std::move(paths)), tx_(std::move(tx)), rx_(std::move(rx)), seed_(seed), opt_(opt)
    {
        cols_ = tx_(0.0).size();
        rows_ = rx_(0.0).size();
        if (!opt_.redraw_angles)
            responses(paths_, at_, ar_);
    }

    Eigen::Index rows() const noexcept { return rows_; }
    Eigen::Index cols() const noexcept { return cols_; }
    const PathSet &paths() const noexcept { return paths_; }

    CMatrix operator()(std::uint64_t index) const
    {
        if (paths_.paths.empty())
            return CMatrix::Zero(rows_, cols_);
        const CVector a = path_gains(paths_, seed_, index);
        if (!opt_.redraw_angles)
            return ar_ * (a.asDiagonal() * at_.adjoint());
        CMatrix at, ar;
        responses(realization_paths(paths_, seed_, index, opt_), at, ar);
        return ar * (a.asDiagonal() * at.adjoint());
    }

    ChannelEnsemble ensemble(std::size_t n, EnsembleKind kind) const
    {
        if (n < 1)
            throw Error(Errc::InvalidArgument, "need at least one realization");
        ChannelEnsemble e;
        e.kind = kind;
        e.seed = seed_;
        e.realizations.resize(n);
        parallel_for(n, [&](std::size_t i) { e.realizations[i] = (*this)(i); });
        return e;
    }

  private:
    void responses(const PathSet &p, CMatrix &at, CMatrix &ar) const
    {
        const auto l = static_cast<Eigen::Index>(p.size());
        at.resize(cols_, l);
        ar.resize(rows_, l);
        for (Eigen::Index i = 0; i < l; ++i)
        {
            const auto &path = p.paths[static_cast<std::size_t>(i)];
            at.col(i) = tx_(path.phi_t);
            ar.col(i) = rx_(path.phi_r);
        }
    }

    PathSet paths_;
    ResponseT tx_;
    ResponseR rx_;
    std::uint64_t seed_;
    RealizeOptions opt_;
    Eigen::Index rows_ = 0;
    Eigen::Index cols_ = 0;
    CMatrix at_, ar_;
};

inline RayChannel<FourierBasis, FourierBasis> h0_channel(const PathSet &paths, int m_t, int m_r, std::uint64_t seed,
                                                         const RealizeOptions &opt = {})
{
    require_odd(m_t, "M_T");
    require_odd(m_r, "M_R");
    return {paths, FourierBasis(m_t), FourierBasis(m_r), seed, opt};
}

inline RayChannel<SteeringModel, SteeringModel> h_channel(const PathSet &paths, const SteeringModel &model_t,
                                                          const SteeringModel &model_r, std::uint64_t seed,
                                                          const RealizeOptions &opt = {})
{
    return {paths, model_t, model_r, seed, opt};
}

// H0 = sum_l alpha_l d_R(phi_R,l) d_T(phi_T,l)^H per realization.
inline ChannelEnsemble realize_h0(const PathSet &paths, int m_t, int m_r, std::size_t n, std::uint64_t seed,
                                  const RealizeOptions &opt = {})
{
    return h0_channel(paths, m_t, m_r, seed, opt).ensemble(n, EnsembleKind::ArrayIndependent);
}

// H = sum_l alpha_l b_R(phi_R,l) b_T(phi_T,l)^H with the same gains as realize_h0 for the same seed.
inline ChannelEnsemble realize_h(const PathSet &paths, const SteeringModel &model_t, const SteeringModel &model_r,
                                 std::size_t n, std::uint64_t seed, const RealizeOptions &opt = {})
{
    return h_channel(paths, model_t, model_r, seed, opt).ensemble(n, EnsembleKind::Physical);
}

} // namespace mimo
