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
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "mimo/arrays.hpp"
#include "mimo/core.hpp"
#include "mimo/ensemble.hpp"
#include "mimo/manifold.hpp"
#include "mimo/parallel.hpp"
#include "mimo/rng.hpp"
#include "mimo/scattering.hpp"
#include "mimo/vcr.hpp"

namespace mimo
{

// i.i.d. CN(0, 1) matrix for realization `index`, keyed by (seed, label, index).
inline CMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, std::string_view label,
                               std::uint64_t index)
{
    const rng::CounterRng g(rng::derive_seed(seed, label, index));
    CMatrix out(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r)
            out(r, c) = g.complex_normal(static_cast<std::uint64_t>(c * rows + r));
    return out;
}

namespace detail
{
template <class Draw>
ChannelEnsemble sample_ensemble(std::size_t n, std::uint64_t seed, EnsembleKind kind, Draw &&draw)
{
    if (n < 1)
        throw Error(Errc::InvalidArgument, "need at least one realization");
    ChannelEnsemble e;
    e.kind = kind;
    e.seed = seed;
    e.realizations.resize(n);
    parallel_for(n, [&](std::size_t i) { e.realizations[i] = draw(i); });
    return e;
}

// sqrt of the entrywise mean of |L^H H R|^2 over the ensemble.
inline RMatrix coupling_from(const ChannelEnsemble &e, const CMatrix &left, const CMatrix &right)
{
    const RMatrix zero = RMatrix::Zero(left.cols(), right.cols());
    const RMatrix sum = deterministic_sum(e.size(), zero, [&](std::size_t i) -> RMatrix {
        return (left.adjoint() * e.realizations[i] * right).cwiseAbs2();
    });
    return (sum / static_cast<double>(e.size())).cwiseSqrt();
}

inline void check_steering(const std::optional<CMatrix> &b, Eigen::Index m, const char *end)
{
    if (!b)
        throw Error(Errc::MissingSteering, std::string(end) + " steering matrix is not set");
    if (b->cols() != m)
        throw Error(Errc::ShapeMismatch, std::string(end) + " steering matrix has " + std::to_string(b->cols()) +
                                             " columns, expected " + std::to_string(m));
}
} // namespace detail

// ---------------------------------------------------------------------------
// Coupling in the virtual-angle domain.

enum class Aism1Mode
{
    ExactKernel, // sigma_qp^2 = sum_l sigma_l^2 f^2(phi_R,l - phi_q) f^2(phi_T,l - phi_p)
    Partition,   // sigma_qp^2 = sum of sigma_l^2 over the paths binned at (q, p)
};

struct Aism1Params
{
    RMatrix omega_angle; // M_R x M_T, entrywise standard deviations
    int m_t = 1;
    int m_r = 1;
    std::optional<CMatrix> b_t; // N_T x M_T
    std::optional<CMatrix> b_r; // N_R x M_R
};

// Coupling from known path parameters.
inline Aism1Params fit_aism1_method1(const PathSet &paths, int m_t, int m_r, Aism1Mode mode = Aism1Mode::ExactKernel)
{
    require_odd(m_t, "M_T");
    require_odd(m_r, "M_R");
    if (paths.paths.empty())
        throw Error(Errc::InvalidArgument, "no paths to fit");
    Aism1Params out;
    out.m_t = m_t;
    out.m_r = m_r;
    RMatrix var = RMatrix::Zero(m_r, m_t);
    if (mode == Aism1Mode::Partition)
    {
        const auto part = partition_paths(paths, m_t, m_r);
        for (int r = 0; r < m_r; ++r)
            for (int c = 0; c < m_t; ++c)
                for (std::size_t l : part.bins[static_cast<std::size_t>(r * m_t + c)])
                    var(r, c) += paths.paths[l].gain_variance;
    }
    else
    {
        std::vector<double> at, ar;
        RVector sigma2(static_cast<Eigen::Index>(paths.size()));
        for (std::size_t l = 0; l < paths.size(); ++l)
        {
            at.push_back(paths.paths[l].phi_t);
            ar.push_back(paths.paths[l].phi_r);
            sigma2(static_cast<Eigen::Index>(l)) = paths.paths[l].gain_variance;
        }
        const RMatrix kt = kernel_matrix(m_t, at).cwiseAbs2();
        const RMatrix kr = kernel_matrix(m_r, ar).cwiseAbs2();
        var = kr * sigma2.asDiagonal() * kt.transpose();
    }
    out.omega_angle = var.cwiseMax(0.0).cwiseSqrt();
    return out;
}

// Coupling from an array-independent ensemble: sqrt of the mean |D_R^H H0 D_T|^2.
inline Aism1Params fit_aism1_from_ensemble(const ChannelEnsemble &e)
{
    e.validate();
    const int m_t = static_cast<int>(e.cols());
    const int m_r = static_cast<int>(e.rows());
    require_odd(m_t, "M_T");
    require_odd(m_r, "M_R");
    Aism1Params out;
    out.m_t = m_t;
    out.m_r = m_r;
    out.omega_angle = detail::coupling_from(e, dft_matrix(m_r), dft_matrix(m_t));
    return out;
}

// Attaches target-array steering matrices; the coupling itself is unchanged.
template <class Params>
Params with_steering(Params p, CMatrix b_t, CMatrix b_r)
{
    p.b_t = std::move(b_t);
    p.b_r = std::move(b_r);
    detail::check_steering(p.b_t, p.m_t, "transmit");
    detail::check_steering(p.b_r, p.m_r, "receive");
    return p;
}

// Virtual-domain draw Omega .* G for realization `index`.
inline CMatrix aism1_sample_virtual(const Aism1Params &p, std::uint64_t seed, std::uint64_t index)
{
    return p.omega_angle.cast<cd>().cwiseProduct(
        gaussian_matrix(p.omega_angle.rows(), p.omega_angle.cols(), seed, "aism1", index));
}

// H = B_R (Omega .* G) B_T^H per realization.
inline ChannelEnsemble aism1_sample(const Aism1Params &p, std::size_t n, std::uint64_t seed)
{
    detail::check_steering(p.b_t, p.m_t, "transmit");
    detail::check_steering(p.b_r, p.m_r, "receive");
    const CMatrix bth = p.b_t->adjoint();
    return detail::sample_ensemble(n, seed, EnsembleKind::Physical, [&](std::size_t i) -> CMatrix {
        return *p.b_r * aism1_sample_virtual(p, seed, i) * bth;
    });
}

// ---------------------------------------------------------------------------
// Coupling between eigenmodes of the one-sided correlations.

struct EigenCoupling
{
    RMatrix omega;    // rows x cols, entrywise standard deviations
    CMatrix u_t;      // cols x cols, columns are eigenvectors of E[H^H H]
    CMatrix u_r;      // rows x rows, columns are eigenvectors of E[H H^H]
    RVector lambda_t; // descending
    RVector lambda_r; // descending
};

namespace detail
{
// Eigenpairs of a Hermitian-symmetrized matrix, descending, clamped at zero, and
// phase-fixed so that each vector's largest-magnitude component is real positive.
inline std::pair<RVector, CMatrix> sorted_eigen(const CMatrix &r)
{
    const CMatrix sym = (r + r.adjoint()) / 2.0;
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
    if (es.info() != Eigen::Success)
        throw Error(Errc::NonFinite, "eigendecomposition failed");
    const auto n = sym.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const RVector &w = es.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return w(a) > w(b); });
    RVector lambda(n);
    CMatrix u(n, n);
    for (Eigen::Index k = 0; k < n; ++k)
    {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        lambda(k) = std::max(0.0, w(src));
        CVector v = es.eigenvectors().col(src);
        Eigen::Index big = 0;
        v.cwiseAbs().maxCoeff(&big);
        v *= std::conj(v(big)) / std::abs(v(big));
        v(big) = cd(v(big).real(), 0.0);
        u.col(k) = v;
    }
    return {lambda, u};
}
} // namespace detail

inline EigenCoupling fit_eigen_coupling(const ChannelEnsemble &e)
{
    e.validate();
    const auto rows = e.rows();
    const auto cols = e.cols();
    const auto count = static_cast<double>(e.size());
    const CMatrix rt = deterministic_sum(e.size(), CMatrix(CMatrix::Zero(cols, cols)), [&](std::size_t i) -> CMatrix {
                           return e.realizations[i].adjoint() * e.realizations[i];
                       }) /
                       count;
    const CMatrix rr = deterministic_sum(e.size(), CMatrix(CMatrix::Zero(rows, rows)), [&](std::size_t i) -> CMatrix {
                           return e.realizations[i] * e.realizations[i].adjoint();
                       }) /
                       count;
    EigenCoupling out;
    std::tie(out.lambda_t, out.u_t) = detail::sorted_eigen(rt);
    std::tie(out.lambda_r, out.u_r) = detail::sorted_eigen(rr);
    out.omega = detail::coupling_from(e, out.u_r, out.u_t);
    return out;
}

// U_R (Omega .* G) U_T^H.
inline CMatrix eigen_coupling_draw(const EigenCoupling &c, std::uint64_t seed, std::string_view label,
                                   std::uint64_t index)
{
    const CMatrix g = gaussian_matrix(c.omega.rows(), c.omega.cols(), seed, label, index);
    return c.u_r * c.omega.cast<cd>().cwiseProduct(g) * c.u_t.adjoint();
}

struct Aism2Params
{
    EigenCoupling coupling; // in the Fourier basis, M_R x M_T
    int m_t = 1;
    int m_r = 1;
    std::optional<CMatrix> b_t;
    std::optional<CMatrix> b_r;
};

inline Aism2Params fit_aism2(const ChannelEnsemble &e)
{
    e.validate();
    const int m_t = static_cast<int>(e.cols());
    const int m_r = static_cast<int>(e.rows());
    require_odd(m_t, "M_T");
    require_odd(m_r, "M_R");
    if (e.size() < static_cast<std::size_t>(10 * std::max(m_t, m_r)))
        warn("AISM2 fit from " + std::to_string(e.size()) + " realizations; eigenvectors may be unstable below " +
             std::to_string(10 * std::max(m_t, m_r)));
    return Aism2Params{fit_eigen_coupling(e), m_t, m_r, std::nullopt, std::nullopt};
}

// Array-independent draws H0 = U_R (Omega .* G) U_T^H.
inline ChannelEnsemble aism2_sample_h0(const Aism2Params &p, std::size_t n, std::uint64_t seed)
{
    return detail::sample_ensemble(n, seed, EnsembleKind::ArrayIndependent, [&](std::size_t i) {
        return eigen_coupling_draw(p.coupling, seed, "aism2", i);
    });
}

// H = B_R D_R^H U_R (Omega .* G) U_T^H D_T B_T^H.
inline ChannelEnsemble aism2_sample(const Aism2Params &p, std::size_t n, std::uint64_t seed)
{
    detail::check_steering(p.b_t, p.m_t, "transmit");
    detail::check_steering(p.b_r, p.m_r, "receive");
    if (p.coupling.u_t.rows() != p.m_t || p.coupling.u_r.rows() != p.m_r)
        throw Error(Errc::ShapeMismatch, "eigenbases do not match M_T, M_R");
    const CMatrix left = *p.b_r * dft_matrix(p.m_r).adjoint();
    const CMatrix right = dft_matrix(p.m_t) * p.b_t->adjoint();
    return detail::sample_ensemble(n, seed, EnsembleKind::Physical, [&](std::size_t i) -> CMatrix {
        return left * eigen_coupling_draw(p.coupling, seed, "aism2", i) * right;
    });
}

// Same draws through sampling matrices: H = Gamma_R U_R (Omega .* G) U_T^H Gamma_T^H.
inline ChannelEnsemble aism2_sample_gamma(const Aism2Params &p, const CMatrix &gamma_t, const CMatrix &gamma_r,
                                          std::size_t n, std::uint64_t seed)
{
    if (gamma_t.cols() != p.m_t || gamma_r.cols() != p.m_r)
        throw Error(Errc::ShapeMismatch, "sampling matrices do not match M_T, M_R");
    const CMatrix gth = gamma_t.adjoint();
    return detail::sample_ensemble(n, seed, EnsembleKind::Physical, [&](std::size_t i) -> CMatrix {
        return gamma_r * eigen_coupling_draw(p.coupling, seed, "aism2", i) * gth;
    });
}

// ---------------------------------------------------------------------------
// Array-dependent baselines.

struct WeichselbergerParams
{
    EigenCoupling coupling; // N_R x N_T
};

inline WeichselbergerParams fit_weichselberger(const ChannelEnsemble &e) { return {fit_eigen_coupling(e)}; }

inline ChannelEnsemble weichselberger_sample(const WeichselbergerParams &p, std::size_t n, std::uint64_t seed)
{
    return detail::sample_ensemble(n, seed, EnsembleKind::Physical, [&](std::size_t i) {
        return eigen_coupling_draw(p.coupling, seed, "weichselberger", i);
    });
}

struct SayeedParams
{
    RMatrix omega_v; // N_R x N_T
    CMatrix a_t;
    CMatrix a_r;
};

// Variance mask of A_R^H H A_T over the ensemble.
inline SayeedParams fit_sayeed(const ChannelEnsemble &e, const SteeringModel &model_t, const SteeringModel &model_r)
{
    require_ula(model_t, "transmit");
    require_ula(model_r, "receive");
    e.validate();
    if (e.rows() != model_r.n_elements() || e.cols() != model_t.n_elements())
        throw Error(Errc::ShapeMismatch, "ensemble shape does not match the arrays");
    SayeedParams out;
    out.a_t = sayeed_dft_matrix(model_t.n_elements());
    out.a_r = sayeed_dft_matrix(model_r.n_elements());
    out.omega_v = detail::coupling_from(e, out.a_r, out.a_t);
    return out;
}

// H = A_R (Omega_v .* G) A_T^H.
inline ChannelEnsemble sayeed_sample(const SayeedParams &p, std::size_t n, std::uint64_t seed)
{
    const CMatrix ath = p.a_t.adjoint();
    return detail::sample_ensemble(n, seed, EnsembleKind::Physical, [&](std::size_t i) -> CMatrix {
        const CMatrix g = gaussian_matrix(p.omega_v.rows(), p.omega_v.cols(), seed, "sayeed", i);
        return p.a_r * p.omega_v.cast<cd>().cwiseProduct(g) * ath;
    });
}

// ---------------------------------------------------------------------------
// Serialization. Real grids are row-major nested arrays; complex grids interleave
// re/im within each row.

inline constexpr const char *kParamsFormat = "aism/1";

namespace detail
{
inline nlohmann::json real_grid(const RMatrix &m)
{
    auto out = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
    {
        auto row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(m(r, c));
        out.push_back(std::move(row));
    }
    return out;
}

inline nlohmann::json complex_grid(const CMatrix &m)
{
    auto out = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
    {
        auto row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
        {
            row.push_back(m(r, c).real());
            row.push_back(m(r, c).imag());
        }
        out.push_back(std::move(row));
    }
    return out;
}

inline const nlohmann::json &field(const nlohmann::json &j, const char *key)
{
    if (!j.is_object() || !j.contains(key))
        throw Error(Errc::Config, std::string("model parameters: missing field '") + key + "'");
    return j.at(key);
}

inline RMatrix parse_real_grid(const nlohmann::json &j, const char *key)
{
    const auto &g = field(j, key);
    if (!g.is_array() || g.empty() || !g.front().is_array())
        throw Error(Errc::Config, std::string("model parameters: '") + key + "' must be a nested array");
    RMatrix m(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(g.front().size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
    {
        const auto &row = g[static_cast<std::size_t>(r)];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(m.cols()))
            throw Error(Errc::Config, std::string("model parameters: '") + key + "' row " + std::to_string(r) +
                                          " has the wrong length");
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return m;
}

inline CMatrix parse_complex_grid(const nlohmann::json &j, const char *key)
{
    const RMatrix flat = parse_real_grid(j, key);
    if (flat.cols() % 2 != 0)
        throw Error(Errc::Config, std::string("model parameters: '") + key + "' rows need re/im pairs");
    CMatrix m(flat.rows(), flat.cols() / 2);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            m(r, c) = cd(flat(r, 2 * c), flat(r, 2 * c + 1));
    return m;
}

inline RVector parse_vector(const nlohmann::json &j, const char *key)
{
    const auto &v = field(j, key);
    if (!v.is_array())
        throw Error(Errc::Config, std::string("model parameters: '") + key + "' must be an array");
    RVector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
    return out;
}

inline void check_format(const nlohmann::json &j, const char *model)
{
    if (field(j, "format") != kParamsFormat)
        throw Error(Errc::Config, "model parameters: unsupported format tag");
    if (field(j, "model") != model)
        throw Error(Errc::Config, std::string("model parameters: expected model '") + model + "'");
}

inline void put_steering(nlohmann::json &j, const std::optional<CMatrix> &b_t, const std::optional<CMatrix> &b_r)
{
    if (b_t)
        j["b_t"] = complex_grid(*b_t);
    if (b_r)
        j["b_r"] = complex_grid(*b_r);
}

inline void get_steering(const nlohmann::json &j, std::optional<CMatrix> &b_t, std::optional<CMatrix> &b_r)
{
    if (j.contains("b_t"))
        b_t = parse_complex_grid(j, "b_t");
    if (j.contains("b_r"))
        b_r = parse_complex_grid(j, "b_r");
}
} // namespace detail

inline nlohmann::json to_json(const Aism1Params &p)
{
    nlohmann::json j{{"format", kParamsFormat}, {"model", "aism1"}, {"m_t", p.m_t}, {"m_r", p.m_r}};
    j["omega_angle"] = detail::real_grid(p.omega_angle);
    detail::put_steering(j, p.b_t, p.b_r);
    return j;
}

inline Aism1Params aism1_from_json(const nlohmann::json &j)
{
    detail::check_format(j, "aism1");
    Aism1Params p;
    p.m_t = detail::field(j, "m_t").get<int>();
    p.m_r = detail::field(j, "m_r").get<int>();
    p.omega_angle = detail::parse_real_grid(j, "omega_angle");
    if (p.omega_angle.rows() != p.m_r || p.omega_angle.cols() != p.m_t)
        throw Error(Errc::Config, "model parameters: omega_angle shape does not match m_r x m_t");
    detail::get_steering(j, p.b_t, p.b_r);
    return p;
}

inline nlohmann::json to_json(const Aism2Params &p)
{
    nlohmann::json j{{"format", kParamsFormat}, {"model", "aism2"}, {"m_t", p.m_t}, {"m_r", p.m_r}};
    j["omega_eigen"] = detail::real_grid(p.coupling.omega);
    j["u_t"] = detail::complex_grid(p.coupling.u_t);
    j["u_r"] = detail::complex_grid(p.coupling.u_r);
    j["lambda_t"] = std::vector<double>(p.coupling.lambda_t.data(), p.coupling.lambda_t.data() + p.coupling.lambda_t.size());
    j["lambda_r"] = std::vector<double>(p.coupling.lambda_r.data(), p.coupling.lambda_r.data() + p.coupling.lambda_r.size());
    detail::put_steering(j, p.b_t, p.b_r);
    return j;
}

inline Aism2Params aism2_from_json(const nlohmann::json &j)
{
    detail::check_format(j, "aism2");
    Aism2Params p;
    p.m_t = detail::field(j, "m_t").get<int>();
    p.m_r = detail::field(j, "m_r").get<int>();
    p.coupling.omega = detail::parse_real_grid(j, "omega_eigen");
    p.coupling.u_t = detail::parse_complex_grid(j, "u_t");
    p.coupling.u_r = detail::parse_complex_grid(j, "u_r");
    p.coupling.lambda_t = detail::parse_vector(j, "lambda_t");
    p.coupling.lambda_r = detail::parse_vector(j, "lambda_r");
    if (p.coupling.omega.rows() != p.m_r || p.coupling.omega.cols() != p.m_t || p.coupling.u_t.rows() != p.m_t ||
        p.coupling.u_r.rows() != p.m_r)
        throw Error(Errc::Config, "model parameters: shapes do not match m_r x m_t");
    detail::get_steering(j, p.b_t, p.b_r);
    return p;
}

} // namespace mimo
