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


#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace mimo;
using Catch::Approx;

namespace
{

bool code_is(const Error &e, Errc c) { return e.code() == c; }

// Coupling with distinct, descending row and column sums so the eigenbases are unique.
RMatrix staircase(int rows, int cols)
{
    RMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = 0.2 + (rows - i) * (cols - j) * 0.3;
    return m;
}

// Column-stacked second moment implied by H = B_R (Omega .* G) B_T^H.
CMatrix aism1_second_moment(const RMatrix &omega, const CMatrix &b_t, const CMatrix &b_r)
{
    const auto dim = b_t.rows() * b_r.rows();
    CMatrix r = CMatrix::Zero(dim, dim);
    for (Eigen::Index q = 0; q < omega.rows(); ++q)
        for (Eigen::Index p = 0; p < omega.cols(); ++p)
        {
            const CMatrix term = b_r.col(q) * b_t.col(p).adjoint();
            const CVector v = term.reshaped();
            r += omega(q, p) * omega(q, p) * v * v.adjoint();
        }
    return r;
}

} // namespace

TEST_CASE("AISM1 coupling from path parameters", "[models]")
{
    const double phi_t = kTwoPi * 2 / 7;
    const double phi_r = kTwoPi * -1 / 5;
    for (auto mode : {Aism1Mode::ExactKernel, Aism1Mode::Partition})
    {
        const auto p = fit_aism1_method1(test::single_path(phi_t, phi_r), 7, 5, mode);
        RMatrix expected = RMatrix::Zero(5, 7);
        expected(1, 5) = 1.0;
        CHECK((p.omega_angle - expected).cwiseAbs().maxCoeff() < 1e-12);
    }

    PathSet two;
    two.clusters.push_back(Cluster{});
    two.paths.push_back(Path{1.0, 0.05, 0.02, 0});
    two.paths.push_back(Path{3.0, -0.04, 0.01, 0});
    const auto p = fit_aism1_method1(two, 9, 9, Aism1Mode::Partition);
    CHECK(p.omega_angle(4, 4) == Approx(2.0));
    CHECK(p.omega_angle.sum() == Approx(2.0));
    CHECK_THROWS_MATCHES(fit_aism1_method1(two, 8, 9), Error,
                         Catch::Matchers::Predicate<Error>([](const Error &e) { return code_is(e, Errc::EvenM); }));
}

TEST_CASE("AISM1 exact-kernel coupling matches the ensemble estimate", "[models]")
{
    const auto paths = expand_paths(table2_clusters(), 1);
    const auto exact = fit_aism1_method1(paths, 19, 19);
    const auto mc = fit_aism1_from_ensemble(realize_h0(paths, 19, 19, 10000, 2));
    CHECK(relative_frobenius(mc.omega_angle.cast<cd>(), exact.omega_angle.cast<cd>()) < 0.10);
}

TEST_CASE("AISM1 coupling from an ensemble", "[models]")
{
    ChannelEnsemble one;
    one.kind = EnsembleKind::ArrayIndependent;
    one.realizations.push_back(test::random_matrix(5, 3, 4));
    const auto p = fit_aism1_from_ensemble(one);
    CHECK((p.omega_angle - to_virtual(one.realizations[0]).entries.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-12);

    ChannelEnsemble zero;
    zero.realizations.assign(3, CMatrix::Zero(3, 3));
    CHECK(fit_aism1_from_ensemble(zero).omega_angle.isZero(0.0));
    CHECK_THROWS_AS(fit_aism1_from_ensemble(ChannelEnsemble{}), Error);
}

TEST_CASE("AISM1 fit and sample are consistent", "[models]")
{
    // With B = D the samples are H0 draws, so refitting recovers the coupling.
    Aism1Params truth;
    truth.m_t = 5;
    truth.m_r = 7;
    truth.omega_angle = staircase(7, 5);
    const auto with_d = with_steering(truth, dft_matrix(5), dft_matrix(7));
    const auto e = aism1_sample(with_d, 10000, 3);
    const auto fit = fit_aism1_from_ensemble(e);
    CHECK(relative_frobenius(fit.omega_angle.cast<cd>(), truth.omega_angle.cast<cd>()) < 0.05);

    // Per-entry virtual variance.
    RMatrix var = RMatrix::Zero(7, 5);
    for (std::uint64_t i = 0; i < 10000; ++i)
        var += aism1_sample_virtual(truth, 3, i).cwiseAbs2() / 10000.0;
    for (int q = 0; q < 7; ++q)
        for (int c = 0; c < 5; ++c)
            CHECK(var(q, c) == Approx(std::pow(truth.omega_angle(q, c), 2)).epsilon(0.10));

    const auto again = aism1_sample(with_d, 10, 3);
    for (std::size_t i = 0; i < 10; ++i)
        CHECK(again.realizations[i] == e.realizations[i]);
}

TEST_CASE("AISM1 sampling", "[models]")
{
    Aism1Params p;
    p.m_t = 5;
    p.m_r = 5;
    p.omega_angle = RMatrix::Zero(5, 5);
    p.omega_angle(1, 3) = 1.0;
    CHECK_THROWS_MATCHES(aism1_sample(p, 3, 1), Error,
                         Catch::Matchers::Predicate<Error>([](const Error &e) { return code_is(e, Errc::MissingSteering); }));

    const auto u = with_steering(p, test::random_unitary(5, 1), test::random_unitary(5, 2));
    const auto e = aism1_sample(u, 10000, 4);
    double energy = 0.0;
    for (const auto &h : e.realizations)
    {
        Eigen::JacobiSVD<CMatrix> svd(h);
        CHECK(svd.singularValues()(1) < 1e-12 * svd.singularValues()(0));
        energy += h.squaredNorm() / 10000.0;
    }
    CHECK(energy == Approx(1.0).epsilon(0.05));

    // Second moment against the closed form, for a ULA pair with fewer elements than M.
    Aism1Params q;
    q.m_t = 5;
    q.m_r = 5;
    q.omega_angle = staircase(5, 5);
    const CMatrix b_t = steering_matrix(SteeringModel::ula(3, 0.5), 5).entries;
    const CMatrix b_r = steering_matrix(SteeringModel::uca(4, 0.5), 5).entries;
    const auto s = aism1_sample(with_steering(q, b_t, b_r), 10000, 5);
    CHECK(relative_frobenius(full_correlation(s), aism1_second_moment(q.omega_angle, b_t, b_r)) < 0.10);

    CHECK_THROWS_MATCHES(with_steering(q, b_t, CMatrix::Zero(4, 7)), Error,
                         Catch::Matchers::Predicate<Error>([](const Error &e) { return code_is(e, Errc::ShapeMismatch); }));
}

TEST_CASE("eigen coupling fits", "[models]")
{
    SECTION("i.i.d. entries give flat coupling")
    {
        ChannelEnsemble e;
        for (std::uint64_t i = 0; i < 10000; ++i)
            e.realizations.push_back(gaussian_matrix(5, 5, 8, "iid", i));
        const auto p = fit_aism2(e);
        CHECK(p.coupling.lambda_t.maxCoeff() / p.coupling.lambda_t.minCoeff() < 1.2);
        const double mean = p.coupling.omega.mean();
        CHECK((p.coupling.omega.array() - mean).abs().maxCoeff() < 0.1 * mean);
        const auto w = fit_weichselberger(e);
        CHECK((w.coupling.omega.array() - mean).abs().maxCoeff() < 0.1 * mean);
    }
    SECTION("rank-one ensemble")
    {
        const CVector u = test::random_matrix(5, 1, 1).col(0);
        const CVector v = test::random_matrix(3, 1, 2).col(0);
        ChannelEnsemble e;
        e.realizations.assign(4, u * v.adjoint());
        const auto c = fit_eigen_coupling(e);
        CHECK(c.lambda_r(0) == Approx(u.squaredNorm() * v.squaredNorm()));
        CHECK(c.lambda_r.tail(4).cwiseAbs().maxCoeff() < 1e-9 * c.lambda_r(0));
        CHECK(c.lambda_t.tail(2).cwiseAbs().maxCoeff() < 1e-9 * c.lambda_t(0));
        CHECK(c.omega(0, 0) == Approx(u.norm() * v.norm()));
        CHECK(c.omega.sum() - c.omega(0, 0) < 1e-6 * c.omega(0, 0));
    }
    SECTION("marginals, unitarity and phase convention")
    {
        const auto e = realize_h0(expand_paths(table2_clusters(), 3), 9, 7, 500, 6);
        const auto c = fit_eigen_coupling(e);
        CHECK((c.u_t.adjoint() * c.u_t - CMatrix::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((c.u_r.adjoint() * c.u_r - CMatrix::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-9);
        const RMatrix sq = c.omega.cwiseAbs2();
        for (int i = 0; i < 7; ++i)
            CHECK(sq.row(i).sum() == Approx(c.lambda_r(i)).epsilon(1e-6).margin(1e-12));
        for (int j = 0; j < 9; ++j)
            CHECK(sq.col(j).sum() == Approx(c.lambda_t(j)).epsilon(1e-6).margin(1e-12));
        for (int k = 1; k < 9; ++k)
            CHECK(c.lambda_t(k) <= c.lambda_t(k - 1));
        for (int k = 0; k < 9; ++k)
        {
            Eigen::Index big = 0;
            c.u_t.col(k).cwiseAbs().maxCoeff(&big);
            CHECK(c.u_t(big, k).imag() == 0.0);
            CHECK(c.u_t(big, k).real() > 0.0);
        }
    }
}

TEST_CASE("AISM2 warns on short ensembles", "[models]")
{
    std::vector<std::string> seen;
    set_warning_handler([&](const std::string &m) { seen.push_back(m); });
    fit_aism2(realize_h0(expand_paths(table2_clusters(), 3), 9, 9, 50, 6));
    set_warning_handler([](const std::string &m) { std::cerr << "warning: " << m << '\n'; });
    REQUIRE(seen.size() == 1);
    CHECK(seen[0].find("50 realizations") != std::string::npos);
}

TEST_CASE("AISM2 and Weichselberger fit-sample round trips", "[models]")
{
    EigenCoupling truth;
    truth.omega = staircase(5, 3);
    truth.u_t = test::random_unitary(3, 10);
    truth.u_r = test::random_unitary(5, 11);
    ChannelEnsemble e;
    e.kind = EnsembleKind::ArrayIndependent;
    for (std::uint64_t i = 0; i < 10000; ++i)
        e.realizations.push_back(eigen_coupling_draw(truth, 12, "truth", i));

    const auto w = fit_weichselberger(e);
    CHECK(relative_frobenius(w.coupling.omega.cast<cd>(), truth.omega.cast<cd>()) < 0.10);
    const auto resampled = weichselberger_sample(w, 10000, 13);
    CMatrix rr_true = CMatrix::Zero(5, 5), rr_fit = CMatrix::Zero(5, 5);
    for (std::size_t i = 0; i < 10000; ++i)
    {
        rr_true += e.realizations[i] * e.realizations[i].adjoint() / 10000.0;
        rr_fit += resampled.realizations[i] * resampled.realizations[i].adjoint() / 10000.0;
    }
    CHECK(relative_frobenius(rr_fit, rr_true) < 0.10);

    // AISM2 on H0 draws: one-sided correlation of resampled H0 matches U_R Lambda_R U_R^H.
    const auto p = fit_aism2(e);
    const auto h0 = aism2_sample_h0(p, 10000, 14);
    CMatrix rr = CMatrix::Zero(5, 5);
    for (const auto &h : h0.realizations)
        rr += h * h.adjoint() / 10000.0;
    const CMatrix model = p.coupling.u_r * p.coupling.lambda_r.asDiagonal() * p.coupling.u_r.adjoint();
    CHECK(relative_frobenius(rr, model) < 0.10);

    ChannelEnsemble single;
    single.realizations.push_back(e.realizations[0]);
    const auto degenerate = fit_weichselberger(single);
    // One 5x3 draw: R_R = H H^H has rank 3, and both spectra carry the same energy.
    CHECK(degenerate.coupling.lambda_r.tail(2).maxCoeff() < 1e-9 * degenerate.coupling.lambda_r(0));
    CHECK(degenerate.coupling.lambda_r.sum() == Approx(degenerate.coupling.lambda_t.sum()).epsilon(1e-9));
}

TEST_CASE("AISM2 sampling through steering or sampling matrices", "[models]")
{
    const auto e = realize_h0(expand_paths(table2_clusters(), 3), 7, 7, 200, 1);
    const auto p = fit_aism2(e);
    const auto ula = SteeringModel::ula(5, 0.5);
    const auto uca = SteeringModel::uca(4, 0.5);
    const CMatrix b_t = steering_matrix(ula, 7).entries;
    const CMatrix b_r = steering_matrix(uca, 7).entries;
    const auto s = aism2_sample(with_steering(p, b_t, b_r), 20, 9);
    const auto g = aism2_sample_gamma(p, b_t * dft_matrix(7).adjoint(), b_r * dft_matrix(7).adjoint(), 20, 9);
    for (std::size_t i = 0; i < 20; ++i)
        CHECK(relative_frobenius(g.realizations[i], s.realizations[i]) < 1e-12);
    CHECK(s.rows() == 4);
    CHECK(s.cols() == 5);

    Aism2Params one_hot = p;
    one_hot.coupling.omega.setZero();
    one_hot.coupling.omega(2, 1) = 1.0;
    for (const auto &h : aism2_sample_h0(one_hot, 5, 1).realizations)
    {
        Eigen::JacobiSVD<CMatrix> svd(h);
        CHECK(svd.singularValues()(1) < 1e-12 * svd.singularValues()(0));
    }
    CHECK_THROWS_MATCHES(aism2_sample(p, 2, 1), Error,
                         Catch::Matchers::Predicate<Error>([](const Error &x) { return code_is(x, Errc::MissingSteering); }));
}

TEST_CASE("one array-independent fit serves several arrays", "[models]")
{
    const auto paths = expand_paths(table2_clusters(), 5);
    const auto a1 = fit_aism1_method1(paths, 19, 19);
    const auto a2 = fit_aism2(realize_h0(paths, 19, 19, 400, 2));
    for (const auto &model : {SteeringModel::ula(5, 0.2), SteeringModel::ula(5, 0.7), SteeringModel::uca(5, 0.5)})
    {
        const CMatrix b = steering_matrix(model, 19).entries;
        const auto h1 = normalize_ensemble(aism1_sample(with_steering(a1, b, b), 50, 3));
        const auto h2 = normalize_ensemble(aism2_sample(with_steering(a2, b, b), 50, 3));
        CHECK(h1.rows() == 5);
        CHECK(h2.mean_energy() == Approx(25.0));
        for (const auto &h : h1.realizations)
            CHECK(h.allFinite());
    }
}

TEST_CASE("conventional virtual baseline", "[models]")
{
    const auto ula = SteeringModel::ula(5, 0.5);
    const auto e = realize_h(test::single_path(0.0, 0.0), ula, ula, 20, 1);
    const auto p = fit_sayeed(e, ula, ula);
    CHECK(p.omega_v(2, 2) > 0.0);
    CHECK(p.omega_v.sum() - p.omega_v(2, 2) < 1e-9 * p.omega_v(2, 2));

    const auto t = realize_h(expand_paths(table2_clusters(), 1), ula, SteeringModel::ula(4, 0.5), 2000, 2);
    const auto fit = fit_sayeed(t, ula, SteeringModel::ula(4, 0.5));
    const auto s = sayeed_sample(fit, 10000, 3);
    RMatrix var = RMatrix::Zero(4, 5);
    for (const auto &h : s.realizations)
        var += (fit.a_r.adjoint() * h * fit.a_t).cwiseAbs2() / 10000.0;
    for (int q = 0; q < 4; ++q)
        for (int c = 0; c < 5; ++c)
            CHECK(var(q, c) == Approx(std::pow(fit.omega_v(q, c), 2)).epsilon(0.10).margin(1e-9));

    CHECK_THROWS_MATCHES(fit_sayeed(e, SteeringModel::uca(5, 0.5), ula), Error,
                         Catch::Matchers::Predicate<Error>([](const Error &x) { return code_is(x, Errc::NotUla); }));
}

TEST_CASE("model parameters serialize", "[models]")
{
    const auto paths = expand_paths(table2_clusters(), 5);
    const CMatrix b = steering_matrix(SteeringModel::ula(5, 0.5), 9).entries;
    const auto a1 = with_steering(fit_aism1_method1(paths, 9, 9), b, b);
    const auto j1 = nlohmann::json::parse(to_json(a1).dump());
    CHECK(j1["format"] == "aism/1");
    const auto back1 = aism1_from_json(j1);
    CHECK(back1.omega_angle == a1.omega_angle);
    CHECK(*back1.b_t == *a1.b_t);

    const auto a2 = fit_aism2(realize_h0(paths, 9, 9, 100, 2));
    const auto back2 = aism2_from_json(nlohmann::json::parse(to_json(a2).dump()));
    CHECK(back2.coupling.omega == a2.coupling.omega);
    CHECK(back2.coupling.u_r == a2.coupling.u_r);
    CHECK(back2.coupling.lambda_t == a2.coupling.lambda_t);
    CHECK_FALSE(back2.b_t.has_value());

    auto bad = to_json(a1);
    bad["format"] = "aism/0";
    CHECK_THROWS_MATCHES(aism1_from_json(bad), Error,
                         Catch::Matchers::Predicate<Error>([](const Error &x) { return code_is(x, Errc::Config); }));
    CHECK_THROWS_AS(aism2_from_json(to_json(a1)), Error);
    auto shape = to_json(a1);
    shape["m_t"] = 7;
    CHECK_THROWS_AS(aism1_from_json(shape), Error);
}
