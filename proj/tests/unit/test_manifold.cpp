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

TEST_CASE("Fourier basis values and norms", "[manifold]")
{
    const FourierBasis d3(3);
    const CVector v = fourier_basis_eval(d3, 0.0);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(v(i) - cd(1.0 / std::sqrt(3.0), 0.0)) < 1e-15);
    CHECK(std::abs(d3(0.0).dot(d3(kTwoPi / 3))) < 1e-15);

    // Printed order: the first component carries the highest harmonic.
    const CVector w = FourierBasis(5)(0.3);
    CHECK(std::abs(w(0) - std::polar(1.0 / std::sqrt(5.0), 2 * 0.3)) < 1e-15);
    CHECK(std::abs(w(4) - std::polar(1.0 / std::sqrt(5.0), -2 * 0.3)) < 1e-15);

    for (int m : {1, 7, 19})
        for (double phi = -kPi; phi < kPi; phi += 0.1)
            CHECK(FourierBasis(m)(phi).norm() == Approx(1.0).margin(1e-14));
    CHECK_THROWS_AS(FourierBasis(4), Error);
}

TEST_CASE("DFT matrices are unitary with basis columns", "[manifold]")
{
    CHECK(std::abs(dft_matrix(1)(0, 0) - cd(1, 0)) < 1e-15);
    const CMatrix d = dft_matrix(19);
    CHECK((d.adjoint() * d - CMatrix::Identity(19, 19)).cwiseAbs().maxCoeff() < 1e-12);
    const CMatrix d3 = dft_matrix(3);
    CVector e0 = CVector::Zero(3);
    e0(1) = 1.0;
    CHECK((d3 * e0 - FourierBasis(3)(0.0)).norm() < 1e-15);
    CHECK_THROWS_MATCHES(dft_matrix(6), Error,
                         Catch::Matchers::Predicate<Error>([](const Error &e) { return e.code() == Errc::EvenM; }));
}

TEST_CASE("basis is orthonormal over the circle", "[manifold]")
{
    // (M / G) sum_g d d^H over a uniform grid is the grid form of (M/2pi) * integral.
    const int m = 11;
    const FourierBasis d(m);
    CMatrix acc = CMatrix::Zero(m, m);
    for (int g = 0; g < kDefaultGridSize; ++g)
    {
        const CVector v = d(-kPi + kTwoPi * g / kDefaultGridSize);
        acc += v * v.adjoint();
    }
    acc *= static_cast<double>(m) / kDefaultGridSize;
    CHECK((acc - CMatrix::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("sampling matrix of a basis-function array is a selection", "[manifold]")
{
    // Elements respond exactly as basis functions k = 1, 0, -2 of an M = 5 basis.
    const int m = 5;
    auto response = [](double phi) {
        CVector b(3);
        const double s = 1.0 / std::sqrt(5.0);
        b << std::polar(s, 1 * phi), std::polar(s, 0.0), std::polar(s, -2 * phi);
        return b;
    };
    const auto s = sampling_matrix(response, m, 256);
    CMatrix expected = CMatrix::Zero(3, m);
    expected(0, 1) = 1.0; // k = 1 sits at printed index 1
    expected(1, 2) = 1.0;
    expected(2, 4) = 1.0;
    CHECK((s.entries - expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(s.residual_sup < 1e-10);

    CHECK_THROWS_MATCHES(sampling_matrix(response, m, 19), Error, Catch::Matchers::Predicate<Error>([](const Error &e) {
                             return e.code() == Errc::GridTooCoarse;
                         }));
}

TEST_CASE("sampling residual of a five-element ULA", "[manifold]")
{
    const auto ula = SteeringModel::ula(5, 0.5);
    const auto s19 = sampling_matrix(ula, 19);
    const auto s5 = sampling_matrix(ula, 5);
    // Oracle values from an independent grid evaluation; the 19-term value agrees with
    // the Bessel-coefficient tail of the end elements.
    CHECK(s19.residual_sup == Approx(0.03133256409630325).epsilon(1e-6));
    CHECK(s5.residual_sup == Approx(1.9740693179505928).epsilon(1e-6));
    CHECK(s19.residual_sup * 10.0 < s5.residual_sup);

    // B = Gamma D up to the residual.
    const CMatrix b = steering_matrix(ula, 19).entries;
    const CMatrix gd = s19.entries * dft_matrix(19);
    CHECK((gd - b).cwiseAbs().maxCoeff() < s19.residual_sup + 1e-9);
}

TEST_CASE("sampling residual does not grow with M", "[manifold]")
{
    for (const auto &model : {SteeringModel::ula(5, 0.5), SteeringModel::ula(5, 1.0), SteeringModel::uca(5, 0.5),
                              SteeringModel::uca(8, 0.9)})
    {
        const int n = model.n_elements();
        std::vector<int> ladder{n | 1, 2 * n + 1, 4 * n + 3, 8 * n + 3};
        double prev = 1e300;
        for (int m : ladder)
        {
            const double r = sampling_matrix(model, m).residual_sup;
            CHECK(r <= prev + 1e-12);
            prev = r;
        }
    }
}

TEST_CASE("sampling matrix is independent of the worker count", "[manifold]")
{
    const auto model = SteeringModel::uca(7, 0.6);
    set_thread_count(1);
    const auto a = sampling_matrix(model, 21);
    set_thread_count(5);
    const auto b = sampling_matrix(model, 21);
    set_thread_count(0);
    CHECK(a.entries == b.entries);
    CHECK(a.residual_sup == b.residual_sup);
}

TEST_CASE("factorization round trip on representable channels", "[manifold]")
{
    const int n = 7;
    const CMatrix b_t = steering_matrix(SteeringModel::uca(n, 0.5), n).entries;
    const CMatrix b_r = steering_matrix(SteeringModel::uca(n, 0.4, 0.3), n).entries;
    const CMatrix h0 = test::random_matrix(n, n, 11);
    // H = B_R H_V B_T^H with H_V = D_R^H H0 D_T, i.e. Gamma = B D^H.
    const CMatrix d = dft_matrix(n);
    const CMatrix h = b_r * d.adjoint() * h0 * d * b_t.adjoint();
    CHECK(relative_frobenius(factorize_channel(h, b_t, b_r), h0) < 1e-9);

    const CMatrix g_t = gamma_from_steering(b_t);
    const CMatrix g_r = gamma_from_steering(b_r);
    CHECK(relative_frobenius(factorize_channel_gamma(h, g_t, g_r), h0) < 1e-9);
    CHECK(relative_frobenius(synthesize_channel(h0, g_t, g_r), h) < 1e-12);
    CHECK(reconstruction_residual(h, h0, g_t, g_r) < 1e-12);
}

TEST_CASE("factorization rejects unsuitable sounding arrays", "[manifold]")
{
    const CMatrix b5x19 = steering_matrix(SteeringModel::ula(5, 0.5), 19).entries;
    const CMatrix h = test::random_matrix(5, 5, 2);
    CHECK_THROWS_MATCHES(factorize_channel(h, b5x19, b5x19), Error,
                         Catch::Matchers::Predicate<Error>([](const Error &e) { return e.code() == Errc::NonSquare; }));
    // A five-element ULA at r = 0.1 is square but nearly singular.
    const CMatrix tight = steering_matrix(SteeringModel::ula(5, 0.1), 5).entries;
    FactorizeOptions opt;
    opt.max_condition = 1e3;
    CHECK_THROWS_MATCHES(factorize_channel(h, tight, tight, opt), Error, Catch::Matchers::Predicate<Error>([](const Error &e) {
                             return e.code() == Errc::IllConditioned;
                         }));
    CHECK_THROWS_MATCHES(reconstruction_residual(CMatrix::Zero(2, 2), CMatrix::Zero(3, 3), CMatrix::Zero(2, 3),
                                                 CMatrix::Zero(2, 3)),
                         Error,
                         Catch::Matchers::Predicate<Error>([](const Error &e) { return e.code() == Errc::ZeroChannel; }));
}

TEST_CASE("reconstruction residual of ULA channels", "[manifold]")
{
    const auto ula = SteeringModel::ula(5, 0.5);
    const auto paths = expand_paths(table2_clusters(), 4);
    const auto g19 = sampling_matrix(ula, 19).entries;
    const auto g5 = sampling_matrix(ula, 5).entries;
    const auto h = realize_h(paths, ula, ula, 200, 9);
    const auto h0_19 = realize_h0(paths, 19, 19, 200, 9);
    const auto h0_5 = realize_h0(paths, 5, 5, 200, 9);
    double worst19 = 0.0, mean5 = 0.0, mean19 = 0.0;
    for (std::size_t i = 0; i < 200; ++i)
    {
        const double r19 = reconstruction_residual(h.realizations[i], h0_19.realizations[i], g19, g19);
        worst19 = std::max(worst19, r19);
        mean19 += r19 / 200;
        mean5 += reconstruction_residual(h.realizations[i], h0_5.realizations[i], g5, g5) / 200;
    }
    CHECK(worst19 < 0.05);
    CHECK(mean5 > 10 * mean19);

    // A ULA sounding at M = N is either rejected or far off.
    const CMatrix b = steering_matrix(ula, 5).entries;
    double err = 0.0;
    try
    {
        for (std::size_t i = 0; i < 20; ++i)
            err = std::max(err, relative_frobenius(factorize_channel(h.realizations[i], b, b), h0_5.realizations[i]));
        CHECK(err > 0.05);
    }
    catch (const Error &e)
    {
        CHECK(e.code() == Errc::IllConditioned);
    }
}
