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

#include <sstream>

#include "support.hpp"

using namespace mimo;
using Catch::Approx;

TEST_CASE("ULA steering matches closed-form values", "[arrays]")
{
    const auto m3 = SteeringModel::ula(3, 0.5);
    const CVector b = m3(kPi / 2);
    CHECK(std::abs(b(0) - cd(-1, 0)) < 1e-12);
    CHECK(std::abs(b(1) - cd(1, 0)) < 1e-12);
    CHECK(std::abs(b(2) - cd(-1, 0)) < 1e-12);

    // cos(phi - phi0) = 0 gives the all-ones vector for any spacing.
    for (double r : {0.1, 0.5, 1.3})
    {
        const CVector ones = SteeringModel::ula(5, r, 0.4)(0.4 + kPi / 2);
        CHECK((ones - CVector::Ones(5)).cwiseAbs().maxCoeff() < 1e-12);
    }

    // Golden values from the scalar oracle script.
    const cd golden[5] = {{0.6661309236025276, -0.7458348293157431},
                          {-0.912724198102178, 0.40857623303214324},
                          {1.0, 0.0},
                          {-0.912724198102178, -0.40857623303214324},
                          {0.6661309236025276, 0.7458348293157431}};
    const CVector v = ula_steering(SteeringModel::ula(5, 0.5, kPi / 2), kPi / 3);
    for (int n = 0; n < 5; ++n)
        CHECK(std::abs(v(n) - golden[n]) < 1e-12);
}

TEST_CASE("UCA steering matches closed-form phases", "[arrays]")
{
    const auto model = SteeringModel::uca(4, 0.5, 0.0);
    const CVector b = uca_steering(model, 0.0);
    const double golden[4] = {-2.221441469079183, 0.0, 2.221441469079183, 0.0};
    for (int n = 0; n < 4; ++n)
        CHECK(std::abs(b(n) - std::polar(1.0, golden[n])) < 1e-12);

    // Rotating source and array together keeps the response.
    for (double off : {0.3, -1.1, 2.0})
    {
        const CVector a = SteeringModel::uca(7, 0.4, 0.2)(1.0);
        const CVector c = SteeringModel::uca(7, 0.4, 0.2 + off)(1.0 + off);
        CHECK((a - c).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("parametric responses have unit modulus and period 2 pi", "[arrays]")
{
    for (const auto &model : {SteeringModel::ula(5, 0.5), SteeringModel::ula(8, 0.2, 0.3), SteeringModel::uca(5, 0.5),
                              SteeringModel::uca(19, 0.7)})
    {
        for (double phi = -kPi; phi < kPi; phi += 0.0137)
        {
            const CVector b = model(phi);
            CHECK((b.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
            CHECK((b - model(phi + kTwoPi)).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("tabulated steering interpolates a sampled response", "[arrays]")
{
    const auto ula = SteeringModel::ula(5, 0.5);
    const auto model = SteeringModel::tabulated(sample_response(ula, 721));
    const auto *table = model.table();
    REQUIRE(table != nullptr);

    // Exact at samples.
    for (std::size_t k = 0; k < table->azimuths.size(); k += 37)
        CHECK((model(table->azimuths[k]) - table->responses[k]).cwiseAbs().maxCoeff() == 0.0);

    // Off-grid within the oracle tolerance, including the wrap interval.
    double worst = 0.0;
    for (double phi = -kPi + 0.001; phi < kPi; phi += 0.0071)
        worst = std::max(worst, (tabulated_steering(model, phi) - ula(phi)).cwiseAbs().maxCoeff());
    CHECK(worst < 1e-3);
    CHECK((model(kPi - 1e-4) - ula(kPi - 1e-4)).cwiseAbs().maxCoeff() < 1e-3);

    // Two-point table: the midpoint is the average.
    SteeringTable two;
    two.azimuths = {-1.0, 1.0};
    two.responses = {CVector::Constant(2, cd(1, 0)), CVector::Constant(2, cd(0, 1))};
    const CVector mid = SteeringModel::tabulated(two)(0.0);
    CHECK(std::abs(mid(0) - cd(0.5, 0.5)) < 1e-15);

    // The cubic scheme also reproduces samples and tracks the model closer.
    auto table_c = sample_response(ula, 721, Interpolation::CubicHermite);
    const auto cubic = SteeringModel::tabulated(table_c);
    double worst_c = 0.0;
    for (double phi = -kPi + 0.001; phi < kPi; phi += 0.0071)
        worst_c = std::max(worst_c, (cubic(phi) - ula(phi)).cwiseAbs().maxCoeff());
    CHECK(worst_c < worst);
}

TEST_CASE("tabulated steering rejects bad tables", "[arrays]")
{
    SteeringTable empty;
    CHECK_THROWS_MATCHES(SteeringModel::tabulated(empty), Error,
                         Catch::Matchers::Predicate<Error>([](const Error &e) { return e.code() == Errc::EmptyTable; }));
    SteeringTable unsorted;
    unsorted.azimuths = {0.5, 0.1};
    unsorted.responses = {CVector::Ones(2), CVector::Ones(2)};
    CHECK_THROWS_MATCHES(SteeringModel::tabulated(unsorted), Error, Catch::Matchers::Predicate<Error>([](const Error &e) {
                             return e.code() == Errc::UnsortedTable;
                         }));
}

TEST_CASE("steering matrix columns sit at the virtual angles", "[arrays]")
{
    const auto ula = SteeringModel::ula(5, 0.5);
    const auto b1 = steering_matrix(ula, 1);
    CHECK(b1.entries.cols() == 1);
    CHECK((b1.entries.col(0) - ula(0.0)).norm() < 1e-15);

    const auto b = steering_matrix(ula, 19);
    CHECK((b.entries.col(9) - CVector::Ones(5)).cwiseAbs().maxCoeff() < 1e-12);
    for (int c = 0; c < 19; ++c)
        CHECK((b.entries.col(c) - ula(kTwoPi * (c - 9) / 19)).norm() < 1e-15);

    CHECK_THROWS_MATCHES(steering_matrix(ula, 4), Error,
                         Catch::Matchers::Predicate<Error>([](const Error &e) { return e.code() == Errc::EvenM; }));

    // A tabulated model from a dense UCA scan reproduces the parametric steering matrix.
    const auto uca = SteeringModel::uca(5, 0.5);
    const auto dense = SteeringModel::tabulated(sample_response(uca, 3600));
    const CMatrix diff = steering_matrix(dense, 19).entries - steering_matrix(uca, 19).entries;
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("condition numbers of five-element arrays at M = 19", "[arrays]")
{
    CHECK(condition_number(steering_matrix(SteeringModel::ula(5, 0.5), 19)) == Approx(1.74).epsilon(0.05));
    CHECK(condition_number(steering_matrix(SteeringModel::ula(5, 0.2), 19)) == Approx(46.04).epsilon(0.05));
    CHECK(condition_number(steering_matrix(SteeringModel::uca(5, 0.5), 19)) == Approx(3.91).epsilon(0.05));
    CHECK(condition_number(test::random_unitary(6, 3)) == Approx(1.0).margin(1e-12));
    CHECK_THROWS_MATCHES(condition_number(CMatrix::Zero(3, 3)), Error,
                         Catch::Matchers::Predicate<Error>([](const Error &e) { return e.code() == Errc::ZeroMatrix; }));
}

TEST_CASE("condition number invariances", "[arrays]")
{
    const CMatrix b = steering_matrix(SteeringModel::ula(5, 0.3), 19).entries;
    const double k = condition_number(b);
    CHECK(k >= 1.0);
    CHECK(condition_number(CMatrix(b * std::polar(1.0, 0.77))) == Approx(k).epsilon(1e-9));
    CMatrix perm = b;
    for (int c = 0; c < 19; ++c)
        perm.col(c) = b.col((c * 7) % 19);
    CHECK(condition_number(perm) == Approx(k).epsilon(1e-9));

    // Orientation stops mattering once M is large.
    const double k0 = condition_number(steering_matrix(SteeringModel::ula(5, 0.5, 0.0), 41));
    const double k1 = condition_number(steering_matrix(SteeringModel::ula(5, 0.5, kPi / 2), 41));
    CHECK(k0 == Approx(k1).epsilon(0.01));

    // Well conditioned for r >= 0.5 and M >= 2N + 1.
    for (double r : {0.5, 0.6, 0.8, 1.0})
        for (int m : {11, 19, 41})
            CHECK(condition_number(steering_matrix(SteeringModel::ula(5, r), m)) < 5.0);
}

TEST_CASE("condition sweep over spacings", "[arrays]")
{
    const SteeringFamily ula{ArrayKind::Ula, 5, kPi / 2};
    const std::vector<double> one{0.5};
    CHECK(condition_sweep(ula, one, 11).size() == 1);
    const std::vector<double> rs{0.2, 0.5};
    const auto sweep = condition_sweep(ula, rs, 11);
    CHECK(sweep[0].second / sweep[1].second >= 10.0);
    const std::vector<double> bad{0.0};
    CHECK_THROWS_AS(condition_sweep(ula, bad, 11), Error);
}

TEST_CASE("steering table file round trip", "[arrays]")
{
    const auto table = sample_response(SteeringModel::uca(3, 0.5), 16);
    std::stringstream ss;
    write_steering_table(ss, table);
    const auto back = read_steering_table(ss);
    REQUIRE(back.azimuths.size() == table.azimuths.size());
    for (std::size_t k = 0; k < table.azimuths.size(); ++k)
    {
        CHECK(back.azimuths[k] == table.azimuths[k]);
        CHECK(back.responses[k] == table.responses[k]);
    }

    std::stringstream bad("# N=2\n0.0, 1, 0, 1\n");
    CHECK_THROWS_WITH(read_steering_table(bad), Catch::Matchers::ContainsSubstring("line 2"));
}
