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

#include <cmath>
#include <complex>
#include <functional>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mimo
{

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Error kinds raised by the library. Every kind maps to one CLI exit class.
enum class Errc
{
    InvalidArgument,
    EvenM,
    EmptyTable,
    UnsortedTable,
    ZeroMatrix,
    GridTooCoarse,
    NonSquare,
    IllConditioned,
    ZeroChannel,
    EmptyRange,
    ZeroEnergy,
    ShapeMismatch,
    EmptyEnsemble,
    MissingSteering,
    NotUla,
    NonFinite,
    UnnormalizedEnsemble,
    SingularCorrelation,
    Config,
    Io,
};

inline const char *errc_name(Errc code)
{
    switch (code)
    {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::EvenM: return "EvenM";
    case Errc::EmptyTable: return "EmptyTable";
    case Errc::UnsortedTable: return "UnsortedTable";
    case Errc::ZeroMatrix: return "ZeroMatrix";
    case Errc::GridTooCoarse: return "GridTooCoarse";
    case Errc::NonSquare: return "NonSquare";
    case Errc::IllConditioned: return "IllConditioned";
    case Errc::ZeroChannel: return "ZeroChannel";
    case Errc::EmptyRange: return "EmptyRange";
    case Errc::ZeroEnergy: return "ZeroEnergy";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::EmptyEnsemble: return "EmptyEnsemble";
    case Errc::MissingSteering: return "MissingSteering";
    case Errc::NotUla: return "NotUla";
    case Errc::NonFinite: return "NonFinite";
    case Errc::UnnormalizedEnsemble: return "UnnormalizedEnsemble";
    case Errc::SingularCorrelation: return "SingularCorrelation";
    case Errc::Config: return "Config";
    case Errc::Io: return "Io";
    }
    return "Unknown";
}

class Error : public std::runtime_error
{
  public:
    Error(Errc code, const std::string &what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
    {
    }

    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

// Process exit status for an error kind: 2 config, 3 numerical, 4 I/O.
inline int exit_code_for(Errc code)
{
    switch (code)
    {
    case Errc::Config: return 2;
    case Errc::Io:
    case Errc::EmptyTable:
    case Errc::UnsortedTable: return 4;
    default: return 3;
    }
}

// Wraps an azimuth to [-pi, pi). Values already in range are returned unchanged.
inline double wrap_angle(double phi)
{
    if (phi >= -kPi && phi < kPi)
        return phi;
    double w = phi - kTwoPi * std::floor((phi + kPi) / kTwoPi);
    if (w >= kPi)
        w -= kTwoPi;
    if (w < -kPi)
        w = -kPi;
    return w;
}

inline void require_odd(int m, const char *what)
{
    if (m < 1 || m % 2 == 0)
        throw Error(Errc::EvenM, std::string(what) + " must be a positive odd integer, got " + std::to_string(m));
}

// Half width (M-1)/2 of the virtual index range -(M-1)/2 .. (M-1)/2.
inline int half_order(int m) { return (m - 1) / 2; }

// Virtual angles 2*pi*m/M for m = -(M-1)/2 .. (M-1)/2, ascending.
inline std::vector<double> virtual_angles(int m)
{
    require_odd(m, "number of virtual angles");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m));
    const int h = half_order(m);
    for (int k = -h; k <= h; ++k)
        out.push_back(kTwoPi * k / m);
    return out;
}

namespace detail
{
inline std::function<void(const std::string &)> &warning_handler()
{
    static std::function<void(const std::string &)> handler = [](const std::string &msg) {
        std::cerr << "warning: " << msg << '\n';
    };
    return handler;
}
} // namespace detail

// Replaces the sink for non-fatal diagnostics (stderr by default). Not thread-safe
// against concurrent warn() calls; install the handler before running work.
inline void set_warning_handler(std::function<void(const std::string &)> handler)
{
    detail::warning_handler() = std::move(handler);
}

inline void warn(const std::string &msg)
{
    if (detail::warning_handler())
        detail::warning_handler()(msg);
}

inline double relative_frobenius(const CMatrix &a, const CMatrix &reference)
{
    const double ref = reference.norm();
    return ref == 0.0 ? (a - reference).norm() : (a - reference).norm() / ref;
}

} // namespace mimo
