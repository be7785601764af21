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
#include <charconv>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mimo/core.hpp"

namespace mimo
{

enum class ArrayKind
{
    Ula,
    Uca,
    Tabulated,
};

enum class Interpolation
{
    Linear,     // per-component linear on real and imaginary parts
    CubicHermite, // periodic cubic Hermite with finite-difference tangents
};

// Measured or simulated far-field response sampled over azimuth.
struct SteeringTable
{
    std::vector<double> azimuths;   // strictly increasing, within [-pi, pi)
    std::vector<CVector> responses; // one length-N vector per azimuth
    Interpolation scheme = Interpolation::Linear;
};

/*!
 * Array response b(phi) for a far-field source at azimuth phi.
 *
 * ULA and UCA kinds use isotropic unit-gain elements, so every component has unit
 * modulus. Spacing is normalized to wavelength. The tabulated kind interpolates a
 * sampled response with periodic wrap at +-pi and reproduces the samples exactly.
 *
 * Instances are immutable; copies share the underlying table.
 */
class SteeringModel
{
  public:
    static SteeringModel ula(int n_elements, double spacing, double orientation = kPi / 2)
    {
        if (n_elements < 1)
            throw Error(Errc::InvalidArgument, "ULA needs at least one element");
        if (!(spacing > 0.0))
            throw Error(Errc::InvalidArgument, "ULA spacing must be positive");
        return SteeringModel(ArrayKind::Ula, n_elements, spacing, wrap_angle(orientation), nullptr);
    }

    static SteeringModel uca(int n_elements, double spacing, double orientation = 0.0)
    {
        if (n_elements < 2)
            throw Error(Errc::InvalidArgument, "UCA needs at least two elements");
        if (!(spacing > 0.0))
            throw Error(Errc::InvalidArgument, "UCA spacing must be positive");
        return SteeringModel(ArrayKind::Uca, n_elements, spacing, wrap_angle(orientation), nullptr);
    }

    static SteeringModel tabulated(SteeringTable table)
    {
        if (table.azimuths.empty())
            throw Error(Errc::EmptyTable, "steering table has no samples");
        if (table.azimuths.size() != table.responses.size())
            throw Error(Errc::ShapeMismatch, "steering table has mismatched azimuth and response counts");
        for (std::size_t k = 0; k < table.azimuths.size(); ++k)
        {
            const double a = table.azimuths[k];
            if (!(a >= -kPi && a < kPi))
                throw Error(Errc::UnsortedTable, "steering table azimuth " + std::to_string(a) + " outside [-pi, pi)");
            if (k > 0 && !(a > table.azimuths[k - 1]))
                throw Error(Errc::UnsortedTable, "steering table azimuths must be strictly increasing (row " +
                                                     std::to_string(k + 1) + ")");
        }
        const auto n = table.responses.front().size();
        if (n < 1)
            throw Error(Errc::EmptyTable, "steering table responses are empty");
        for (const auto &r : table.responses)
            if (r.size() != n)
                throw Error(Errc::ShapeMismatch, "steering table responses differ in length");
        const int n_elements = static_cast<int>(n);
        return SteeringModel(ArrayKind::Tabulated, n_elements, 0.0, 0.0,
                             std::make_shared<const SteeringTable>(std::move(table)));
    }

    ArrayKind kind() const noexcept { return kind_; }
    int n_elements() const noexcept { return n_; }
    double spacing() const noexcept { return spacing_; }
    double orientation() const noexcept { return orientation_; }
    const SteeringTable *table() const noexcept { return table_.get(); }

    CVector operator()(double phi) const
    {
        switch (kind_)
        {
        case ArrayKind::Ula: return eval_ula(phi);
        case ArrayKind::Uca: return eval_uca(phi);
        case ArrayKind::Tabulated: return eval_table(phi);
        }
        return {};
    }

  private:
    SteeringModel(ArrayKind kind, int n, double spacing, double orientation, std::shared_ptr<const SteeringTable> table)
        : kind_(kind), n_(n), spacing_(spacing), orientation_(orientation), table_(std::move(table))
    {
    }

    CVector eval_ula(double phi) const
    {
        CVector b(n_);
        const double c = std::cos(phi - orientation_);
        for (int n = 0; n < n_; ++n)
            b(n) = std::polar(1.0, -kPi * (2.0 * n - (n_ - 1)) * spacing_ * c);
        return b;
    }

    // Element n sits at circle angle 2*pi*n/N; circumradius is spacing / (2 sin(pi/N)).
    CVector eval_uca(double phi) const
    {
        CVector b(n_);
        const double scale = kPi * spacing_ / std::sin(kPi / n_);
        for (int n = 0; n < n_; ++n)
            b(n) = std::polar(1.0, -scale * std::cos(phi - kTwoPi * n / n_ - orientation_));
        return b;
    }

    CVector eval_table(double phi) const
    {
        const auto &az = table_->azimuths;
        const auto &rs = table_->responses;
        const std::size_t count = az.size();
        if (count == 1)
            return rs.front();

        const double x = wrap_angle(phi);
        // Interval [lo, hi] with sample indices k0, k1; the last interval wraps through +-pi.
        const auto it = std::upper_bound(az.begin(), az.end(), x);
        std::size_t k0 = 0;
        double lo = 0.0;
        double hi = 0.0;
        if (it == az.begin())
        {
            k0 = count - 1;
            lo = az.back() - kTwoPi;
            hi = az.front();
        }
        else
        {
            k0 = static_cast<std::size_t>(it - az.begin()) - 1;
            lo = az[k0];
            hi = (k0 + 1 < count) ? az[k0 + 1] : az.front() + kTwoPi;
        }
        const std::size_t k1 = (k0 + 1) % count;
        const double h = hi - lo;
        const double t = (x - lo) / h;
        if (t == 0.0)
            return rs[k0];

        if (table_->scheme == Interpolation::Linear)
            return (1.0 - t) * rs[k0] + t * rs[k1];

        // Periodic cubic Hermite; tangents from centered differences on the wrapped grid.
        const std::size_t km = (k0 + count - 1) % count;
        const std::size_t k2 = (k1 + 1) % count;
        auto gap = [&](std::size_t a, std::size_t b) {
            double d = az[b] - az[a];
            return d <= 0.0 ? d + kTwoPi : d;
        };
        const double h_prev = gap(km, k0);
        const double h_next = gap(k1, k2);
        const CVector m0 = (rs[k1] - rs[km]) / (h_prev + h);
        const CVector m1 = (rs[k2] - rs[k0]) / (h + h_next);
        const double t2 = t * t;
        const double t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * rs[k0] + (t3 - 2 * t2 + t) * h * m0 + (-2 * t3 + 3 * t2) * rs[k1] +
               (t3 - t2) * h * m1;
    }

    ArrayKind kind_;
    int n_;
    double spacing_;
    double orientation_;
    std::shared_ptr<const SteeringTable> table_;
};

inline CVector ula_steering(const SteeringModel &model, double phi)
{
    if (model.kind() != ArrayKind::Ula)
        throw Error(Errc::InvalidArgument, "ula_steering needs a ULA model");
    return model(phi);
}

inline CVector uca_steering(const SteeringModel &model, double phi)
{
    if (model.kind() != ArrayKind::Uca)
        throw Error(Errc::InvalidArgument, "uca_steering needs a UCA model");
    return model(phi);
}

inline CVector tabulated_steering(const SteeringModel &model, double phi)
{
    if (model.kind() != ArrayKind::Tabulated)
        throw Error(Errc::InvalidArgument, "tabulated_steering needs a tabulated model");
    return model(phi);
}

// Samples any response on a uniform azimuth grid of `points` samples over [-pi, pi).
template <class Response>
SteeringTable sample_response(Response &&response, int points, Interpolation scheme = Interpolation::Linear)
{
    if (points < 1)
        throw Error(Errc::InvalidArgument, "sample count must be positive");
    SteeringTable table;
    table.scheme = scheme;
    table.azimuths.reserve(static_cast<std::size_t>(points));
    table.responses.reserve(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k)
    {
        const double phi = -kPi + kTwoPi * k / points;
        table.azimuths.push_back(phi);
        table.responses.push_back(response(phi));
    }
    return table;
}

struct SteeringMatrix
{
    CMatrix entries;                   // N x M
    std::vector<double> virtual_angles; // 2*pi*m/M, ascending m
    SteeringModel source;
};

// Columns are the response at the virtual angles 2*pi*m/M, m = -(M-1)/2 .. (M-1)/2.
template <class Response>
CMatrix steering_columns(Response &&response, int m)
{
    const auto angles = virtual_angles(m);
    CVector first = response(angles.front());
    CMatrix out(first.size(), m);
    out.col(0) = first;
    for (int c = 1; c < m; ++c)
        out.col(c) = response(angles[static_cast<std::size_t>(c)]);
    return out;
}

inline SteeringMatrix steering_matrix(const SteeringModel &model, int m)
{
    require_odd(m, "M");
    return SteeringMatrix{steering_columns(model, m), virtual_angles(m), model};
}

// Ratio of the largest to the smallest nonzero singular value. Singular values
// below sigma_max * 1e-12 count as zero.
inline double condition_number(const CMatrix &b)
{
    if (b.size() == 0)
        throw Error(Errc::ZeroMatrix, "empty matrix");
    const RVector s = Eigen::BDCSVD<CMatrix>(b).singularValues();
    const double smax = s(0);
    if (!(smax > 0.0))
        throw Error(Errc::ZeroMatrix, "condition number of a zero matrix");
    double smin = smax;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > smax * 1e-12)
            smin = std::min(smin, s(i));
    return smax / smin;
}

inline double condition_number(const SteeringMatrix &b) { return condition_number(b.entries); }

// A parametric array type with fixed element count and orientation, varied in spacing.
struct SteeringFamily
{
    ArrayKind kind = ArrayKind::Ula;
    int n_elements = 5;
    double orientation = kPi / 2;

    SteeringModel at(double spacing) const
    {
        switch (kind)
        {
        case ArrayKind::Ula: return SteeringModel::ula(n_elements, spacing, orientation);
        case ArrayKind::Uca: return SteeringModel::uca(n_elements, spacing, orientation);
        case ArrayKind::Tabulated: break;
        }
        throw Error(Errc::InvalidArgument, "spacing sweeps need a parametric array kind");
    }
};

inline std::vector<std::pair<double, double>> condition_sweep(const SteeringFamily &family,
                                                             std::span<const double> spacings, int m)
{
    if (spacings.empty())
        throw Error(Errc::InvalidArgument, "spacing grid is empty");
    std::vector<std::pair<double, double>> out;
    out.reserve(spacings.size());
    for (double r : spacings)
    {
        if (!(r > 0.0))
            throw Error(Errc::InvalidArgument, "spacing must be positive");
        out.emplace_back(r, condition_number(steering_matrix(family.at(r), m)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Tabulated array file: header "# N=<n>", then rows "phi, re_1, im_1, ..., re_N, im_N".

namespace detail
{
inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string &field, std::size_t line, std::size_t column)
{
    double v = 0.0;
    const char *first = field.data();
    const char *last = field.data() + field.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last)
        throw Error(Errc::Io, "line " + std::to_string(line) + ", field " + std::to_string(column) +
                                  ": cannot parse number '" + field + "'");
    return v;
}

inline std::vector<std::string> split_csv(const std::string &line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(trim(item));
    return out;
}

inline std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}
} // namespace detail

inline SteeringTable read_steering_table(std::istream &in)
{
    std::string line;
    std::size_t line_no = 0;
    int n = -1;
    SteeringTable table;
    while (std::getline(in, line))
    {
        ++line_no;
        const std::string t = detail::trim(line);
        if (t.empty())
            continue;
        if (t.front() == '#')
        {
            const auto pos = t.find("N=");
            if (pos != std::string::npos && n < 0)
                n = static_cast<int>(detail::parse_double(detail::trim(t.substr(pos + 2)), line_no, 1));
            continue;
        }
        if (n < 1)
            throw Error(Errc::Io, "line " + std::to_string(line_no) + ": missing '# N=<n>' header before data");
        const auto fields = detail::split_csv(t);
        if (fields.size() != static_cast<std::size_t>(1 + 2 * n))
            throw Error(Errc::Io, "line " + std::to_string(line_no) + ": expected " + std::to_string(1 + 2 * n) +
                                      " fields, found " + std::to_string(fields.size()));
        table.azimuths.push_back(detail::parse_double(fields[0], line_no, 1));
        CVector r(n);
        for (int k = 0; k < n; ++k)
        {
            const auto c = static_cast<std::size_t>(1 + 2 * k);
            r(k) = cd(detail::parse_double(fields[c], line_no, c + 1), detail::parse_double(fields[c + 1], line_no, c + 2));
        }
        table.responses.push_back(std::move(r));
    }
    if (table.azimuths.empty())
        throw Error(Errc::EmptyTable, "steering table file has no data rows");
    return table;
}

inline SteeringTable load_steering_table(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::Io, "cannot open steering table '" + path + "'");
    try
    {
        return read_steering_table(in);
    }
    catch (const Error &e)
    {
        throw Error(e.code(), path + ": " + e.what());
    }
}

inline void write_steering_table(std::ostream &out, const SteeringTable &table)
{
    const auto n = table.responses.empty() ? 0 : table.responses.front().size();
    out << "# N=" << n << "\n";
    for (std::size_t k = 0; k < table.azimuths.size(); ++k)
    {
        out << detail::format_double(table.azimuths[k]);
        for (Eigen::Index i = 0; i < table.responses[k].size(); ++i)
            out << ", " << detail::format_double(table.responses[k](i).real()) << ", "
                << detail::format_double(table.responses[k](i).imag());
        out << "\n";
    }
}

} // namespace mimo
