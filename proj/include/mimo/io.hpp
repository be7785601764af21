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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "mimo/arrays.hpp"
#include "mimo/core.hpp"
#include "mimo/ensemble.hpp"
#include "mimo/metrics.hpp"

namespace mimo::io
{

namespace fs = std::filesystem;
using mimo::detail::format_double;

// ---------------------------------------------------------------------------
// Matrix CSV: "# rows=<r> cols=<c> complex=<0|1>", then row-major values,
// re,im pairs for complex matrices, in shortest round-trip form.

inline void write_matrix(std::ostream &out, const CMatrix &m, bool complex = true)
{
    out << "# rows=" << m.rows() << " cols=" << m.cols() << " complex=" << (complex ? 1 : 0) << "\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r)
    {
        for (Eigen::Index c = 0; c < m.cols(); ++c)
        {
            if (c > 0)
                out << ",";
            out << format_double(m(r, c).real());
            if (complex)
                out << "," << format_double(m(r, c).imag());
        }
        out << "\n";
    }
}

inline void write_matrix(std::ostream &out, const RMatrix &m) { write_matrix(out, CMatrix(m.cast<cd>()), false); }

inline CMatrix read_matrix(std::istream &in, const std::string &name = "matrix")
{
    auto fail = [&](std::size_t line, const std::string &msg) {
        throw Error(Errc::Io, name + ":" + std::to_string(line) + ": " + msg);
    };
    std::string line;
    std::size_t line_no = 0;
    long rows = -1, cols = -1, complex = -1;
    while (std::getline(in, line))
    {
        ++line_no;
        const auto t = mimo::detail::trim(line);
        if (t.empty())
            continue;
        if (t.front() != '#')
            fail(line_no, "expected header '# rows=<r> cols=<c> complex=<0|1>'");
        std::istringstream ss(t.substr(1));
        std::string tok;
        while (ss >> tok)
        {
            const auto eq = tok.find('=');
            if (eq == std::string::npos)
                fail(line_no, "malformed header token '" + tok + "'");
            const auto key = tok.substr(0, eq);
            long v = 0;
            try
            {
                v = std::stol(tok.substr(eq + 1));
            }
            catch (const std::exception &)
            {
                fail(line_no, "header value for '" + key + "' is not an integer");
            }
            if (key == "rows")
                rows = v;
            else if (key == "cols")
                cols = v;
            else if (key == "complex")
                complex = v;
        }
        break;
    }
    if (rows < 0 || cols < 0 || (complex != 0 && complex != 1))
        fail(line_no, "header must define rows, cols and complex=0|1");
    const long per_row = complex ? 2 * cols : cols;
    CMatrix m(rows, cols);
    long r = 0;
    while (r < rows && std::getline(in, line))
    {
        ++line_no;
        const auto t = mimo::detail::trim(line);
        if (t.empty() || t.front() == '#')
            continue;
        const auto fields = mimo::detail::split_csv(t);
        if (static_cast<long>(fields.size()) != per_row)
            fail(line_no, "row " + std::to_string(r + 1) + " has " + std::to_string(fields.size()) +
                              " fields, expected " + std::to_string(per_row));
        for (long c = 0; c < cols; ++c)
        {
            try
            {
                if (complex)
                    m(r, c) = cd(mimo::detail::parse_double(fields[static_cast<std::size_t>(2 * c)], line_no, 2 * c + 1),
                                 mimo::detail::parse_double(fields[static_cast<std::size_t>(2 * c + 1)], line_no, 2 * c + 2));
                else
                    m(r, c) = cd(mimo::detail::parse_double(fields[static_cast<std::size_t>(c)], line_no, c + 1), 0.0);
            }
            catch (const Error &e)
            {
                throw Error(Errc::Io, name + ": " + std::string(e.what()).substr(4));
            }
        }
        ++r;
    }
    if (r != rows)
        fail(line_no, "expected " + std::to_string(rows) + " data rows, found " + std::to_string(r));
    return m;
}

inline std::ofstream open_out(const fs::path &path)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(Errc::Io, "cannot write '" + path.string() + "'");
    return out;
}

inline std::ifstream open_in(const fs::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::Io, "cannot open '" + path.string() + "'");
    return in;
}

inline void save_matrix(const fs::path &path, const CMatrix &m, bool complex = true)
{
    auto out = open_out(path);
    write_matrix(out, m, complex);
}

inline void save_matrix(const fs::path &path, const RMatrix &m)
{
    auto out = open_out(path);
    write_matrix(out, m);
}

inline CMatrix load_matrix(const fs::path &path)
{
    auto in = open_in(path);
    return read_matrix(in, path.string());
}

// ---------------------------------------------------------------------------
// Ensemble directory: index.json plus one matrix CSV per realization.

inline const char *kind_name(EnsembleKind k) { return k == EnsembleKind::Physical ? "physical" : "array_independent"; }

inline void save_ensemble(const fs::path &dir, const ChannelEnsemble &e)
{
    e.validate();
    fs::create_directories(dir);
    nlohmann::json index{{"kind", kind_name(e.kind)},
                         {"seed", e.seed},
                         {"normalization", e.normalization == Normalization::AverageEnergy ? "average_energy" : "none"},
                         {"rows", e.rows()},
                         {"cols", e.cols()}};
    auto files = nlohmann::json::array();
    const int width = std::max(3, static_cast<int>(std::to_string(e.size() - 1).size()));
    for (std::size_t i = 0; i < e.size(); ++i)
    {
        std::string n = std::to_string(i);
        n.insert(0, static_cast<std::size_t>(std::max(0, width - static_cast<int>(n.size()))), '0');
        const std::string file = "h_" + n + ".csv";
        save_matrix(dir / file, e.realizations[i]);
        files.push_back(file);
    }
    index["files"] = std::move(files);
    auto out = open_out(dir / "index.json");
    out << index.dump(2) << "\n";
}

inline ChannelEnsemble load_ensemble(const fs::path &dir)
{
    auto in = open_in(dir / "index.json");
    nlohmann::json index;
    try
    {
        in >> index;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw Error(Errc::Io, (dir / "index.json").string() + ": " + e.what());
    }
    ChannelEnsemble e;
    try
    {
        e.kind = index.at("kind") == "physical" ? EnsembleKind::Physical : EnsembleKind::ArrayIndependent;
        e.seed = index.value("seed", std::uint64_t{0});
        e.normalization =
            index.value("normalization", std::string("none")) == "average_energy" ? Normalization::AverageEnergy
                                                                                 : Normalization::None;
        for (const auto &f : index.at("files"))
        {
            const fs::path p = dir / f.get<std::string>();
            if (!fs::exists(p))
                throw Error(Errc::Io, "ensemble index references missing file '" + p.string() + "'");
            e.realizations.push_back(load_matrix(p));
        }
    }
    catch (const nlohmann::json::exception &ex)
    {
        throw Error(Errc::Io, (dir / "index.json").string() + ": " + ex.what());
    }
    e.validate();
    return e;
}

// ---------------------------------------------------------------------------
// Plot-ready tables.

// Real grid with a header row of column axis values and a leading column of row axis values.
inline void save_grid(const fs::path &path, const RMatrix &values, const std::vector<double> &row_axis,
                      const std::vector<double> &col_axis, const std::string &corner)
{
    if (static_cast<Eigen::Index>(row_axis.size()) != values.rows() ||
        static_cast<Eigen::Index>(col_axis.size()) != values.cols())
        throw Error(Errc::ShapeMismatch, "grid axes do not match the value grid");
    auto out = open_out(path);
    out << corner;
    for (double c : col_axis)
        out << "," << format_double(c);
    out << "\n";
    for (Eigen::Index r = 0; r < values.rows(); ++r)
    {
        out << format_double(row_axis[static_cast<std::size_t>(r)]);
        for (Eigen::Index c = 0; c < values.cols(); ++c)
            out << "," << format_double(values(r, c));
        out << "\n";
    }
}

inline void save_aps(const fs::path &path, const ApsGrid &aps)
{
    save_grid(path, aps.values, aps.axis_r, aps.axis_t, "phi_r\\phi_t");
}

inline void save_capacity(const fs::path &path, const CapacityStats &s)
{
    auto out = open_out(path);
    out << "realization_index,capacity_bits\n";
    for (std::size_t i = 0; i < s.per_realization.size(); ++i)
        out << i << "," << format_double(s.per_realization[i]) << "\n";
}

inline void save_cdf(const fs::path &path, const CapacityStats &s)
{
    auto out = open_out(path);
    out << "capacity_bits,empirical_cdf\n";
    const auto n = static_cast<double>(s.cdf.size());
    for (std::size_t i = 0; i < s.cdf.size(); ++i)
        out << format_double(s.cdf[i]) << "," << format_double(static_cast<double>(i + 1) / n) << "\n";
}

// Generic CSV with a header and rows of already-formatted fields.
inline void save_table(const fs::path &path, const std::vector<std::string> &header,
                       const std::vector<std::vector<std::string>> &rows)
{
    auto out = open_out(path);
    auto line = [&](const std::vector<std::string> &fields) {
        for (std::size_t i = 0; i < fields.size(); ++i)
            out << (i ? "," : "") << fields[i];
        out << "\n";
    };
    line(header);
    for (const auto &r : rows)
        line(r);
}

} // namespace mimo::io
