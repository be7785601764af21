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
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "mimo/arrays.hpp"
#include "mimo/core.hpp"
#include "mimo/metrics.hpp"
#include "mimo/models.hpp"
#include "mimo/scattering.hpp"

namespace mimo
{

namespace fs = std::filesystem;
using nlohmann::json;

struct ArraySpec
{
    ArrayKind kind = ArrayKind::Ula;
    int n_elements = 5;
    double spacing = 0.5;
    std::optional<double> orientation; // default pi/2 for ULA, 0 for UCA
    std::string file;                  // tabulated kind, relative to the config
    Interpolation interpolation = Interpolation::Linear;
};

enum class ScenarioSource
{
    Inline,
    File,
    Generator,
    Table2,
};

struct ScenarioSpec
{
    ScenarioSource source = ScenarioSource::Table2;
    std::vector<Cluster> clusters; // Inline
    std::string file;              // File
    ScenarioRange range;           // Generator
    std::optional<std::uint64_t> seed;
};

enum class Extraction
{
    Method1, // H0 from the path parameters
    Method2, // H0 from a sounding with square steering matrices
};

struct ExperimentConfig
{
    ArraySpec tx;
    ArraySpec rx;
    int m_t = 19;
    int m_r = 19;
    ScenarioSpec scenario;
    bool redraw_angles = false;
    std::vector<std::string> models{"true", "aism1", "aism2", "weichselberger", "sayeed"};
    Aism1Mode aism1_mode = Aism1Mode::ExactKernel;
    Extraction extraction = Extraction::Method1;
    ArraySpec sounding_tx{ArrayKind::Uca, 19, 0.5, std::nullopt, {}, Interpolation::Linear};
    ArraySpec sounding_rx{ArrayKind::Uca, 19, 0.5, std::nullopt, {}, Interpolation::Linear};
    double max_condition = 1e6;
    std::vector<std::string> metrics{"capacity", "cdf"};
    std::size_t fit_n = 200;
    std::size_t eval_n = 200;
    double snr_db = 20.0;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    int aps_grid_t = kDefaultApsGrid;
    int aps_grid_r = kDefaultApsGrid;
    double aps_loading = kDefaultLoading;
    fs::path base_dir = "."; // directory that relative paths resolve against; not serialized
};

inline const std::vector<std::string> &known_models()
{
    static const std::vector<std::string> m{"true", "aism1", "aism2", "weichselberger", "sayeed"};
    return m;
}

inline const std::vector<std::string> &known_metrics()
{
    static const std::vector<std::string> m{"capacity", "cdf", "aps", "cond", "vcr_image"};
    return m;
}

inline SteeringModel build_model(const ArraySpec &s, const fs::path &base_dir = ".")
{
    switch (s.kind)
    {
    case ArrayKind::Ula: return SteeringModel::ula(s.n_elements, s.spacing, s.orientation.value_or(kPi / 2));
    case ArrayKind::Uca: return SteeringModel::uca(s.n_elements, s.spacing, s.orientation.value_or(0.0));
    case ArrayKind::Tabulated:
    {
        auto table = load_steering_table((base_dir / s.file).string());
        table.scheme = s.interpolation;
        return SteeringModel::tabulated(std::move(table));
    }
    }
    throw Error(Errc::Config, "unknown array kind");
}

// ---------------------------------------------------------------------------
// Parsing with source locations.

namespace detail
{
// Best-effort line of a JSON pointer in the source text: walks the object keys of the
// pointer in order, so the reported line is the one holding the innermost key found.
inline std::size_t locate_line(const std::string &text, const std::string &pointer)
{
    std::size_t pos = 0;
    std::size_t found = std::string::npos;
    std::stringstream ss(pointer);
    std::string token;
    while (std::getline(ss, token, '/'))
    {
        if (token.empty() || std::all_of(token.begin(), token.end(), ::isdigit))
            continue;
        const auto at = text.find("\"" + token + "\"", pos);
        if (at == std::string::npos)
            break;
        found = at;
        pos = at + token.size() + 2;
    }
    if (found == std::string::npos)
        return 1;
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(found), '\n'));
}

class ConfigReader
{
  public:
    ConfigReader(std::string text, std::string name) : text_(std::move(text)), name_(std::move(name)) {}

    [[noreturn]] void fail(const std::string &pointer, const std::string &msg) const
    {
        throw Error(Errc::Config,
                    name_ + ":" + std::to_string(locate_line(text_, pointer)) + ": " + pointer + ": " + msg);
    }

    json parse() const
    {
        try
        {
            return json::parse(text_);
        }
        catch (const json::parse_error &e)
        {
            // e.byte is one past the offending character; at end of input, report the last content line.
            auto pos = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text_.size());
            if (pos == text_.size())
                while (pos > 0 && std::isspace(static_cast<unsigned char>(text_[pos - 1])))
                    --pos;
            const auto line = 1 + std::count(text_.begin(), text_.begin() + static_cast<long>(pos), '\n');
            throw Error(Errc::Config, name_ + ":" + std::to_string(line) + ": malformed JSON: " + e.what());
        }
    }

    template <class T>
    T get(const json &j, const std::string &pointer) const
    {
        try
        {
            return j.get<T>();
        }
        catch (const json::exception &)
        {
            fail(pointer, std::string("has the wrong type (expected ") + type_name<T>() + ")");
        }
    }

    double positive(const json &j, const std::string &pointer) const
    {
        const auto v = get<double>(j, pointer);
        if (!(v > 0.0))
            fail(pointer, "must be > 0");
        return v;
    }

    int odd(const json &j, const std::string &pointer) const
    {
        const auto v = get<int>(j, pointer);
        if (v < 1 || v % 2 == 0)
            fail(pointer, "must be a positive odd integer");
        return v;
    }

    void only_keys(const json &j, const std::string &pointer, std::initializer_list<const char *> keys) const
    {
        if (!j.is_object())
            fail(pointer, "must be an object");
        for (const auto &item : j.items())
            if (std::none_of(keys.begin(), keys.end(), [&](const char *k) { return item.key() == k; }))
                fail(pointer + "/" + item.key(), "unknown field");
    }

    const std::string &text() const noexcept { return text_; }

  private:
    template <class T>
    static const char *type_name()
    {
        if constexpr (std::is_same_v<T, double>)
            return "number";
        else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>)
            return "integer";
        else if constexpr (std::is_same_v<T, bool>)
            return "boolean";
        else if constexpr (std::is_same_v<T, std::string>)
            return "string";
        else
            return "value";
    }

    std::string text_;
    std::string name_;
};

inline ArraySpec parse_array(const ConfigReader &rd, const json &j, const std::string &ptr)
{
    rd.only_keys(j, ptr, {"kind", "n", "spacing", "orientation", "file", "interpolation"});
    ArraySpec s;
    if (!j.contains("kind"))
        rd.fail(ptr, "missing field 'kind'");
    const auto kind = rd.get<std::string>(j["kind"], ptr + "/kind");
    if (kind == "ula")
        s.kind = ArrayKind::Ula;
    else if (kind == "uca")
        s.kind = ArrayKind::Uca;
    else if (kind == "tabulated")
        s.kind = ArrayKind::Tabulated;
    else
        rd.fail(ptr + "/kind", "must be one of ula, uca, tabulated");

    if (s.kind == ArrayKind::Tabulated)
    {
        if (!j.contains("file"))
            rd.fail(ptr, "tabulated array needs 'file'");
        s.file = rd.get<std::string>(j["file"], ptr + "/file");
        if (j.contains("interpolation"))
        {
            const auto scheme = rd.get<std::string>(j["interpolation"], ptr + "/interpolation");
            if (scheme == "linear")
                s.interpolation = Interpolation::Linear;
            else if (scheme == "cubic")
                s.interpolation = Interpolation::CubicHermite;
            else
                rd.fail(ptr + "/interpolation", "must be linear or cubic");
        }
        return s;
    }
    if (!j.contains("n"))
        rd.fail(ptr, "missing field 'n'");
    s.n_elements = rd.get<int>(j["n"], ptr + "/n");
    if (s.n_elements < (s.kind == ArrayKind::Uca ? 2 : 1))
        rd.fail(ptr + "/n", s.kind == ArrayKind::Uca ? "must be >= 2" : "must be >= 1");
    if (j.contains("spacing"))
        s.spacing = rd.positive(j["spacing"], ptr + "/spacing");
    if (j.contains("orientation"))
        s.orientation = rd.get<double>(j["orientation"], ptr + "/orientation");
    return s;
}

inline Cluster parse_cluster(const ConfigReader &rd, const json &j, const std::string &ptr)
{
    rd.only_keys(j, ptr, {"center_t", "center_r", "spread_t", "spread_r", "n_paths", "power"});
    Cluster c;
    for (const char *k : {"center_t", "center_r"})
        if (!j.contains(k))
            rd.fail(ptr, std::string("missing field '") + k + "'");
    c.center_t = rd.get<double>(j["center_t"], ptr + "/center_t");
    c.center_r = rd.get<double>(j["center_r"], ptr + "/center_r");
    c.spread_t = j.contains("spread_t") ? rd.get<double>(j["spread_t"], ptr + "/spread_t") : 0.0;
    c.spread_r = j.contains("spread_r") ? rd.get<double>(j["spread_r"], ptr + "/spread_r") : 0.0;
    if (c.spread_t < 0.0)
        rd.fail(ptr + "/spread_t", "must be >= 0");
    if (c.spread_r < 0.0)
        rd.fail(ptr + "/spread_r", "must be >= 0");
    if (j.contains("n_paths"))
    {
        c.n_paths = rd.get<int>(j["n_paths"], ptr + "/n_paths");
        if (c.n_paths < 1)
            rd.fail(ptr + "/n_paths", "must be >= 1");
    }
    if (j.contains("power"))
        c.power = rd.positive(j["power"], ptr + "/power");
    return c;
}

inline std::vector<Cluster> parse_clusters(const ConfigReader &rd, const json &j, const std::string &ptr)
{
    if (!j.is_array() || j.empty())
        rd.fail(ptr, "must be a nonempty array of clusters");
    std::vector<Cluster> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(parse_cluster(rd, j[i], ptr + "/" + std::to_string(i)));
    return out;
}

inline ScenarioSpec parse_scenario(const ConfigReader &rd, const json &j, const std::string &ptr)
{
    rd.only_keys(j, ptr, {"clusters", "file", "generator", "preset", "seed"});
    ScenarioSpec s;
    const int sources = static_cast<int>(j.contains("clusters")) + static_cast<int>(j.contains("file")) +
                        static_cast<int>(j.contains("generator")) + static_cast<int>(j.contains("preset"));
    if (sources != 1)
        rd.fail(ptr, "needs exactly one of 'clusters', 'file', 'generator', 'preset'");
    if (j.contains("seed"))
        s.seed = rd.get<std::uint64_t>(j["seed"], ptr + "/seed");
    if (j.contains("clusters"))
    {
        s.source = ScenarioSource::Inline;
        s.clusters = parse_clusters(rd, j["clusters"], ptr + "/clusters");
    }
    else if (j.contains("file"))
    {
        s.source = ScenarioSource::File;
        s.file = rd.get<std::string>(j["file"], ptr + "/file");
    }
    else if (j.contains("generator"))
    {
        s.source = ScenarioSource::Generator;
        const auto &g = j["generator"];
        const std::string gp = ptr + "/generator";
        rd.only_keys(g, gp, {"min_clusters", "max_clusters", "paths_per_cluster"});
        if (g.contains("min_clusters"))
            s.range.min_clusters = rd.get<int>(g["min_clusters"], gp + "/min_clusters");
        if (g.contains("max_clusters"))
            s.range.max_clusters = rd.get<int>(g["max_clusters"], gp + "/max_clusters");
        if (g.contains("paths_per_cluster"))
            s.range.paths_per_cluster = rd.get<int>(g["paths_per_cluster"], gp + "/paths_per_cluster");
        if (s.range.min_clusters < 1 || s.range.max_clusters < s.range.min_clusters)
            rd.fail(gp, "cluster count range is empty");
        if (s.range.paths_per_cluster < 1)
            rd.fail(gp + "/paths_per_cluster", "must be >= 1");
    }
    else
    {
        if (rd.get<std::string>(j["preset"], ptr + "/preset") != "table2")
            rd.fail(ptr + "/preset", "only 'table2' is built in");
        s.source = ScenarioSource::Table2;
    }
    return s;
}

template <class T>
std::vector<std::string> parse_names(const ConfigReader &rd, const json &j, const std::string &ptr,
                                     const std::vector<std::string> &allowed)
{
    if (!j.is_array())
        rd.fail(ptr, "must be an array of names");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i)
    {
        const auto name = rd.get<std::string>(j[i], ptr + "/" + std::to_string(i));
        if (std::find(allowed.begin(), allowed.end(), name) == allowed.end())
            rd.fail(ptr + "/" + std::to_string(i), "unknown name '" + name + "'");
        if (std::find(out.begin(), out.end(), name) == out.end())
            out.push_back(name);
    }
    return out;
}
} // namespace detail

/*!
 * Parses and validates an experiment description.
 *
 * Errors carry the source name, line and JSON pointer of the offending field. Paths in
 * the config resolve against base_dir, which is also checked for referenced files.
 */
inline ExperimentConfig parse_config(const std::string &text, const std::string &name = "config",
                                     const fs::path &base_dir = ".")
{
    const detail::ConfigReader rd(text, name);
    const json j = rd.parse();
    rd.only_keys(j, "", {"arrays", "basis", "scenario", "redraw_angles", "models", "aism1_mode", "extraction",
                         "metrics", "realizations", "snr_db", "seed", "output_dir", "aps"});
    ExperimentConfig c;
    c.base_dir = base_dir;

    if (!j.contains("arrays"))
        rd.fail("", "missing field 'arrays'");
    rd.only_keys(j["arrays"], "/arrays", {"tx", "rx"});
    for (const char *end : {"tx", "rx"})
        if (!j["arrays"].contains(end))
            rd.fail("/arrays", std::string("missing field '") + end + "'");
    c.tx = detail::parse_array(rd, j["arrays"]["tx"], "/arrays/tx");
    c.rx = detail::parse_array(rd, j["arrays"]["rx"], "/arrays/rx");

    if (j.contains("basis"))
    {
        rd.only_keys(j["basis"], "/basis", {"m_t", "m_r"});
        if (j["basis"].contains("m_t"))
            c.m_t = rd.odd(j["basis"]["m_t"], "/basis/m_t");
        if (j["basis"].contains("m_r"))
            c.m_r = rd.odd(j["basis"]["m_r"], "/basis/m_r");
    }
    if (j.contains("scenario"))
        c.scenario = detail::parse_scenario(rd, j["scenario"], "/scenario");
    if (j.contains("redraw_angles"))
        c.redraw_angles = rd.get<bool>(j["redraw_angles"], "/redraw_angles");
    if (j.contains("models"))
        c.models = detail::parse_names<std::string>(rd, j["models"], "/models", known_models());
    if (j.contains("aism1_mode"))
    {
        const auto mode = rd.get<std::string>(j["aism1_mode"], "/aism1_mode");
        if (mode == "exact_kernel")
            c.aism1_mode = Aism1Mode::ExactKernel;
        else if (mode == "partition")
            c.aism1_mode = Aism1Mode::Partition;
        else
            rd.fail("/aism1_mode", "must be exact_kernel or partition");
    }
    if (j.contains("extraction"))
    {
        const auto &x = j["extraction"];
        rd.only_keys(x, "/extraction", {"method", "sounding", "max_condition"});
        const auto method = x.contains("method") ? rd.get<std::string>(x["method"], "/extraction/method")
                                                 : std::string("method1");
        if (method == "method1")
            c.extraction = Extraction::Method1;
        else if (method == "method2")
            c.extraction = Extraction::Method2;
        else
            rd.fail("/extraction/method", "must be method1 or method2");
        if (x.contains("sounding"))
        {
            rd.only_keys(x["sounding"], "/extraction/sounding", {"tx", "rx"});
            if (x["sounding"].contains("tx"))
                c.sounding_tx = detail::parse_array(rd, x["sounding"]["tx"], "/extraction/sounding/tx");
            if (x["sounding"].contains("rx"))
                c.sounding_rx = detail::parse_array(rd, x["sounding"]["rx"], "/extraction/sounding/rx");
        }
        if (x.contains("max_condition"))
            c.max_condition = rd.positive(x["max_condition"], "/extraction/max_condition");
    }
    if (j.contains("metrics"))
        c.metrics = detail::parse_names<std::string>(rd, j["metrics"], "/metrics", known_metrics());
    if (j.contains("realizations"))
    {
        const auto &r = j["realizations"];
        rd.only_keys(r, "/realizations", {"fit_n", "eval_n"});
        if (r.contains("fit_n"))
            c.fit_n = rd.get<std::size_t>(r["fit_n"], "/realizations/fit_n");
        if (r.contains("eval_n"))
            c.eval_n = rd.get<std::size_t>(r["eval_n"], "/realizations/eval_n");
        if (c.fit_n < 1)
            rd.fail("/realizations/fit_n", "must be >= 1");
        if (c.eval_n < 1)
            rd.fail("/realizations/eval_n", "must be >= 1");
    }
    if (j.contains("snr_db"))
        c.snr_db = rd.get<double>(j["snr_db"], "/snr_db");
    if (j.contains("seed"))
        c.seed = rd.get<std::uint64_t>(j["seed"], "/seed");
    if (j.contains("output_dir"))
        c.output_dir = rd.get<std::string>(j["output_dir"], "/output_dir");
    if (j.contains("aps"))
    {
        const auto &a = j["aps"];
        rd.only_keys(a, "/aps", {"grid_t", "grid_r", "loading"});
        if (a.contains("grid_t"))
            c.aps_grid_t = rd.get<int>(a["grid_t"], "/aps/grid_t");
        if (a.contains("grid_r"))
            c.aps_grid_r = rd.get<int>(a["grid_r"], "/aps/grid_r");
        if (c.aps_grid_t < 1)
            rd.fail("/aps/grid_t", "must be >= 1");
        if (c.aps_grid_r < 1)
            rd.fail("/aps/grid_r", "must be >= 1");
        if (a.contains("loading"))
        {
            c.aps_loading = rd.get<double>(a["loading"], "/aps/loading");
            if (c.aps_loading < 0.0)
                rd.fail("/aps/loading", "must be >= 0");
        }
    }

    // Cross-field checks.
    auto sayeed_ok = c.tx.kind == ArrayKind::Ula && c.rx.kind == ArrayKind::Ula;
    if (!sayeed_ok && !j.contains("models"))
        std::erase(c.models, std::string("sayeed"));
    if (!sayeed_ok && std::find(c.models.begin(), c.models.end(), "sayeed") != c.models.end())
        rd.fail("/models", "the 'sayeed' baseline needs ULAs at both ends");
    if (c.extraction == Extraction::Method2)
    {
        if (c.sounding_tx.kind != ArrayKind::Tabulated && c.sounding_tx.n_elements != c.m_t)
            rd.fail("/extraction/sounding/tx", "sounding array needs n = m_t");
        if (c.sounding_rx.kind != ArrayKind::Tabulated && c.sounding_rx.n_elements != c.m_r)
            rd.fail("/extraction/sounding/rx", "sounding array needs n = m_r");
    }
    for (const auto *spec : {&c.tx, &c.rx, &c.sounding_tx, &c.sounding_rx})
        if (spec->kind == ArrayKind::Tabulated && !fs::exists(base_dir / spec->file))
            rd.fail(spec == &c.tx ? "/arrays/tx/file" : spec == &c.rx ? "/arrays/rx/file" : "/extraction/sounding",
                    "file '" + spec->file + "' does not exist");
    if (c.scenario.source == ScenarioSource::File && !fs::exists(base_dir / c.scenario.file))
        rd.fail("/scenario/file", "file '" + c.scenario.file + "' does not exist");
    return c;
}

inline ExperimentConfig load_config(const fs::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::Io, "cannot open config '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const auto base = path.has_parent_path() ? path.parent_path() : fs::path(".");
    return parse_config(ss.str(), path.string(), base);
}

// ---------------------------------------------------------------------------
// Serialization back to the config schema.

inline json to_json(const ArraySpec &s)
{
    json j;
    switch (s.kind)
    {
    case ArrayKind::Ula: j["kind"] = "ula"; break;
    case ArrayKind::Uca: j["kind"] = "uca"; break;
    case ArrayKind::Tabulated:
        j["kind"] = "tabulated";
        j["file"] = s.file;
        j["interpolation"] = s.interpolation == Interpolation::Linear ? "linear" : "cubic";
        return j;
    }
    j["n"] = s.n_elements;
    j["spacing"] = s.spacing;
    if (s.orientation)
        j["orientation"] = *s.orientation;
    return j;
}

inline json to_json(const Cluster &c)
{
    return json{{"center_t", c.center_t}, {"center_r", c.center_r}, {"spread_t", c.spread_t},
                {"spread_r", c.spread_r}, {"n_paths", c.n_paths},   {"power", c.power}};
}

inline json to_json(const ExperimentConfig &c)
{
    json j;
    j["arrays"] = {{"tx", to_json(c.tx)}, {"rx", to_json(c.rx)}};
    j["basis"] = {{"m_t", c.m_t}, {"m_r", c.m_r}};
    json s;
    switch (c.scenario.source)
    {
    case ScenarioSource::Inline:
        s["clusters"] = json::array();
        for (const auto &cl : c.scenario.clusters)
            s["clusters"].push_back(to_json(cl));
        break;
    case ScenarioSource::File: s["file"] = c.scenario.file; break;
    case ScenarioSource::Generator:
        s["generator"] = {{"min_clusters", c.scenario.range.min_clusters},
                          {"max_clusters", c.scenario.range.max_clusters},
                          {"paths_per_cluster", c.scenario.range.paths_per_cluster}};
        break;
    case ScenarioSource::Table2: s["preset"] = "table2"; break;
    }
    if (c.scenario.seed)
        s["seed"] = *c.scenario.seed;
    j["scenario"] = s;
    j["redraw_angles"] = c.redraw_angles;
    j["models"] = c.models;
    j["aism1_mode"] = c.aism1_mode == Aism1Mode::ExactKernel ? "exact_kernel" : "partition";
    j["extraction"] = {{"method", c.extraction == Extraction::Method1 ? "method1" : "method2"},
                       {"sounding", {{"tx", to_json(c.sounding_tx)}, {"rx", to_json(c.sounding_rx)}}},
                       {"max_condition", c.max_condition}};
    j["metrics"] = c.metrics;
    j["realizations"] = {{"fit_n", c.fit_n}, {"eval_n", c.eval_n}};
    j["snr_db"] = c.snr_db;
    j["seed"] = c.seed;
    j["output_dir"] = c.output_dir;
    j["aps"] = {{"grid_t", c.aps_grid_t}, {"grid_r", c.aps_grid_r}, {"loading", c.aps_loading}};
    return j;
}

// Scenario file: {"clusters": [...], "seed": <optional>}.
inline std::vector<Cluster> load_scenario_file(const fs::path &path, std::optional<std::uint64_t> *seed = nullptr)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::Io, "cannot open scenario '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const detail::ConfigReader rd(ss.str(), path.string());
    const json j = rd.parse();
    rd.only_keys(j, "", {"clusters", "seed"});
    if (!j.contains("clusters"))
        rd.fail("", "missing field 'clusters'");
    if (seed && j.contains("seed"))
        *seed = rd.get<std::uint64_t>(j["seed"], "/seed");
    return detail::parse_clusters(rd, j["clusters"], "/clusters");
}

} // namespace mimo
