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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mimo/experiment.hpp"

namespace mimo::presets
{

inline constexpr std::uint64_t kDefaultSeed = 1;

struct Options
{
    std::optional<fs::path> out_dir; // nothing is written when unset
    std::uint64_t seed = kDefaultSeed;
    double scale = 1.0; // multiplies realization counts
};

inline std::size_t scaled(std::size_t n, double scale)
{
    if (!(scale > 0.0))
        throw Error(Errc::Config, "scale must be positive");
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(n) * scale)));
}

namespace detail
{
inline std::optional<RunRecord> record(const Options &o)
{
    if (!o.out_dir)
        return std::nullopt;
    fs::create_directories(*o.out_dir);
    return RunRecord(*o.out_dir);
}

inline nlohmann::json echo(const std::string &name, const Options &o)
{
    return {{"preset", name}, {"seed", o.seed}, {"scale", o.scale}};
}

inline std::vector<double> spacing_grid()
{
    std::vector<double> r;
    for (int k = 2; k <= 20; ++k)
        r.push_back(k / 20.0);
    return r;
}

inline ExtractionSpec method1() { return ExtractionSpec{}; }

inline ExtractionSpec method2_uca(int m)
{
    ExtractionSpec x;
    x.method = Extraction::Method2;
    x.sounding_tx = SteeringModel::uca(m, 0.5);
    x.sounding_rx = SteeringModel::uca(m, 0.5);
    return x;
}
} // namespace detail

// ---------------------------------------------------------------------------

struct ImageResult
{
    RMatrix image; // normalized E|H_V|, rows receive, columns transmit
    std::vector<double> angles;
};

// Virtual power image of the three-cluster environment at M = 101 from 200 realizations.
// Path angles are redrawn per realization so the image shows the clusters' angular
// densities rather than one frozen set of 150 paths.
inline ImageResult fig3(const Options &o = {})
{
    constexpr int m = 101;
    auto rec = detail::record(o);
    const auto env = make_environment(table2_clusters(), o.seed, 0, true);
    const auto h0 = realize_h0(env.paths, m, m, scaled(200, o.scale), env.channel_seed, env.options);
    ImageResult r{virtual_power_image(h0, m, m), virtual_angles(m)};
    if (rec)
    {
        io::save_grid(rec->file("fig3_image.csv"), r.image, r.angles, r.angles, "phi_r\\phi_t");
        rec->seed("channel", env.channel_seed);
        rec->write_manifest(detail::echo("fig3", o));
    }
    return r;
}

struct ConditionCurves
{
    std::vector<double> spacings;
    std::vector<std::string> labels;         // one per curve
    std::vector<std::vector<double>> kappa; // kappa[curve][spacing]
};

inline void save_curves(const fs::path &path, const ConditionCurves &c)
{
    std::vector<std::string> header{"r"};
    header.insert(header.end(), c.labels.begin(), c.labels.end());
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < c.spacings.size(); ++i)
    {
        std::vector<std::string> row{format_fixed(c.spacings[i])};
        for (const auto &curve : c.kappa)
            row.push_back(format_fixed(curve[i]));
        rows.push_back(std::move(row));
    }
    io::save_table(path, header, rows);
}

inline ConditionCurves condition_curves(const std::vector<std::pair<SteeringFamily, int>> &curves,
                                        const std::vector<std::string> &labels)
{
    ConditionCurves out;
    out.spacings = detail::spacing_grid();
    out.labels = labels;
    for (const auto &[family, m] : curves)
    {
        std::vector<double> k;
        for (const auto &[r, kappa] : condition_sweep(family, out.spacings, m))
            k.push_back(kappa);
        out.kappa.push_back(std::move(k));
    }
    return out;
}

// kappa(B) versus spacing for a 5-element ULA at M = 5, 11 and 501.
inline ConditionCurves fig5(const Options &o = {})
{
    const SteeringFamily ula{ArrayKind::Ula, 5, kPi / 2};
    auto c = condition_curves({{ula, 5}, {ula, 11}, {ula, 501}}, {"kappa_m5", "kappa_m11", "kappa_m501"});
    if (auto rec = detail::record(o))
    {
        save_curves(rec->file("fig5_condition.csv"), c);
        rec->write_manifest(detail::echo("fig5", o));
    }
    return c;
}

// kappa(B) versus spacing for UCAs with N = 5, 9, 13, 19 at M = N and M = 501.
inline ConditionCurves fig6(const Options &o = {})
{
    std::vector<std::pair<SteeringFamily, int>> curves;
    std::vector<std::string> labels;
    for (int n : {5, 9, 13, 19})
    {
        const SteeringFamily uca{ArrayKind::Uca, n, 0.0};
        curves.push_back({uca, n});
        labels.push_back("kappa_n" + std::to_string(n) + "_m" + std::to_string(n));
        curves.push_back({uca, 501});
        labels.push_back("kappa_n" + std::to_string(n) + "_m501");
    }
    auto c = condition_curves(curves, labels);
    if (auto rec = detail::record(o))
    {
        save_curves(rec->file("fig6_condition.csv"), c);
        rec->write_manifest(detail::echo("fig6", o));
    }
    return c;
}

struct ScatterRow
{
    int scenario = 0;
    std::string model;
    double c_true = 0.0;
    double c_model = 0.0;
};

struct ScatterResult
{
    std::vector<ScatterRow> rows;
};

inline const std::vector<std::string> &fig7_models()
{
    static const std::vector<std::string> m{"aism1_m1", "aism2_m1", "aism1_m2", "aism2_m2", "weichselberger", "sayeed"};
    return m;
}

/*!
 * Ergodic capacity of each model against the true channel over 100 random environments.
 *
 * Targets are 5-element ULAs with r = 0.5 and M = 19. The second extraction method sounds
 * with 19-element UCAs (r = 0.5). 200 realizations per environment.
 */
inline ScatterResult fig7(const Options &o = {}, int scenarios = 100)
{
    constexpr int m = 19;
    const auto n = scaled(200, o.scale);
    const auto tx = SteeringModel::ula(5, 0.5);
    auto rec = detail::record(o);
    ScatterResult out;
    for (int s = 0; s < scenarios; ++s)
    {
        const auto idx = static_cast<std::uint64_t>(s);
        const auto clusters = generate_scenario(rng::derive_seed(o.seed, "scenario", idx));
        const auto env = make_environment(clusters, o.seed, idx);
        const double c_true = ergodic_capacity(true_ensemble(env, tx, tx, n), 20.0).ergodic;
        const auto fit1 = fit_environment(env, m, m, n, detail::method1());
        const auto fit2 = fit_environment(env, m, m, n, detail::method2_uca(m));
        auto add = [&](const std::string &label, const std::string &model, const EnvironmentFit &fit) {
            const auto e = model_ensemble(model, env, fit, tx, tx, n, n);
            out.rows.push_back({s, label, c_true, ergodic_capacity(e, 20.0).ergodic});
        };
        add("aism1_m1", "aism1", fit1);
        add("aism2_m1", "aism2", fit1);
        add("aism1_m2", "aism1", fit2);
        add("aism2_m2", "aism2", fit2);
        add("weichselberger", "weichselberger", fit1);
        add("sayeed", "sayeed", fit1);
    }
    if (rec)
    {
        std::vector<std::vector<std::string>> rows;
        for (const auto &r : out.rows)
            rows.push_back({std::to_string(r.scenario), r.model, format_fixed(r.c_true), format_fixed(r.c_model)});
        io::save_table(rec->file("fig7_scatter.csv"), {"scenario", "model", "c_true", "c_model"}, rows);
        rec->write_manifest(detail::echo("fig7", o));
    }
    return out;
}

struct ApsResult
{
    std::map<std::string, ApsGrid> aps; // keyed by model
};

inline const std::vector<std::string> &fig8_models()
{
    static const std::vector<std::string> m{"true", "sayeed", "aism1", "weichselberger", "aism2"};
    return m;
}

// Capon spectra of the three-cluster environment for 5-element ULAs (r = 0.5), 200 realizations.
inline ApsResult fig8(const Options &o = {})
{
    constexpr int m = 19;
    const auto n = scaled(200, o.scale);
    const auto tx = SteeringModel::ula(5, 0.5);
    auto rec = detail::record(o);
    const auto env = make_environment(table2_clusters(), o.seed);
    const auto fit = fit_environment(env, m, m, n, detail::method1());
    ApsResult out;
    for (const auto &model : fig8_models())
    {
        const auto e = model_ensemble(model, env, fit, tx, tx, n, n);
        out.aps[model] = capon_aps(e, tx, tx);
        if (rec)
            io::save_aps(rec->file("fig8_aps_" + model + ".csv"), out.aps[model]);
    }
    if (rec)
        rec->write_manifest(detail::echo("fig8", o));
    return out;
}

struct CdfSeries
{
    std::string config;
    std::string model;
    CapacityStats stats;
};

struct CdfResult
{
    std::vector<CdfSeries> series;

    const CapacityStats &at(const std::string &config, const std::string &model) const
    {
        for (const auto &s : series)
            if (s.config == config && s.model == model)
                return s.stats;
        throw Error(Errc::InvalidArgument, "no series " + config + "/" + model);
    }
};

struct ArrayConfig
{
    std::string label;
    SteeringModel model;
};

/*!
 * Capacity distributions of the three-cluster environment for several target arrays.
 *
 * AISM1 and AISM2 are fitted once (first extraction method, M = 19, 200 realizations)
 * and reused for every array. The baselines are refitted per array.
 */
inline CdfResult capacity_cdfs(const std::string &name, const std::vector<ArrayConfig> &arrays, const Options &o)
{
    constexpr int m = 19;
    const auto fit_n = scaled(200, o.scale);
    const auto eval_n = scaled(1000, o.scale);
    auto rec = detail::record(o);
    const auto env = make_environment(table2_clusters(), o.seed);
    const auto fit = fit_environment(env, m, m, fit_n, detail::method1());
    CdfResult out;
    std::vector<std::vector<std::string>> summary;
    for (const auto &a : arrays)
    {
        for (const std::string model : {"true", "aism1", "aism2", "weichselberger", "sayeed"})
        {
            if (model == "sayeed" && a.model.kind() != ArrayKind::Ula)
                continue;
            const auto stats = ergodic_capacity(model_ensemble(model, env, fit, a.model, a.model, fit_n, eval_n), 20.0);
            out.series.push_back({a.label, model, stats});
            summary.push_back({a.label, model, format_fixed(stats.ergodic), format_fixed(median(stats.per_realization))});
            if (rec)
                io::save_cdf(rec->file(name + "_cdf_" + a.label + "_" + model + ".csv"), stats);
        }
    }
    if (rec)
    {
        io::save_table(rec->file(name + "_summary.csv"), {"config", "model", "ergodic_capacity", "median_capacity"},
                       summary);
        rec->write_manifest(detail::echo(name, o));
    }
    return out;
}

// 5-element ULAs with r = 0.2 and r = 0.7.
inline CdfResult fig9(const Options &o = {})
{
    return capacity_cdfs("fig9", {{"ula_r0.2", SteeringModel::ula(5, 0.2)}, {"ula_r0.7", SteeringModel::ula(5, 0.7)}},
                         o);
}

// 5-element ULAs and UCAs with r = 0.5.
inline CdfResult fig10(const Options &o = {})
{
    return capacity_cdfs("fig10", {{"ula_r0.5", SteeringModel::ula(5, 0.5)}, {"uca_r0.5", SteeringModel::uca(5, 0.5)}},
                         o);
}

struct Table4Row
{
    std::string label;
    ConditionReport report;
};

inline std::vector<ArrayConfig> table4_arrays()
{
    return {{"ULA r=0.2", SteeringModel::ula(5, 0.2)},
            {"ULA r=0.7", SteeringModel::ula(5, 0.7)},
            {"ULA r=0.5", SteeringModel::ula(5, 0.5)},
            {"UCA r=0.5", SteeringModel::uca(5, 0.5)}};
}

// Steering-matrix and channel condition numbers with ergodic capacity of the true
// channel, M = 19, 1000 realizations, the same gains for every array.
inline std::vector<Table4Row> table4(const Options &o = {})
{
    constexpr int m = 19;
    const auto n = scaled(1000, o.scale);
    auto rec = detail::record(o);
    const auto env = make_environment(table2_clusters(), o.seed);
    std::vector<Table4Row> out;
    std::vector<std::vector<std::string>> rows;
    for (const auto &a : table4_arrays())
    {
        const auto e = true_ensemble(env, a.model, a.model, n);
        const CMatrix b = steering_matrix(a.model, m).entries;
        out.push_back({a.label, condition_report(e, b, b, 20.0)});
        const auto &r = out.back().report;
        rows.push_back({a.label, format_fixed(r.kappa_b_t), format_fixed(r.kappa_b_r), format_fixed(r.mean_kappa_h),
                        format_fixed(r.ergodic_capacity)});
    }
    if (rec)
    {
        io::save_table(rec->file("table4.csv"), {"label", "kappa_B_T", "kappa_B_R", "mean_kappa_H", "ergodic_capacity"},
                       rows);
        rec->write_manifest(detail::echo("table4", o));
    }
    return out;
}

inline const std::vector<std::string> &names()
{
    static const std::vector<std::string> n{"fig3", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "table4"};
    return n;
}

// Runs a preset by name; returns false for an unknown name.
inline bool run(const std::string &name, const Options &o)
{
    if (name == "fig3")
        fig3(o);
    else if (name == "fig5")
        fig5(o);
    else if (name == "fig6")
        fig6(o);
    else if (name == "fig7")
        fig7(o);
    else if (name == "fig8")
        fig8(o);
    else if (name == "fig9")
        fig9(o);
    else if (name == "fig10")
        fig10(o);
    else if (name == "table4")
        table4(o);
    else
        return false;
    return true;
}

} // namespace mimo::presets
