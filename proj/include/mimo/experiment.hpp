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

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "json.hpp"

#include "mimo/arrays.hpp"
#include "mimo/config.hpp"
#include "mimo/core.hpp"
#include "mimo/ensemble.hpp"
#include "mimo/io.hpp"
#include "mimo/manifold.hpp"
#include "mimo/metrics.hpp"
#include "mimo/models.hpp"
#include "mimo/rng.hpp"
#include "mimo/scattering.hpp"
#include "mimo/vcr.hpp"

namespace mimo
{

inline constexpr const char *kVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Output bookkeeping.

inline std::string sha256_file(const fs::path &path)
{
    auto in = io::open_in(path);
    EVP_MD_CTX *ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1)
    {
        EVP_MD_CTX_free(ctx);
        throw Error(Errc::Io, "SHA-256 initialization failed");
    }
    std::vector<char> buf(1 << 16);
    while (in)
    {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (in.gcount() > 0)
            EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    std::string hex;
    char byte[3];
    for (unsigned int i = 0; i < len; ++i)
    {
        std::snprintf(byte, sizeof(byte), "%02x", digest[i]);
        hex += byte;
    }
    return hex;
}

// Files written by one run plus stage wall times, for the manifest.
class RunRecord
{
  public:
    explicit RunRecord(fs::path dir) : dir_(std::move(dir)) {}

    const fs::path &dir() const noexcept { return dir_; }

    fs::path file(const std::string &name)
    {
        if (std::find(files_.begin(), files_.end(), name) == files_.end())
            files_.push_back(name);
        return dir_ / name;
    }

    template <class F>
    auto stage(const std::string &name, F &&f)
    {
        const auto t0 = std::chrono::steady_clock::now();
        auto finish = [&] {
            times_[name] += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        };
        try
        {
            if constexpr (std::is_void_v<decltype(f())>)
            {
                f();
                finish();
            }
            else
            {
                auto r = f();
                finish();
                return r;
            }
        }
        catch (const Error &e)
        {
            // Drop the kind prefix already carried by the code.
            std::string what = e.what();
            const std::string prefix = std::string(errc_name(e.code())) + ": ";
            if (what.rfind(prefix, 0) == 0)
                what.erase(0, prefix.size());
            throw Error(e.code(), "stage '" + name + "': " + what);
        }
    }

    void seed(const std::string &name, std::uint64_t value) { seeds_[name] = value; }

    // manifest.json: config echo, seeds, versions, wall times and a hash per output.
    void write_manifest(const nlohmann::json &echo) const
    {
        nlohmann::json m;
        m["tool"] = "mimo-manifold";
        m["version"] = kVersion;
        m["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                             std::to_string(EIGEN_MINOR_VERSION);
        m["config"] = echo;
        m["seeds"] = seeds_;
        m["wall_time_s"] = times_;
        auto outputs = nlohmann::json::array();
        std::string all;
        for (const auto &f : files_)
        {
            const auto digest = sha256_file(dir_ / f);
            outputs.push_back({{"file", f}, {"sha256", digest}, {"bytes", fs::file_size(dir_ / f)}});
            all += f + ":" + digest + "\n";
        }
        m["outputs"] = outputs;
        // Hash of the per-file hash list, so one value covers every output.
        const auto list = dir_ / ".manifest_hash_input";
        {
            auto out = io::open_out(list);
            out << all;
        }
        m["outputs_sha256"] = sha256_file(list);
        fs::remove(list);
        auto out = io::open_out(dir_ / "manifest.json");
        out << m.dump(2) << "\n";
    }

    const std::vector<std::string> &files() const noexcept { return files_; }

  private:
    fs::path dir_;
    std::vector<std::string> files_;
    std::map<std::string, std::uint64_t> seeds_;
    std::map<std::string, double> times_;
};

// ---------------------------------------------------------------------------
// Pipeline pieces shared by config runs and presets.

// One scattering environment with its stage seeds. `index` separates scenarios of a batch.
struct Environment
{
    PathSet paths;
    std::uint64_t channel_seed = 0; // gains of true channels and fit ensembles
    std::uint64_t sample_seed = 0;  // model draws
    RealizeOptions options;
};

inline Environment make_environment(const std::vector<Cluster> &clusters, std::uint64_t root_seed,
                                    std::uint64_t index = 0, bool redraw_angles = false)
{
    Environment env;
    env.paths = expand_paths(clusters, rng::derive_seed(root_seed, "paths", index));
    env.channel_seed = rng::derive_seed(root_seed, "channel", index);
    env.sample_seed = rng::derive_seed(root_seed, "sample", index);
    env.options.redraw_angles = redraw_angles;
    return env;
}

struct ExtractionSpec
{
    Extraction method = Extraction::Method1;
    std::optional<SteeringModel> sounding_tx;
    std::optional<SteeringModel> sounding_rx;
    double max_condition = 1e6;
    Aism1Mode aism1_mode = Aism1Mode::ExactKernel;
};

// Array-independent parameters of one environment.
struct EnvironmentFit
{
    Aism1Params aism1;
    Aism2Params aism2;
    ChannelEnsemble h0; // the ensemble the fit used
};

inline ChannelEnsemble sounded_h0(const Environment &env, int m_t, int m_r, std::size_t n, const ExtractionSpec &x)
{
    if (!x.sounding_tx || !x.sounding_rx)
        throw Error(Errc::MissingSteering, "second extraction method needs sounding arrays");
    const CMatrix b_t = steering_matrix(*x.sounding_tx, m_t).entries;
    const CMatrix b_r = steering_matrix(*x.sounding_rx, m_r).entries;
    FactorizeOptions opt;
    opt.max_condition = x.max_condition;
    // Gate once up front so an unsuitable sounding array fails before any work.
    detail::require_invertible(b_t, "transmit steering", opt.max_condition);
    detail::require_invertible(b_r, "receive steering", opt.max_condition);
    const auto sounding = realize_h(env.paths, *x.sounding_tx, *x.sounding_rx, n, env.channel_seed, env.options);
    ChannelEnsemble h0;
    h0.kind = EnsembleKind::ArrayIndependent;
    h0.seed = env.channel_seed;
    h0.realizations.resize(n);
    parallel_for(n, [&](std::size_t i) { h0.realizations[i] = factorize_channel(sounding.realizations[i], b_t, b_r, opt); });
    return h0;
}

inline EnvironmentFit fit_environment(const Environment &env, int m_t, int m_r, std::size_t fit_n,
                                      const ExtractionSpec &x)
{
    EnvironmentFit fit;
    if (x.method == Extraction::Method1)
    {
        fit.h0 = realize_h0(env.paths, m_t, m_r, fit_n, env.channel_seed, env.options);
        // Path parameters only describe the frozen geometry; with redrawn angles the
        // coupling comes from the ensemble instead.
        fit.aism1 = env.options.redraw_angles ? fit_aism1_from_ensemble(fit.h0)
                                              : fit_aism1_method1(env.paths, m_t, m_r, x.aism1_mode);
    }
    else
    {
        fit.h0 = sounded_h0(env, m_t, m_r, fit_n, x);
        fit.aism1 = fit_aism1_from_ensemble(fit.h0);
    }
    fit.aism2 = fit_aism2(fit.h0);
    return fit;
}

inline ChannelEnsemble true_ensemble(const Environment &env, const SteeringModel &tx, const SteeringModel &rx,
                                     std::size_t n)
{
    return normalize_ensemble(realize_h(env.paths, tx, rx, n, env.channel_seed, env.options));
}

// Normalized evaluation ensemble of one model for concrete target arrays. Array-dependent
// baselines are refitted here from `fit_n` physical realizations of the target arrays.
inline ChannelEnsemble model_ensemble(const std::string &model, const Environment &env, const EnvironmentFit &fit,
                                      const SteeringModel &tx, const SteeringModel &rx, std::size_t fit_n,
                                      std::size_t eval_n)
{
    if (model == "true")
        return true_ensemble(env, tx, rx, eval_n);
    if (model == "aism1")
    {
        const auto p = with_steering(fit.aism1, steering_matrix(tx, fit.aism1.m_t).entries,
                                     steering_matrix(rx, fit.aism1.m_r).entries);
        return normalize_ensemble(aism1_sample(p, eval_n, env.sample_seed));
    }
    if (model == "aism2")
    {
        const auto p = with_steering(fit.aism2, steering_matrix(tx, fit.aism2.m_t).entries,
                                     steering_matrix(rx, fit.aism2.m_r).entries);
        return normalize_ensemble(aism2_sample(p, eval_n, env.sample_seed));
    }
    const auto physical = realize_h(env.paths, tx, rx, fit_n, env.channel_seed, env.options);
    if (model == "weichselberger")
        return normalize_ensemble(weichselberger_sample(fit_weichselberger(physical), eval_n, env.sample_seed));
    if (model == "sayeed")
        return normalize_ensemble(sayeed_sample(fit_sayeed(physical, tx, rx), eval_n, env.sample_seed));
    throw Error(Errc::Config, "unknown model '" + model + "'");
}

inline std::string format_fixed(double v) { return mimo::detail::format_double(v); }

// ---------------------------------------------------------------------------
// Config-driven runs.

inline std::vector<Cluster> scenario_clusters(const ExperimentConfig &c)
{
    switch (c.scenario.source)
    {
    case ScenarioSource::Inline: return c.scenario.clusters;
    case ScenarioSource::File: return load_scenario_file(c.base_dir / c.scenario.file);
    case ScenarioSource::Generator:
        return generate_scenario(c.scenario.seed.value_or(rng::derive_seed(c.seed, "scenario")), c.scenario.range);
    case ScenarioSource::Table2: return table2_clusters();
    }
    return {};
}

struct RunResult
{
    fs::path output_dir;
    std::map<std::string, CapacityStats> capacity; // per model, when capacity-type metrics were requested
    std::vector<std::string> files;
};

inline bool has(const std::vector<std::string> &v, const std::string &x)
{
    return std::find(v.begin(), v.end(), x) != v.end();
}

/*!
 * Runs generate, realize, fit, sample and metrics for one config and writes CSVs plus
 * manifest.json into the output directory (relative to the config unless absolute).
 */
inline RunResult run_experiment(const ExperimentConfig &c, std::optional<fs::path> output_override = std::nullopt)
{
    const fs::path out_dir = output_override ? *output_override : c.base_dir / c.output_dir;
    RunRecord rec(out_dir);
    fs::create_directories(out_dir);

    const auto tx = rec.stage("arrays", [&] { return build_model(c.tx, c.base_dir); });
    const auto rx = rec.stage("arrays", [&] { return build_model(c.rx, c.base_dir); });
    const auto clusters = rec.stage("scenario", [&] { return scenario_clusters(c); });
    const auto env = rec.stage("scenario", [&] { return make_environment(clusters, c.seed, 0, c.redraw_angles); });
    rec.seed("root", c.seed);
    rec.seed("paths", rng::derive_seed(c.seed, "paths", 0));
    rec.seed("channel", env.channel_seed);
    rec.seed("sample", env.sample_seed);

    ExtractionSpec x;
    x.method = c.extraction;
    x.max_condition = c.max_condition;
    x.aism1_mode = c.aism1_mode;
    if (c.extraction == Extraction::Method2)
    {
        x.sounding_tx = build_model(c.sounding_tx, c.base_dir);
        x.sounding_rx = build_model(c.sounding_rx, c.base_dir);
    }
    const bool needs_fit = has(c.models, "aism1") || has(c.models, "aism2") || has(c.metrics, "vcr_image");
    EnvironmentFit fit;
    if (needs_fit)
        fit = rec.stage("fit", [&] { return fit_environment(env, c.m_t, c.m_r, c.fit_n, x); });

    RunResult result;
    result.output_dir = out_dir;
    std::vector<std::vector<std::string>> summary;
    std::vector<std::vector<std::string>> cond_rows;
    const CMatrix b_t = steering_matrix(tx, c.m_t).entries;
    const CMatrix b_r = steering_matrix(rx, c.m_r).entries;
    for (const auto &model : c.models)
    {
        const auto e = rec.stage("sample:" + model, [&] {
            return model_ensemble(model, env, fit, tx, rx, c.fit_n, c.eval_n);
        });
        rec.stage("metrics:" + model, [&] {
            const auto stats = ergodic_capacity(e, c.snr_db);
            summary.push_back({model, format_fixed(stats.ergodic), format_fixed(median(stats.per_realization))});
            if (has(c.metrics, "capacity"))
                io::save_capacity(rec.file("capacity_" + model + ".csv"), stats);
            if (has(c.metrics, "cdf"))
                io::save_cdf(rec.file("cdf_" + model + ".csv"), stats);
            if (has(c.metrics, "aps"))
                io::save_aps(rec.file("aps_" + model + ".csv"),
                             capon_aps(e, tx, rx, uniform_grid(c.aps_grid_t), uniform_grid(c.aps_grid_r),
                                       c.aps_loading));
            if (has(c.metrics, "cond"))
            {
                const auto r = condition_report(e, b_t, b_r, c.snr_db);
                cond_rows.push_back({model, format_fixed(r.kappa_b_t), format_fixed(r.kappa_b_r),
                                     format_fixed(r.mean_kappa_h), format_fixed(r.ergodic_capacity)});
            }
            result.capacity[model] = stats;
        });
    }
    io::save_table(rec.file("summary.csv"), {"model", "ergodic_capacity", "median_capacity"}, summary);
    if (has(c.metrics, "cond"))
        io::save_table(rec.file("cond.csv"), {"label", "kappa_B_T", "kappa_B_R", "mean_kappa_H", "ergodic_capacity"},
                       cond_rows);
    if (has(c.metrics, "vcr_image"))
        rec.stage("vcr_image", [&] {
            io::save_grid(rec.file("vcr_image.csv"), virtual_power_image(fit.h0, c.m_t, c.m_r), virtual_angles(c.m_r),
                          virtual_angles(c.m_t), "phi_r\\phi_t");
        });
    rec.write_manifest(to_json(c));
    result.files = rec.files();
    return result;
}

} // namespace mimo
