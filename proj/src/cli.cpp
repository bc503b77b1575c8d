// SPDX-License-Identifier: Apache-2.0
//
// mmic: multipath intra-cluster statistics toolkit for mmWave channels
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

#include "mmic/cli.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "mmic/clustering.hpp"
#include "mmic/fitting.hpp"
#include "mmic/ingest.hpp"
#include "mmic/rng.hpp"
#include "mmic/statistics.hpp"
#include "mmic/synthesis.hpp"
#include "mmic/types.hpp"

namespace mmic {

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ValidationError("cannot write file: " + path);
    out << content;
    if (!out)
        throw ValidationError("write failed: " + path);
}

// Index-parallel loop; worker count capped by the hardware, results must be
// written to per-index slots by the callers so scheduling cannot reorder
// anything observable.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const unsigned hw = std::thread::hardware_concurrency();
    const std::size_t workers = std::min<std::size_t>(n, hw ? hw : 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n)
                    return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t seed_flag) {
    if (seed_opt->count() > 0)
        return seed_flag;
    if (const char* env = std::getenv("MMIC_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ValidationError(std::string("MMIC_SEED is not a valid seed: ") + env);
        }
    }
    return 1;
}

int cmd_cluster(const std::string& input, const std::string& output, std::size_t kmax,
                double beta, std::size_t restarts, std::uint64_t seed) {
    const auto tables = parse_ray_csv(read_file(input));
    if (tables.empty())
        throw ValidationError("input contains no data rows: " + input);

    std::vector<ClusterSet> sets(tables.size());
    std::vector<std::vector<ClusterStats>> stats(tables.size());
    parallel_for(tables.size(), [&](std::size_t i) {
        ClusteringConfig config;
        config.beta = beta;
        config.k_max = kmax;
        config.restarts = restarts;
        config.rng_seed = derive_seed(seed, {static_cast<std::uint64_t>(i)});
        const KSelection sel = select_k(tables[i], config);
        sets[i] = sel.clusters;
        stats[i] = compute_cluster_stats(tables[i], sets[i]);
    });

    write_file(output, write_cluster_report(tables, sets, stats));
    return 0;
}

constexpr const char* kCharacteristics[] = {"m", "delay_spread", "az_spread", "el_spread"};

Eigen::ArrayXd positive_only(const Eigen::ArrayXd& samples) {
    std::vector<double> kept;
    kept.reserve(static_cast<std::size_t>(samples.size()));
    for (Eigen::Index i = 0; i < samples.size(); ++i)
        if (samples[i] > 0.0)
            kept.push_back(samples[i]);
    return Eigen::Map<const Eigen::ArrayXd>(kept.data(), static_cast<Eigen::Index>(kept.size()));
}

FitReportEntry fit_entry(const std::string& characteristic, ModelFamily family,
                         const Eigen::ArrayXd& all_samples, const Eigen::ArrayXd& fit_samples,
                         FittedModel (*fit)(const Eigen::ArrayXd&)) {
    FitReportEntry entry;
    entry.characteristic = characteristic;
    entry.family = family;
    entry.n_samples = static_cast<std::size_t>(fit_samples.size());
    entry.empirical_mean = all_samples.size() > 0 ? sample_mean(all_samples) : 0.0;
    entry.empirical_median = all_samples.size() > 0 ? sample_median(all_samples) : 0.0;
    try {
        entry.model = fit(fit_samples);
    } catch (const Error& e) {
        entry.error = e.what();
    }
    return entry;
}

int cmd_fit(const std::string& input, const std::string& output) {
    const ClusterReport report = parse_cluster_report(read_file(input));

    std::vector<std::vector<ClusterStats>> stats_per_location;
    stats_per_location.reserve(report.locations.size());
    for (const ReportLocation& loc : report.locations)
        stats_per_location.push_back(report_location_stats(loc));
    const PooledStats pooled = pool_stats(stats_per_location);

    if (pooled.subpath_counts.size() < 2)
        throw ValidationError("fit requires at least 2 pooled clusters, got " +
                              std::to_string(pooled.subpath_counts.size()));

    Eigen::ArrayXd n_clusters(static_cast<Eigen::Index>(pooled.clusters_per_location.size()));
    for (std::size_t i = 0; i < pooled.clusters_per_location.size(); ++i)
        n_clusters[static_cast<Eigen::Index>(i)] =
            static_cast<double>(pooled.clusters_per_location[i]);

    // Spread fits use strictly positive samples only; single-subpath clusters
    // report a zero spread that carries no information about the spread law.
    std::vector<FitReportEntry> entries;
    entries.push_back(fit_entry("n_clusters", ModelFamily::Constant, n_clusters, n_clusters,
                                &fit_constant));
    entries.push_back(fit_entry("m", ModelFamily::NegativeBinomial, pooled.subpath_counts,
                                pooled.subpath_counts, &fit_negative_binomial));
    entries.push_back(fit_entry("delay_spread", ModelFamily::Exponential, pooled.delay_spreads_s,
                                positive_only(pooled.delay_spreads_s), &fit_exponential));
    entries.push_back(fit_entry("az_spread", ModelFamily::Lognormal, pooled.aoa_az_spreads_deg,
                                positive_only(pooled.aoa_az_spreads_deg), &fit_lognormal));
    entries.push_back(fit_entry("el_spread", ModelFamily::Lognormal, pooled.aoa_el_spreads_deg,
                                positive_only(pooled.aoa_el_spreads_deg), &fit_lognormal));

    for (const FitReportEntry& e : entries)
        if (!e.error.empty())
            std::cerr << "fit failed for " << e.characteristic << ": " << e.error << "\n";

    write_file(output, write_fit_report(entries));
    return 0;
}

SynthesisProfile profile_from_fit_report(const std::string& text) {
    const auto entries = parse_fit_report(text);
    SynthesisProfile profile;
    std::vector<std::string> missing = {"n_clusters", "m", "delay_spread", "az_spread",
                                        "el_spread"};
    const auto take = [&](const std::string& name) {
        missing.erase(std::remove(missing.begin(), missing.end(), name), missing.end());
    };
    for (const FitReportEntry& e : entries) {
        if (!e.model)
            continue;
        if (e.characteristic == "n_clusters" && e.family == ModelFamily::Constant) {
            profile.n_clusters_model = *e.model;
            take("n_clusters");
        } else if (e.characteristic == "m" && e.family == ModelFamily::NegativeBinomial) {
            profile.subpath_count_model = *e.model;
            take("m");
        } else if (e.characteristic == "delay_spread" && e.family == ModelFamily::Exponential) {
            profile.delay_spread_model = *e.model;
            take("delay_spread");
        } else if (e.characteristic == "az_spread" && e.family == ModelFamily::Lognormal) {
            profile.aoa_az_spread_model = *e.model;
            take("az_spread");
        } else if (e.characteristic == "el_spread" && e.family == ModelFamily::Lognormal) {
            profile.aoa_el_spread_model = *e.model;
            take("el_spread");
        }
    }
    if (!missing.empty()) {
        std::string msg = "profile is incomplete, missing slots:";
        for (const std::string& m : missing)
            msg += " " + m;
        throw ValidationError(msg);
    }
    return profile;
}

int cmd_synth(const std::string& profile_path, const std::string& preset, std::size_t count,
              std::uint64_t seed, const std::string& output_dir) {
    SynthesisProfile profile;
    if (!profile_path.empty() && !preset.empty())
        throw ValidationError("give either --profile or --preset, not both");
    if (!profile_path.empty()) {
        profile = profile_from_fit_report(read_file(profile_path));
    } else if (preset == "raytracing") {
        profile = raytracing_preset();
    } else if (preset == "measurement") {
        profile = measurement_preset();
    } else if (preset.empty()) {
        throw ValidationError("one of --profile or --preset is required");
    } else {
        throw ValidationError("unknown preset: " + preset);
    }
    validate_profile(profile);

    fs::create_directories(output_dir);
    for (std::size_t i = 0; i < count; ++i) {
        profile.rng_seed = derive_seed(seed, {static_cast<std::uint64_t>(i)});
        const ChannelRealization realization = synthesize(profile);

        char name[32];
        std::snprintf(name, sizeof(name), "synth-%04zu", i);
        const RayTable table = realization_to_ray_table(realization, name);

        char base[48];
        std::snprintf(base, sizeof(base), "realization_%04zu", i);
        const fs::path csv_path = fs::path(output_dir) / (std::string(base) + ".csv");
        const fs::path json_path = fs::path(output_dir) / (std::string(base) + ".json");
        write_file(csv_path.string(), write_rays_csv({&table, 1}));
        write_file(json_path.string(), write_realization_sidecar(realization, name));
    }
    return 0;
}

int cmd_cdf(const std::string& input, const std::string& characteristic,
            const std::string& output) {
    bool known = false;
    for (const char* c : kCharacteristics)
        known = known || characteristic == c;
    if (!known)
        throw ValidationError("unknown characteristic: " + characteristic);

    const ClusterReport report = parse_cluster_report(read_file(input));
    std::vector<double> values;
    for (const ReportLocation& loc : report.locations) {
        for (const ReportCluster& rc : loc.clusters) {
            if (characteristic == "m")
                values.push_back(static_cast<double>(rc.stats.m));
            else if (characteristic == "delay_spread")
                values.push_back(rc.stats.rms_delay_spread_ns);
            else if (characteristic == "az_spread")
                values.push_back(rc.stats.aoa_az_spread_deg);
            else
                values.push_back(rc.stats.aoa_el_spread_deg);
        }
    }
    if (values.empty())
        throw ValidationError("report contains no clusters");

    const Eigen::Map<const Eigen::ArrayXd> samples(values.data(),
                                                   static_cast<Eigen::Index>(values.size()));
    write_file(output, write_cdf_csv(empirical_cdf(samples)));
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"mmic: cluster multipath ray tables, extract intra-cluster statistics,\n"
                 "fit their distributions and synthesize stochastic channel realizations"};
    app.require_subcommand(1);

    // cluster
    auto* cluster = app.add_subcommand(
        "cluster", "Cluster each receiver location of a rays CSV and write a report JSON");
    std::string cluster_input, cluster_output;
    std::size_t cluster_kmax = 10, cluster_restarts = 10;
    double cluster_beta = 10.0;
    std::uint64_t cluster_seed = 0;
    cluster->add_option("--input", cluster_input, "Input rays CSV")->required();
    cluster->add_option("--output", cluster_output, "Output cluster report JSON")->required();
    cluster->add_option("--kmax", cluster_kmax, "Largest candidate cluster count")
        ->default_val(10)
        ->check(CLI::PositiveNumber);
    cluster->add_option("--beta", cluster_beta, "Delay weight (ns vs deg) in the metric")
        ->default_val(10.0)
        ->check(CLI::PositiveNumber);
    cluster->add_option("--restarts", cluster_restarts, "Seeded runs per candidate count")
        ->default_val(10)
        ->check(CLI::PositiveNumber);
    auto* cluster_seed_opt =
        cluster->add_option("--seed", cluster_seed, "RNG seed (fallback: MMIC_SEED, then 1)");

    // fit
    auto* fit = app.add_subcommand(
        "fit", "Pool cluster statistics from a report and fit one model per characteristic");
    std::string fit_input, fit_output;
    fit->add_option("--input", fit_input, "Input cluster report JSON")->required();
    fit->add_option("--output", fit_output, "Output fit report JSON")->required();

    // synth
    auto* synth = app.add_subcommand(
        "synth", "Generate stochastic channel realizations as rays CSV + JSON sidecars");
    std::string synth_profile, synth_preset, synth_output;
    std::size_t synth_count = 1;
    std::uint64_t synth_seed = 0;
    synth->add_option("--profile", synth_profile, "Fit report JSON to draw parameters from");
    synth->add_option("--preset", synth_preset,
                      "Built-in parameter set: raytracing | measurement");
    synth->add_option("--count", synth_count, "Number of realizations")->default_val(1);
    auto* synth_seed_opt =
        synth->add_option("--seed", synth_seed, "RNG seed (fallback: MMIC_SEED, then 1)");
    synth->add_option("--output", synth_output, "Output directory")->required();

    // cdf
    auto* cdf = app.add_subcommand(
        "cdf", "Export the pooled empirical CDF of one characteristic as CSV");
    std::string cdf_input, cdf_characteristic, cdf_output;
    cdf->add_option("--input", cdf_input, "Input cluster report JSON")->required();
    cdf->add_option("--characteristic", cdf_characteristic,
                    "One of: m | delay_spread | az_spread | el_spread")
        ->required();
    cdf->add_option("--output", cdf_output, "Output CSV (value,probability)")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("mmic");
    for (const std::string& a : args)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cluster->parsed())
            return cmd_cluster(cluster_input, cluster_output, cluster_kmax, cluster_beta,
                               cluster_restarts, resolve_seed(cluster_seed_opt, cluster_seed));
        if (fit->parsed())
            return cmd_fit(fit_input, fit_output);
        if (synth->parsed())
            return cmd_synth(synth_profile, synth_preset, synth_count,
                             resolve_seed(synth_seed_opt, synth_seed), synth_output);
        if (cdf->parsed())
            return cmd_cdf(cdf_input, cdf_characteristic, cdf_output);
        std::cerr << "no subcommand given\n";
        return 2;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const FitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace mmic
