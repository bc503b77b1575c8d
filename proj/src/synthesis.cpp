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

#include "mmic/synthesis.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "json.hpp"
#include "mmic/fitting.hpp"
#include "mmic/rng.hpp"

namespace mmic {

void validate_profile(const SynthesisProfile& profile) {
    if (profile.n_clusters_model.family != ModelFamily::Constant)
        throw ValidationError("profile: n_clusters_model must be Constant");
    if (profile.subpath_count_model.family != ModelFamily::NegativeBinomial)
        throw ValidationError("profile: subpath_count_model must be NegativeBinomial");
    if (profile.delay_spread_model.family != ModelFamily::Exponential)
        throw ValidationError("profile: delay_spread_model must be Exponential");
    if (profile.aoa_az_spread_model.family != ModelFamily::Lognormal)
        throw ValidationError("profile: aoa_az_spread_model must be Lognormal");
    if (profile.aoa_el_spread_model.family != ModelFamily::Lognormal)
        throw ValidationError("profile: aoa_el_spread_model must be Lognormal");
}

SynthesisProfile raytracing_preset(std::uint64_t rng_seed) {
    SynthesisProfile p;
    p.n_clusters_model = make_constant_model(2.0);
    p.subpath_count_model = make_negative_binomial_model(0.18, 2.63);
    p.delay_spread_model = make_exponential_model(2.42e7);
    p.aoa_az_spread_model = make_lognormal_model(2.67, 1.84);
    p.aoa_el_spread_model = make_lognormal_model(1.38, 0.77);
    p.rng_seed = rng_seed;
    return p;
}

SynthesisProfile measurement_preset(std::uint64_t rng_seed) {
    SynthesisProfile p;
    p.n_clusters_model = make_constant_model(3.0);
    p.subpath_count_model = make_negative_binomial_model(0.06, 1.96);
    p.delay_spread_model = make_exponential_model(2.62e7);
    p.aoa_az_spread_model = make_lognormal_model(3.18, 0.82);
    p.aoa_el_spread_model = make_lognormal_model(1.70, 0.63);
    p.rng_seed = rng_seed;
    return p;
}

namespace {

double population_std(const std::vector<double>& v, double mean) {
    double acc = 0.0;
    for (double x : v)
        acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(v.size()));
}

double mean_of(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v)
        acc += x;
    return acc / static_cast<double>(v.size());
}

// Zero-mean offsets with population std exactly equal to `target`, each
// offset strictly inside [-bound, bound] (azimuth: one circular branch;
// elevation: the [-90, 90] headroom around the anchor). Offset vectors that
// break the bound are redrawn; a target too large to ever fit is itself
// redrawn from `redraw_target` after 256 attempts.
template <typename DrawTarget>
std::vector<double> angular_offsets(std::size_t m, double& target, double bound, Rng& rng,
                                    DrawTarget&& redraw_target) {
    std::vector<double> offsets(m, 0.0);
    if (m < 2)
        return offsets;
    if (!(bound > 0.0))
        throw ValidationError("synthesize: anchor leaves no room for angular offsets");
    for (int attempt = 0;; ++attempt) {
        if (attempt == 256) {
            target = redraw_target();
            attempt = 0;
        }
        for (double& o : offsets)
            o = rng.normal();
        const double mean = mean_of(offsets);
        const double sd = population_std(offsets, mean);
        if (!(sd > 0.0))
            continue;
        const double scale = target / sd;
        bool ok = true;
        for (double& o : offsets) {
            o = (o - mean) * scale;
            ok = ok && std::fabs(o) < bound;
        }
        if (ok)
            return offsets;
    }
}

// Nonnegative delay offsets whose population std equals `target` exactly;
// the smallest offset is 0 so delays stay anchored.
std::vector<double> delay_offsets(std::size_t m, double target, Rng& rng) {
    std::vector<double> offsets(m, 0.0);
    if (m < 2)
        return offsets;
    for (;;) {
        for (double& o : offsets)
            o = rng.exponential(1.0);
        double lo = offsets[0];
        for (double o : offsets)
            lo = std::min(lo, o);
        const double mean = mean_of(offsets);
        const double sd = population_std(offsets, mean);
        if (!(sd > 0.0))
            continue;
        const double scale = target / sd;
        for (double& o : offsets)
            o = (o - lo) * scale;
        return offsets;
    }
}

long long draw_count_at_least_one(const FittedModel& model, Rng& rng) {
    for (;;) {
        const long long m = static_cast<long long>(sample_model(model, rng));
        if (m >= 1)
            return m;
    }
}

}  // namespace

ChannelRealization synthesize(const SynthesisProfile& profile) {
    validate_profile(profile);
    const double n_value = constant_params(profile.n_clusters_model).value;
    const long long n_clusters = std::llround(n_value);
    if (n_clusters < 1)
        throw ValidationError("synthesize: cluster count model value must be >= 1");

    if (profile.cluster_anchor_delays_s &&
        profile.cluster_anchor_delays_s->size() < static_cast<std::size_t>(n_clusters))
        throw ValidationError("synthesize: anchor delay list shorter than sampled cluster count");
    if (profile.cluster_anchor_angles_deg &&
        profile.cluster_anchor_angles_deg->size() < static_cast<std::size_t>(n_clusters))
        throw ValidationError("synthesize: anchor angle list shorter than sampled cluster count");

    Rng rng(mix64(profile.rng_seed));
    ChannelRealization realization;
    realization.clusters.reserve(static_cast<std::size_t>(n_clusters));

    for (long long n = 0; n < n_clusters; ++n) {
        SynthCluster cluster;
        if (profile.cluster_anchor_delays_s) {
            cluster.anchor_delay_s = (*profile.cluster_anchor_delays_s)[n];
        } else {
            cluster.anchor_delay_s = static_cast<double>(n) * 100e-9;
        }
        if (profile.cluster_anchor_angles_deg) {
            cluster.anchor_aoa_az_deg = (*profile.cluster_anchor_angles_deg)[n].first;
            cluster.anchor_aoa_el_deg = (*profile.cluster_anchor_angles_deg)[n].second;
        } else {
            cluster.anchor_aoa_az_deg = rng.uniform(-60.0, 60.0);
            cluster.anchor_aoa_el_deg = 0.0;
        }

        const long long m = draw_count_at_least_one(profile.subpath_count_model, rng);
        const std::size_t mm = static_cast<std::size_t>(m);

        cluster.target_delay_spread_s = sample_model(profile.delay_spread_model, rng);
        cluster.target_aoa_az_spread_deg = sample_model(profile.aoa_az_spread_model, rng);
        cluster.target_aoa_el_spread_deg = sample_model(profile.aoa_el_spread_model, rng);
        cluster.spread_realizable = mm >= 2;

        const auto delays = delay_offsets(mm, cluster.target_delay_spread_s, rng);
        const double el_headroom =
            90.0 - std::fabs(cluster.anchor_aoa_el_deg);  // stay inside [-90, 90]
        auto az_offsets = angular_offsets(mm, cluster.target_aoa_az_spread_deg, 180.0, rng,
                                          [&] { return sample_model(profile.aoa_az_spread_model, rng); });
        auto el_offsets = angular_offsets(mm, cluster.target_aoa_el_spread_deg, el_headroom, rng,
                                          [&] { return sample_model(profile.aoa_el_spread_model, rng); });

        // AoD mirrors the AoA construction with its own draws; targets come
        // from the same spread models but are not recorded.
        const double aod_anchor_az = rng.uniform(-60.0, 60.0);
        const double aod_anchor_el = 0.0;
        double aod_az_target = sample_model(profile.aoa_az_spread_model, rng);
        double aod_el_target = sample_model(profile.aoa_el_spread_model, rng);
        auto aod_az_offsets = angular_offsets(mm, aod_az_target, 180.0, rng,
                                              [&] { return sample_model(profile.aoa_az_spread_model, rng); });
        auto aod_el_offsets = angular_offsets(mm, aod_el_target, 90.0, rng,
                                              [&] { return sample_model(profile.aoa_el_spread_model, rng); });

        const double amplitude =
            std::sqrt(1.0 / (static_cast<double>(n_clusters) * static_cast<double>(mm)));
        cluster.subpaths.reserve(mm);
        for (std::size_t k = 0; k < mm; ++k) {
            SynthSubpath sp;
            sp.gain_amplitude = amplitude;
            sp.phase_rad = rng.uniform(0.0, 2.0 * std::numbers::pi);
            sp.delay_s = cluster.anchor_delay_s + delays[k];
            sp.aoa_az_deg = cluster.anchor_aoa_az_deg + az_offsets[k];
            sp.aoa_el_deg = cluster.anchor_aoa_el_deg + el_offsets[k];
            sp.aod_az_deg = aod_anchor_az + aod_az_offsets[k];
            sp.aod_el_deg = aod_anchor_el + aod_el_offsets[k];
            cluster.subpaths.push_back(sp);
        }
        realization.clusters.push_back(std::move(cluster));
    }
    return realization;
}

RayTable realization_to_ray_table(const ChannelRealization& realization,
                                  const std::string& location_id) {
    RayTable table;
    table.location_id = location_id;
    for (const SynthCluster& cluster : realization.clusters) {
        for (const SynthSubpath& sp : cluster.subpaths) {
            table.subpaths.push_back(make_subpath(sp.gain_amplitude * sp.gain_amplitude,
                                                  sp.delay_s, sp.aoa_az_deg, sp.aoa_el_deg,
                                                  sp.aod_az_deg, sp.aod_el_deg));
        }
    }
    return table;
}

std::string write_realization_sidecar(const ChannelRealization& realization,
                                      const std::string& location_id) {
    using ordered_json = nlohmann::ordered_json;
    ordered_json clusters = ordered_json::array();
    for (std::size_t n = 0; n < realization.clusters.size(); ++n) {
        const SynthCluster& c = realization.clusters[n];
        ordered_json j;
        j["index"] = n;
        j["m"] = c.subpaths.size();
        j["anchor_delay_ns"] = c.anchor_delay_s * 1e9;
        j["anchor_aoa_az_deg"] = c.anchor_aoa_az_deg;
        j["anchor_aoa_el_deg"] = c.anchor_aoa_el_deg;
        j["target_delay_spread_ns"] = c.target_delay_spread_s * 1e9;
        j["target_aoa_az_spread_deg"] = c.target_aoa_az_spread_deg;
        j["target_aoa_el_spread_deg"] = c.target_aoa_el_spread_deg;
        j["spread_realizable"] = c.spread_realizable;
        clusters.push_back(std::move(j));
    }
    ordered_json doc;
    doc["location_id"] = location_id;
    doc["n_clusters"] = realization.clusters.size();
    doc["clusters"] = std::move(clusters);
    return doc.dump(2) + "\n";
}

}  // namespace mmic
