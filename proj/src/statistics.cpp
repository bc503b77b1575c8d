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

#include "mmic/statistics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

namespace mmic {

namespace {

// Shifts angle a by whole turns onto the branch [center-180, center+180).
double unwrap_to(double a_deg, double center_deg) {
    return a_deg - 360.0 * std::round((a_deg - center_deg) / 360.0);
}

void require_members(std::span<const Subpath> members, const char* what) {
    if (members.empty())
        throw ValidationError(std::string(what) + ": member list is empty");
    for (const Subpath& s : members)
        if (!(s.power > 0.0))
            throw ValidationError(std::string(what) + ": member powers must be > 0");
}

struct WeightedMoments {
    double mean = 0.0;
    double spread = 0.0;  // power-weighted population std
};

WeightedMoments weighted_moments(std::span<const Subpath> members,
                                 double (*value)(const Subpath&)) {
    double total = 0.0, acc = 0.0;
    for (const Subpath& s : members) {
        total += s.power;
        acc += value(s) * s.power;
    }
    const double mean = acc / total;
    double var = 0.0;
    for (const Subpath& s : members) {
        const double d = value(s) - mean;
        var += d * d * s.power;
    }
    return {mean, std::sqrt(var / total)};
}

}  // namespace

DelayStats delay_stats(std::span<const Subpath> members) {
    require_members(members, "delay_stats");
    double min_delay = members[0].delay_s;
    for (const Subpath& s : members)
        min_delay = std::min(min_delay, s.delay_s);
    if (members.size() == 1)
        return {min_delay, 0.0, 0.0};
    auto m = weighted_moments(members, [](const Subpath& s) { return s.delay_s; });
    return {min_delay, m.mean - min_delay, m.spread};
}

AngleStats azimuth_stats(std::span<const Subpath> members) {
    require_members(members, "azimuth_stats");
    if (members.size() == 1)
        return {members[0].aoa_az_deg, 0.0};

    // Branch center: power-weighted circular mean.
    constexpr double d2r = std::numbers::pi / 180.0;
    double c = 0.0, s = 0.0;
    for (const Subpath& sp : members) {
        c += sp.power * std::cos(sp.aoa_az_deg * d2r);
        s += sp.power * std::sin(sp.aoa_az_deg * d2r);
    }
    const double center = (c == 0.0 && s == 0.0) ? 0.0 : std::atan2(s, c) / d2r;

    double total = 0.0, acc = 0.0;
    std::vector<double> unwrapped(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        unwrapped[i] = unwrap_to(members[i].aoa_az_deg, center);
        total += members[i].power;
        acc += unwrapped[i] * members[i].power;
    }
    const double mean = acc / total;
    double var = 0.0;
    for (std::size_t i = 0; i < members.size(); ++i) {
        const double d = unwrapped[i] - mean;
        var += d * d * members[i].power;
    }
    return {mean, std::sqrt(var / total)};
}

AngleStats elevation_stats(std::span<const Subpath> members) {
    require_members(members, "elevation_stats");
    if (members.size() == 1)
        return {members[0].aoa_el_deg, 0.0};
    auto m = weighted_moments(members, [](const Subpath& s) { return s.aoa_el_deg; });
    return {m.mean, m.spread};
}

ClusterStats cluster_stats(std::span<const Subpath> members) {
    require_members(members, "cluster_stats");
    const DelayStats d = delay_stats(members);
    const AngleStats az = azimuth_stats(members);
    const AngleStats el = elevation_stats(members);
    double total_power = 0.0;
    for (const Subpath& s : members)
        total_power += s.power;

    ClusterStats stats;
    stats.m = members.size();
    stats.min_delay_s = d.min_delay_s;
    stats.mean_excess_delay_s = d.mean_excess_delay_s;
    stats.rms_delay_spread_s = d.rms_spread_s;
    stats.mean_aoa_az_deg = az.mean_deg;
    stats.aoa_az_spread_deg = az.spread_deg;
    stats.mean_aoa_el_deg = el.mean_deg;
    stats.aoa_el_spread_deg = el.spread_deg;
    stats.total_power = total_power;
    return stats;
}

std::vector<std::vector<Subpath>> cluster_members(const RayTable& table, const ClusterSet& set) {
    validate_cluster_set(table, set);
    std::vector<std::vector<Subpath>> members(set.k);
    for (std::size_t j = 0; j < table.subpaths.size(); ++j)
        members[set.assignment[j]].push_back(table.subpaths[j]);
    return members;
}

std::vector<ClusterStats> compute_cluster_stats(const RayTable& table, const ClusterSet& set) {
    std::vector<ClusterStats> stats;
    stats.reserve(set.k);
    for (const auto& members : cluster_members(table, set))
        stats.push_back(cluster_stats(members));
    return stats;
}

PooledStats pool_stats(std::span<const std::vector<ClusterStats>> stats_per_location) {
    std::size_t total = 0;
    for (const auto& loc : stats_per_location)
        total += loc.size();

    PooledStats pooled;
    pooled.subpath_counts.resize(static_cast<Eigen::Index>(total));
    pooled.delay_spreads_s.resize(static_cast<Eigen::Index>(total));
    pooled.aoa_az_spreads_deg.resize(static_cast<Eigen::Index>(total));
    pooled.aoa_el_spreads_deg.resize(static_cast<Eigen::Index>(total));
    pooled.clusters_per_location.reserve(stats_per_location.size());

    Eigen::Index i = 0;
    for (const auto& loc : stats_per_location) {
        pooled.clusters_per_location.push_back(loc.size());
        for (const ClusterStats& cs : loc) {
            pooled.subpath_counts[i] = static_cast<double>(cs.m);
            pooled.delay_spreads_s[i] = cs.rms_delay_spread_s;
            pooled.aoa_az_spreads_deg[i] = cs.aoa_az_spread_deg;
            pooled.aoa_el_spreads_deg[i] = cs.aoa_el_spread_deg;
            ++i;
        }
    }
    return pooled;
}

EmpiricalCdf empirical_cdf(const Eigen::ArrayXd& samples) {
    if (samples.size() == 0)
        throw ValidationError("empirical_cdf: sample set is empty");
    if (!samples.isFinite().all())
        throw ValidationError("empirical_cdf: samples must be finite");

    EmpiricalCdf cdf;
    cdf.values.assign(samples.data(), samples.data() + samples.size());
    std::sort(cdf.values.begin(), cdf.values.end());
    const double n = static_cast<double>(cdf.values.size());
    cdf.probabilities.resize(cdf.values.size());
    for (std::size_t i = 0; i < cdf.values.size(); ++i)
        cdf.probabilities[i] = static_cast<double>(i + 1) / n;
    return cdf;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string write_cdf_csv(const EmpiricalCdf& cdf) {
    std::string out = "value,probability\n";
    for (std::size_t i = 0; i < cdf.values.size(); ++i) {
        out += format_double(cdf.values[i]);
        out += ',';
        out += format_double(cdf.probabilities[i]);
        out += '\n';
    }
    return out;
}

}  // namespace mmic
