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

#ifndef MMIC_STATISTICS_HPP
#define MMIC_STATISTICS_HPP

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "mmic/types.hpp"

namespace mmic {

// Power-weighted intra-cluster delay statistics, all in seconds:
//   min_delay_s        earliest arrival in the cluster
//   mean_excess_delay_s  power-weighted mean delay relative to min_delay_s
//   rms_spread_s       power-weighted std of delays
struct DelayStats {
    double min_delay_s = 0.0;
    double mean_excess_delay_s = 0.0;
    double rms_spread_s = 0.0;
};

struct AngleStats {
    double mean_deg = 0.0;
    double spread_deg = 0.0;
};

DelayStats delay_stats(std::span<const Subpath> members);

// Power-weighted azimuth mean/spread. Azimuths are unwrapped onto the
// contiguous branch centered on the power-weighted circular mean before the
// linear formulas are applied, so clusters straddling the +-180 seam do not
// inflate the spread. The returned mean stays on that branch and may lie
// outside [-180, 180); it is defined modulo 360.
AngleStats azimuth_stats(std::span<const Subpath> members);

// Same formulas on elevation, without unwrapping (elevation is bounded).
AngleStats elevation_stats(std::span<const Subpath> members);

// All per-cluster statistics for one member set.
ClusterStats cluster_stats(std::span<const Subpath> members);

// Members of each cluster, in subpath order.
std::vector<std::vector<Subpath>> cluster_members(const RayTable& table, const ClusterSet& set);

// Per-cluster statistics for every cluster of a ClusterSet, by cluster index.
std::vector<ClusterStats> compute_cluster_stats(const RayTable& table, const ClusterSet& set);

// Cluster samples pooled across locations, one entry per cluster, ordered by
// (location order, cluster index order).
struct PooledStats {
    Eigen::ArrayXd subpath_counts;                   // {M_n}
    Eigen::ArrayXd delay_spreads_s;                  // {S_n}
    Eigen::ArrayXd aoa_az_spreads_deg;               // {Q_n}
    Eigen::ArrayXd aoa_el_spreads_deg;               // {V_n}
    std::vector<std::size_t> clusters_per_location;  // {N}
};

PooledStats pool_stats(std::span<const std::vector<ClusterStats>> stats_per_location);

// Step CDF with P(x <= sorted[i]) = (i+1)/n. Samples must be non-empty and
// finite.
EmpiricalCdf empirical_cdf(const Eigen::ArrayXd& samples);

// CSV export of a step CDF: header "value,probability", one row per step.
std::string write_cdf_csv(const EmpiricalCdf& cdf);

}  // namespace mmic

#endif  // MMIC_STATISTICS_HPP
