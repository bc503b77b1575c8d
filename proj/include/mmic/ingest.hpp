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

#ifndef MMIC_INGEST_HPP
#define MMIC_INGEST_HPP

#include <span>
#include <string>
#include <vector>

#include "mmic/types.hpp"

namespace mmic {

// Parses a ray table CSV. Expected header:
//   rx_id,power_db,delay_ns,aoa_az_deg,aoa_el_deg[,aod_az_deg,aod_el_deg]
// Comma separated, '.' decimal point, UTF-8, LF or CRLF. Rows are grouped by
// rx_id (first-appearance order) into one RayTable per receiver, preserving
// file order within each table. power is converted to linear, delay to
// seconds and angles are normalized on the way in.
// Throws FormatError (missing/unknown columns, malformed cells) or
// ValidationError (negative delay, out-of-range elevation), citing the file
// line number (header = line 1).
std::vector<RayTable> parse_ray_csv(const std::string& text);

// Canonical rays CSV for a set of tables. AoD columns are included when any
// subpath carries them. Numbers use shortest round-trip formatting, LF line
// endings. location_id must not contain commas, quotes or line breaks.
std::string write_rays_csv(std::span<const RayTable> tables);

// Cluster report document, mirroring the JSON schema field for field
// (delays in ns, angles in degrees). Kept in report units so that
// report -> parse -> report is byte-identical.
struct ReportStats {
    std::size_t m = 0;
    double mean_excess_delay_ns = 0.0;
    double rms_delay_spread_ns = 0.0;
    double mean_aoa_az_deg = 0.0;
    double aoa_az_spread_deg = 0.0;
    double mean_aoa_el_deg = 0.0;
    double aoa_el_spread_deg = 0.0;
    double total_power = 0.0;
};

struct ReportCentroid {
    double delay_ns = 0.0;
    double aoa_az_deg = 0.0;
    double aoa_el_deg = 0.0;
};

struct ReportCluster {
    std::size_t index = 0;
    ReportCentroid centroid;
    ReportStats stats;
};

struct ReportLocation {
    std::string location_id;
    std::size_t k = 0;
    double distortion = 0.0;
    std::vector<ReportCluster> clusters;
};

struct ClusterReport {
    std::vector<ReportLocation> locations;
};

// Assembles a report from aligned per-location inputs; throws
// ValidationError when the spans disagree in length or a ClusterSet is
// inconsistent with its stats.
ClusterReport build_cluster_report(std::span<const RayTable> tables,
                                   std::span<const ClusterSet> cluster_sets,
                                   std::span<const std::vector<ClusterStats>> stats);

// JSON text of a report, deterministic key order.
std::string write_cluster_report(const ClusterReport& report);

// Convenience overload: build + serialize.
std::string write_cluster_report(std::span<const RayTable> tables,
                                 std::span<const ClusterSet> cluster_sets,
                                 std::span<const std::vector<ClusterStats>> stats);

ClusterReport parse_cluster_report(const std::string& text);

// Stats of one report location converted back to internal units (seconds).
// min_delay is not part of the report schema and is left at 0.
std::vector<ClusterStats> report_location_stats(const ReportLocation& location);

}  // namespace mmic

#endif  // MMIC_INGEST_HPP
