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

#include "mmic/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_map>

#include "json.hpp"

namespace mmic {

namespace {

constexpr const char* kMandatoryColumns[] = {"rx_id", "power_db", "delay_ns", "aoa_az_deg",
                                             "aoa_el_deg"};
constexpr const char* kOptionalColumns[] = {"aod_az_deg", "aod_el_deg"};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return fields;
}

double parse_number(std::string_view cell, std::size_t line_no, std::string_view column) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last)
        throw FormatError("row " + std::to_string(line_no) + ": cannot parse numeric cell '" +
                          std::string(cell) + "' in column " + std::string(column));
    return value;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::vector<RayTable> parse_ray_csv(const std::string& text) {
    // Split into lines; tolerate CRLF and a missing final newline.
    std::vector<std::string_view> lines;
    {
        std::string_view rest = text;
        while (!rest.empty()) {
            const std::size_t nl = rest.find('\n');
            if (nl == std::string_view::npos) {
                lines.push_back(rest);
                break;
            }
            lines.push_back(rest.substr(0, nl));
            rest.remove_prefix(nl + 1);
        }
    }

    std::size_t header_line = 0;
    while (header_line < lines.size() && trim(lines[header_line]).empty())
        ++header_line;
    if (header_line == lines.size())
        throw FormatError("ray csv: missing header row");

    const auto header = split_fields(lines[header_line]);
    std::unordered_map<std::string_view, std::size_t> column_of;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string_view name = header[i];
        bool known = false;
        for (const char* m : kMandatoryColumns)
            known = known || name == m;
        for (const char* o : kOptionalColumns)
            known = known || name == o;
        if (!known)
            throw FormatError("ray csv: unknown column '" + std::string(name) + "'");
        if (!column_of.emplace(name, i).second)
            throw FormatError("ray csv: duplicate column '" + std::string(name) + "'");
    }
    for (const char* m : kMandatoryColumns)
        if (!column_of.contains(m))
            throw FormatError(std::string("ray csv: missing column '") + m + "'");

    const bool has_aod_az = column_of.contains("aod_az_deg");
    const bool has_aod_el = column_of.contains("aod_el_deg");

    std::vector<RayTable> tables;
    std::unordered_map<std::string, std::size_t> table_of;

    for (std::size_t li = header_line + 1; li < lines.size(); ++li) {
        const std::size_t line_no = li + 1;  // header = line 1
        if (trim(lines[li]).empty())
            continue;
        const auto fields = split_fields(lines[li]);
        if (fields.size() != header.size())
            throw FormatError("row " + std::to_string(line_no) + ": expected " +
                              std::to_string(header.size()) + " fields, got " +
                              std::to_string(fields.size()));

        const std::string rx_id(fields[column_of.at("rx_id")]);
        if (rx_id.empty())
            throw FormatError("row " + std::to_string(line_no) + ": empty rx_id");

        const double power_db = parse_number(fields[column_of.at("power_db")], line_no, "power_db");
        const double delay_ns = parse_number(fields[column_of.at("delay_ns")], line_no, "delay_ns");
        const double aoa_az = parse_number(fields[column_of.at("aoa_az_deg")], line_no, "aoa_az_deg");
        const double aoa_el = parse_number(fields[column_of.at("aoa_el_deg")], line_no, "aoa_el_deg");

        std::optional<double> aod_az, aod_el;
        if (has_aod_az) {
            const auto cell = fields[column_of.at("aod_az_deg")];
            if (!cell.empty())
                aod_az = parse_number(cell, line_no, "aod_az_deg");
        }
        if (has_aod_el) {
            const auto cell = fields[column_of.at("aod_el_deg")];
            if (!cell.empty())
                aod_el = parse_number(cell, line_no, "aod_el_deg");
        }

        if (!std::isfinite(power_db) || !std::isfinite(delay_ns) || !std::isfinite(aoa_az) ||
            !std::isfinite(aoa_el))
            throw ValidationError("row " + std::to_string(line_no) + ": non-finite value");
        if (delay_ns < 0.0)
            throw ValidationError("row " + std::to_string(line_no) + ": delay_ns must be >= 0");

        Subpath subpath;
        try {
            subpath = make_subpath(db_to_linear(power_db), delay_ns * 1e-9, aoa_az, aoa_el,
                                   aod_az, aod_el);
        } catch (const ValidationError& e) {
            throw ValidationError("row " + std::to_string(line_no) + ": " + e.what());
        }

        auto [it, inserted] = table_of.emplace(rx_id, tables.size());
        if (inserted) {
            RayTable t;
            t.location_id = rx_id;
            tables.push_back(std::move(t));
        }
        tables[it->second].subpaths.push_back(subpath);
    }
    return tables;
}

std::string write_rays_csv(std::span<const RayTable> tables) {
    bool any_aod = false;
    for (const RayTable& t : tables) {
        if (t.location_id.find_first_of(",\"\r\n") != std::string::npos)
            throw ValidationError("write_rays_csv: location_id '" + t.location_id +
                                  "' contains a forbidden character");
        for (const Subpath& s : t.subpaths)
            any_aod = any_aod || s.aod_az_deg || s.aod_el_deg;
    }

    std::string out = "rx_id,power_db,delay_ns,aoa_az_deg,aoa_el_deg";
    if (any_aod)
        out += ",aod_az_deg,aod_el_deg";
    out += '\n';

    for (const RayTable& t : tables) {
        for (const Subpath& s : t.subpaths) {
            out += t.location_id;
            out += ',';
            out += format_double(linear_to_db(s.power));
            out += ',';
            out += format_double(s.delay_s * 1e9);
            out += ',';
            out += format_double(s.aoa_az_deg);
            out += ',';
            out += format_double(s.aoa_el_deg);
            if (any_aod) {
                out += ',';
                if (s.aod_az_deg)
                    out += format_double(*s.aod_az_deg);
                out += ',';
                if (s.aod_el_deg)
                    out += format_double(*s.aod_el_deg);
            }
            out += '\n';
        }
    }
    return out;
}

ClusterReport build_cluster_report(std::span<const RayTable> tables,
                                   std::span<const ClusterSet> cluster_sets,
                                   std::span<const std::vector<ClusterStats>> stats) {
    if (tables.size() != cluster_sets.size() || tables.size() != stats.size())
        throw ValidationError("build_cluster_report: misaligned input lengths");

    ClusterReport report;
    report.locations.reserve(tables.size());
    for (std::size_t i = 0; i < tables.size(); ++i) {
        const ClusterSet& set = cluster_sets[i];
        validate_cluster_set(tables[i], set);
        if (stats[i].size() != set.k)
            throw ValidationError("build_cluster_report: stats/cluster count mismatch at location " +
                                  tables[i].location_id);

        ReportLocation loc;
        loc.location_id = tables[i].location_id;
        loc.k = set.k;
        loc.distortion = set.distortion;
        loc.clusters.reserve(set.k);
        for (std::size_t n = 0; n < set.k; ++n) {
            ReportCluster rc;
            rc.index = n;
            rc.centroid = {set.centroids[n].delay_s * 1e9, set.centroids[n].aoa_az_deg,
                           set.centroids[n].aoa_el_deg};
            const ClusterStats& cs = stats[i][n];
            rc.stats = {cs.m,
                        cs.mean_excess_delay_s * 1e9,
                        cs.rms_delay_spread_s * 1e9,
                        cs.mean_aoa_az_deg,
                        cs.aoa_az_spread_deg,
                        cs.mean_aoa_el_deg,
                        cs.aoa_el_spread_deg,
                        cs.total_power};
            loc.clusters.push_back(std::move(rc));
        }
        report.locations.push_back(std::move(loc));
    }
    return report;
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json report_to_json(const ClusterReport& report) {
    ordered_json locations = ordered_json::array();
    for (const ReportLocation& loc : report.locations) {
        ordered_json clusters = ordered_json::array();
        for (const ReportCluster& rc : loc.clusters) {
            ordered_json c;
            c["index"] = rc.index;
            c["centroid"] = {{"delay_ns", rc.centroid.delay_ns},
                             {"aoa_az_deg", rc.centroid.aoa_az_deg},
                             {"aoa_el_deg", rc.centroid.aoa_el_deg}};
            c["stats"] = {{"m", rc.stats.m},
                          {"mean_excess_delay_ns", rc.stats.mean_excess_delay_ns},
                          {"rms_delay_spread_ns", rc.stats.rms_delay_spread_ns},
                          {"mean_aoa_az_deg", rc.stats.mean_aoa_az_deg},
                          {"aoa_az_spread_deg", rc.stats.aoa_az_spread_deg},
                          {"mean_aoa_el_deg", rc.stats.mean_aoa_el_deg},
                          {"aoa_el_spread_deg", rc.stats.aoa_el_spread_deg},
                          {"total_power", rc.stats.total_power}};
            clusters.push_back(std::move(c));
        }
        ordered_json l;
        l["location_id"] = loc.location_id;
        l["k"] = loc.k;
        l["distortion"] = loc.distortion;
        l["clusters"] = std::move(clusters);
        locations.push_back(std::move(l));
    }
    ordered_json doc;
    doc["locations"] = std::move(locations);
    return doc;
}

}  // namespace

std::string write_cluster_report(const ClusterReport& report) {
    return report_to_json(report).dump(2) + "\n";
}

std::string write_cluster_report(std::span<const RayTable> tables,
                                 std::span<const ClusterSet> cluster_sets,
                                 std::span<const std::vector<ClusterStats>> stats) {
    return write_cluster_report(build_cluster_report(tables, cluster_sets, stats));
}

ClusterReport parse_cluster_report(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw FormatError(std::string("cluster report: invalid JSON: ") + e.what());
    }

    ClusterReport report;
    try {
        for (const auto& l : doc.at("locations")) {
            ReportLocation loc;
            loc.location_id = l.at("location_id").get<std::string>();
            loc.k = l.at("k").get<std::size_t>();
            loc.distortion = l.at("distortion").get<double>();
            for (const auto& c : l.at("clusters")) {
                ReportCluster rc;
                rc.index = c.at("index").get<std::size_t>();
                const auto& ce = c.at("centroid");
                rc.centroid = {ce.at("delay_ns").get<double>(), ce.at("aoa_az_deg").get<double>(),
                               ce.at("aoa_el_deg").get<double>()};
                const auto& st = c.at("stats");
                rc.stats = {st.at("m").get<std::size_t>(),
                            st.at("mean_excess_delay_ns").get<double>(),
                            st.at("rms_delay_spread_ns").get<double>(),
                            st.at("mean_aoa_az_deg").get<double>(),
                            st.at("aoa_az_spread_deg").get<double>(),
                            st.at("mean_aoa_el_deg").get<double>(),
                            st.at("aoa_el_spread_deg").get<double>(),
                            st.at("total_power").get<double>()};
                loc.clusters.push_back(std::move(rc));
            }
            if (loc.clusters.size() != loc.k)
                throw FormatError("cluster report: location '" + loc.location_id +
                                  "' lists k=" + std::to_string(loc.k) + " but " +
                                  std::to_string(loc.clusters.size()) + " clusters");
            report.locations.push_back(std::move(loc));
        }
    } catch (const ordered_json::exception& e) {
        throw FormatError(std::string("cluster report: ") + e.what());
    }
    return report;
}

std::vector<ClusterStats> report_location_stats(const ReportLocation& location) {
    std::vector<ClusterStats> stats;
    stats.reserve(location.clusters.size());
    for (const ReportCluster& rc : location.clusters) {
        ClusterStats cs;
        cs.m = rc.stats.m;
        cs.mean_excess_delay_s = rc.stats.mean_excess_delay_ns * 1e-9;
        cs.rms_delay_spread_s = rc.stats.rms_delay_spread_ns * 1e-9;
        cs.mean_aoa_az_deg = rc.stats.mean_aoa_az_deg;
        cs.aoa_az_spread_deg = rc.stats.aoa_az_spread_deg;
        cs.mean_aoa_el_deg = rc.stats.mean_aoa_el_deg;
        cs.aoa_el_spread_deg = rc.stats.aoa_el_spread_deg;
        cs.total_power = rc.stats.total_power;
        stats.push_back(cs);
    }
    return stats;
}

}  // namespace mmic
