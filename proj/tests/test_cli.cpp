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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "mmic/cli.hpp"
#include "mmic/fitting.hpp"
#include "mmic/ingest.hpp"
#include "mmic/rng.hpp"
#include "mmic/statistics.hpp"
#include "mmic/synthesis.hpp"
#include "mmic/types.hpp"

using namespace mmic;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("mmic_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

// two-location rays file with clear two-cluster structure per location
std::string sample_rays_csv() {
    std::string csv = "rx_id,power_db,delay_ns,aoa_az_deg,aoa_el_deg\n";
    Rng rng(12121);
    for (const char* rx : {"locA", "locB"}) {
        for (int b = 0; b < 2; ++b) {
            for (int i = 0; i < 10; ++i) {
                csv += std::string(rx) + "," + std::to_string(rng.uniform(-20.0, 0.0)) + "," +
                       std::to_string(b * 200.0 + rng.uniform(0.0, 25.0)) + "," +
                       std::to_string(b * 90.0 - 45.0 + rng.uniform(-8.0, 8.0)) + "," +
                       std::to_string(rng.uniform(-5.0, 5.0)) + "\n";
            }
        }
    }
    return csv;
}

}  // namespace

TEST_CASE("cluster subcommand end to end") {
    TempDir tmp("cluster");
    spit(tmp.file("rays.csv"), sample_rays_csv());

    const int rc = run_cli({"cluster", "--input", tmp.file("rays.csv"), "--output",
                            tmp.file("report.json"), "--seed", "5"});
    CHECK(rc == 0);
    const ClusterReport report = parse_cluster_report(slurp(tmp.file("report.json")));
    REQUIRE(report.locations.size() == 2);
    CHECK(report.locations[0].location_id == "locA");
    CHECK(report.locations[0].k == 2);
    CHECK(report.locations[1].k == 2);

    SUBCASE("same seed gives byte-identical reports") {
        const std::string first = slurp(tmp.file("report.json"));
        const int rc2 = run_cli({"cluster", "--input", tmp.file("rays.csv"), "--output",
                                 tmp.file("report2.json"), "--seed", "5"});
        CHECK(rc2 == 0);
        CHECK(slurp(tmp.file("report2.json")) == first);
    }
}

TEST_CASE("cluster subcommand input validation") {
    TempDir tmp("cluster_err");
    SUBCASE("missing column exits 2 and names it") {
        spit(tmp.file("bad.csv"), "rx_id,delay_ns,aoa_az_deg,aoa_el_deg\nA,1,0,0\n");
        CHECK(run_cli({"cluster", "--input", tmp.file("bad.csv"), "--output",
                       tmp.file("out.json")}) == 2);
    }
    SUBCASE("empty input exits 2") {
        spit(tmp.file("empty.csv"), "rx_id,power_db,delay_ns,aoa_az_deg,aoa_el_deg\n");
        CHECK(run_cli({"cluster", "--input", tmp.file("empty.csv"), "--output",
                       tmp.file("out.json")}) == 2);
    }
    SUBCASE("missing file exits 2") {
        CHECK(run_cli({"cluster", "--input", tmp.file("nope.csv"), "--output",
                       tmp.file("out.json")}) == 2);
    }
}

TEST_CASE("fit subcommand") {
    TempDir tmp("fit");

    SUBCASE("fits a synthesized multi-location report") {
        // synthesize 60 locations, cluster them, then fit
        const int rc_synth = run_cli({"synth", "--preset", "measurement", "--count", "60",
                                      "--seed", "9", "--output", tmp.file("synths")});
        REQUIRE(rc_synth == 0);
        std::string csv;
        bool first = true;
        for (int i = 0; i < 60; ++i) {
            char name[64];
            std::snprintf(name, sizeof(name), "synths/realization_%04d.csv", i);
            const std::string one = slurp(tmp.file(name));
            if (first) {
                csv = one;
                first = false;
            } else {
                csv += one.substr(one.find('\n') + 1);
            }
        }
        spit(tmp.file("all.csv"), csv);
        REQUIRE(run_cli({"cluster", "--input", tmp.file("all.csv"), "--output",
                         tmp.file("report.json"), "--seed", "11"}) == 0);
        REQUIRE(run_cli({"fit", "--input", tmp.file("report.json"), "--output",
                         tmp.file("fits.json")}) == 0);
        const auto entries = parse_fit_report(slurp(tmp.file("fits.json")));
        CHECK(entries.size() == 5);

        // the fit report must feed synth --profile
        CHECK(run_cli({"synth", "--profile", tmp.file("fits.json"), "--count", "1", "--seed",
                       "3", "--output", tmp.file("resynth")}) == 0);
    }

    SUBCASE("single pooled cluster exits 2") {
        RayTable table;
        table.location_id = "one";
        table.subpaths = {make_subpath(1.0, 0.0, 0.0, 0.0),
                          make_subpath(1.0, 5e-9, 3.0, 0.0)};
        ClusterSet set;
        set.k = 1;
        set.assignment = {0, 0};
        set.centroids = {{2.5e-9, 1.5, 0.0}};
        set.distortion = 0.0;
        std::vector<RayTable> tables = {table};
        std::vector<ClusterSet> sets = {set};
        std::vector<std::vector<ClusterStats>> stats = {compute_cluster_stats(table, set)};
        spit(tmp.file("one.json"), write_cluster_report(tables, sets, stats));
        CHECK(run_cli({"fit", "--input", tmp.file("one.json"), "--output",
                       tmp.file("fits.json")}) == 2);
    }
}

TEST_CASE("synth subcommand") {
    TempDir tmp("synth");

    SUBCASE("measurement preset yields 3 clusters per sidecar") {
        REQUIRE(run_cli({"synth", "--preset", "measurement", "--count", "1", "--seed", "2",
                         "--output", tmp.file("out")}) == 0);
        const std::string sidecar = slurp(tmp.file("out/realization_0000.json"));
        CHECK(sidecar.find("\"n_clusters\": 3") != std::string::npos);
        const auto tables = parse_ray_csv(slurp(tmp.file("out/realization_0000.csv")));
        REQUIRE(tables.size() == 1);
        CHECK(tables[0].subpaths.size() >= 3);
    }
    SUBCASE("raytracing preset yields 2 clusters") {
        REQUIRE(run_cli({"synth", "--preset", "raytracing", "--count", "1", "--seed", "2",
                         "--output", tmp.file("out2")}) == 0);
        const std::string sidecar = slurp(tmp.file("out2/realization_0000.json"));
        CHECK(sidecar.find("\"n_clusters\": 2") != std::string::npos);
    }
    SUBCASE("count 0 writes nothing and exits 0") {
        REQUIRE(run_cli({"synth", "--preset", "measurement", "--count", "0", "--output",
                         tmp.file("out3")}) == 0);
        CHECK(fs::exists(tmp.file("out3")));
        CHECK(fs::is_empty(tmp.file("out3")));
    }
    SUBCASE("usage errors exit 2") {
        CHECK(run_cli({"synth", "--count", "1", "--output", tmp.file("x")}) == 2);
        CHECK(run_cli({"synth", "--preset", "nope", "--count", "1", "--output",
                       tmp.file("x")}) == 2);
        CHECK(run_cli({"synth", "--preset", "measurement", "--profile", "p.json", "--output",
                       tmp.file("x")}) == 2);
    }
    SUBCASE("incomplete profile exits 2 and lists slots") {
        spit(tmp.file("partial.json"),
             "{\"fits\": [{\"characteristic\": \"n_clusters\", \"family\": \"constant\", "
             "\"params\": {\"value\": 3.0}, \"n_samples\": 4, \"log_likelihood\": 0.0, "
             "\"model_mean\": 3.0, \"model_median\": 3.0}]}");
        CHECK(run_cli({"synth", "--profile", tmp.file("partial.json"), "--count", "1",
                       "--output", tmp.file("y")}) == 2);
    }
}

TEST_CASE("cdf subcommand") {
    TempDir tmp("cdf");
    spit(tmp.file("rays.csv"), sample_rays_csv());
    REQUIRE(run_cli({"cluster", "--input", tmp.file("rays.csv"), "--output",
                     tmp.file("report.json"), "--seed", "5"}) == 0);

    SUBCASE("delay spread cdf over 4 clusters") {
        REQUIRE(run_cli({"cdf", "--input", tmp.file("report.json"), "--characteristic",
                         "delay_spread", "--output", tmp.file("cdf.csv")}) == 0);
        const std::string csv = slurp(tmp.file("cdf.csv"));
        std::istringstream lines(csv);
        std::string line;
        std::getline(lines, line);
        CHECK(line == "value,probability");
        int rows = 0;
        double prev_value = -1.0, last_prob = 0.0;
        while (std::getline(lines, line)) {
            const auto comma = line.find(',');
            const double value = std::stod(line.substr(0, comma));
            last_prob = std::stod(line.substr(comma + 1));
            CHECK(value >= prev_value);
            prev_value = value;
            ++rows;
        }
        CHECK(rows == 4);
        CHECK(last_prob == 1.0);
    }
    SUBCASE("unknown characteristic exits 2") {
        CHECK(run_cli({"cdf", "--input", tmp.file("report.json"), "--characteristic", "bogus",
                       "--output", tmp.file("cdf.csv")}) == 2);
    }
}

TEST_CASE("full pipeline determinism") {
    TempDir tmp("pipeline");
    spit(tmp.file("rays.csv"), sample_rays_csv());

    auto run_pipeline = [&](const std::string& suffix) {
        REQUIRE(run_cli({"cluster", "--input", tmp.file("rays.csv"), "--output",
                         tmp.file("report" + suffix), "--seed", "77"}) == 0);
        REQUIRE(run_cli({"fit", "--input", tmp.file("report" + suffix), "--output",
                         tmp.file("fits" + suffix)}) == 0);
        REQUIRE(run_cli({"synth", "--preset", "measurement", "--count", "2", "--seed", "99",
                         "--output", tmp.file("synth" + suffix)}) == 0);
    };
    run_pipeline("_a");
    run_pipeline("_b");
    CHECK(slurp(tmp.file("report_a")) == slurp(tmp.file("report_b")));
    CHECK(slurp(tmp.file("fits_a")) == slurp(tmp.file("fits_b")));
    CHECK(slurp(tmp.file("synth_a/realization_0001.csv")) ==
          slurp(tmp.file("synth_b/realization_0001.csv")));
    CHECK(slurp(tmp.file("synth_a/realization_0001.json")) ==
          slurp(tmp.file("synth_b/realization_0001.json")));
}

TEST_CASE("help exits 0 for every subcommand") {
    CHECK(run_cli({"--help"}) == 0);
    CHECK(run_cli({"cluster", "--help"}) == 0);
    CHECK(run_cli({"fit", "--help"}) == 0);
    CHECK(run_cli({"synth", "--help"}) == 0);
    CHECK(run_cli({"cdf", "--help"}) == 0);
}

TEST_CASE("no subcommand is a usage error") {
    CHECK(run_cli({}) == 2);
}
