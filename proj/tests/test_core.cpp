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

#include <cmath>
#include <limits>

#include "doctest.h"
#include "mmic/rng.hpp"
#include "mmic/statistics.hpp"
#include "mmic/types.hpp"

using namespace mmic;

TEST_CASE("db_to_linear known values") {
    CHECK(db_to_linear(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(db_to_linear(10.0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(db_to_linear(-20.0) == doctest::Approx(0.01).epsilon(1e-15));
    CHECK_THROWS_AS(db_to_linear(std::numeric_limits<double>::infinity()), ValidationError);
    CHECK_THROWS_AS(db_to_linear(std::nan("")), ValidationError);
}

TEST_CASE("db round trip over 24 decades") {
    for (int e = -12; e <= 12; ++e) {
        const double x = std::pow(10.0, e);
        CHECK(db_to_linear(linear_to_db(x)) == doctest::Approx(x).epsilon(1e-12));
    }
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        const double x = std::pow(10.0, rng.uniform(-12.0, 12.0));
        CHECK(db_to_linear(linear_to_db(x)) == doctest::Approx(x).epsilon(1e-12));
    }
    CHECK_THROWS_AS(linear_to_db(0.0), ValidationError);
    CHECK_THROWS_AS(linear_to_db(-1.0), ValidationError);
}

TEST_CASE("normalize_angle wraps into [-180, 180)") {
    CHECK(normalize_angle(0.0) == 0.0);
    CHECK(normalize_angle(190.0) == -170.0);
    CHECK(normalize_angle(-180.0) == -180.0);
    CHECK(normalize_angle(180.0) == -180.0);
    CHECK(normalize_angle(540.0) == -180.0);
    CHECK(normalize_angle(-541.0) == 179.0);
    CHECK_THROWS_AS(normalize_angle(std::numeric_limits<double>::infinity()), ValidationError);

    // idempotence over a wide grid
    for (int i = -2000; i <= 2000; ++i) {
        const double a = 0.37 * i;
        const double w = normalize_angle(a);
        CHECK(w >= -180.0);
        CHECK(w < 180.0);
        CHECK(normalize_angle(w) == w);
        // equivalent modulo 360
        CHECK(std::remainder(w - a, 360.0) == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("make_subpath validates and normalizes") {
    const Subpath s = make_subpath(1.0, 5e-8, 190.0, -5.0, 400.0, 10.0);
    CHECK(s.aoa_az_deg == -170.0);
    CHECK(*s.aod_az_deg == 40.0);
    CHECK(*s.aod_el_deg == 10.0);

    CHECK_THROWS_AS(make_subpath(0.0, 1e-9, 0.0, 0.0), ValidationError);
    CHECK_THROWS_AS(make_subpath(-1.0, 1e-9, 0.0, 0.0), ValidationError);
    CHECK_THROWS_AS(make_subpath(1.0, -1e-9, 0.0, 0.0), ValidationError);
    CHECK_THROWS_AS(make_subpath(1.0, 1e-9, 0.0, 95.0), ValidationError);
    CHECK_THROWS_AS(make_subpath(1.0, 1e-9, 0.0, 0.0, 0.0, -95.0), ValidationError);
    CHECK_NOTHROW(make_subpath(1.0, 0.0, -180.0, 90.0));
    CHECK_NOTHROW(make_subpath(1.0, 0.0, 0.0, -90.0));
}

TEST_CASE("model factories enforce parameter ranges") {
    CHECK_THROWS_AS(make_negative_binomial_model(0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(make_negative_binomial_model(1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(make_negative_binomial_model(0.5, 0.0), ValidationError);
    CHECK_THROWS_AS(make_exponential_model(0.0), ValidationError);
    CHECK_THROWS_AS(make_lognormal_model(0.0, 0.0), ValidationError);
    const FittedModel nb = make_negative_binomial_model(0.18, 2.63);
    CHECK(negative_binomial_params(nb).p == 0.18);
    CHECK_THROWS_AS(exponential_params(nb), ValidationError);
}

TEST_CASE("family names round trip") {
    for (ModelFamily f : {ModelFamily::Constant, ModelFamily::NegativeBinomial,
                          ModelFamily::Exponential, ModelFamily::Lognormal})
        CHECK(family_from_name(family_name(f)) == f);
    CHECK_THROWS_AS(family_from_name("weibull"), ValidationError);
}

TEST_CASE("cluster set validation catches empty clusters") {
    RayTable table;
    table.location_id = "A";
    table.subpaths = {make_subpath(1.0, 0.0, 0.0, 0.0), make_subpath(1.0, 1e-9, 10.0, 0.0)};

    ClusterSet ok;
    ok.k = 2;
    ok.assignment = {0, 1};
    ok.centroids = {{0.0, 0.0, 0.0}, {1e-9, 10.0, 0.0}};
    ok.distortion = 0.0;
    CHECK_NOTHROW(validate_cluster_set(table, ok));

    ClusterSet empty_cluster = ok;
    empty_cluster.assignment = {0, 0};
    CHECK_THROWS_AS(validate_cluster_set(table, empty_cluster), ValidationError);

    ClusterSet bad_index = ok;
    bad_index.assignment = {0, 2};
    CHECK_THROWS_AS(validate_cluster_set(table, bad_index), ValidationError);

    ClusterSet short_assignment = ok;
    short_assignment.assignment = {0};
    CHECK_THROWS_AS(validate_cluster_set(table, short_assignment), ValidationError);
}

TEST_CASE("cluster stats are a pure function of their inputs") {
    RayTable table;
    table.location_id = "A";
    Rng rng(42);
    for (int i = 0; i < 40; ++i)
        table.subpaths.push_back(make_subpath(db_to_linear(rng.uniform(-30.0, 0.0)),
                                              rng.uniform(0.0, 3e-7), rng.uniform(-170.0, 170.0),
                                              rng.uniform(-60.0, 60.0)));
    ClusterSet set;
    set.k = 2;
    set.assignment.resize(table.subpaths.size());
    for (std::size_t j = 0; j < table.subpaths.size(); ++j)
        set.assignment[j] = j % 2;
    set.centroids = {{1e-7, 0.0, 0.0}, {2e-7, 20.0, 5.0}};
    set.distortion = 0.0;

    const auto a = compute_cluster_stats(table, set);
    const auto b = compute_cluster_stats(table, set);
    REQUIRE(a.size() == b.size());
    for (std::size_t n = 0; n < a.size(); ++n) {
        CHECK(a[n].m == b[n].m);
        CHECK(a[n].min_delay_s == b[n].min_delay_s);
        CHECK(a[n].mean_excess_delay_s == b[n].mean_excess_delay_s);
        CHECK(a[n].rms_delay_spread_s == b[n].rms_delay_spread_s);
        CHECK(a[n].mean_aoa_az_deg == b[n].mean_aoa_az_deg);
        CHECK(a[n].aoa_az_spread_deg == b[n].aoa_az_spread_deg);
        CHECK(a[n].mean_aoa_el_deg == b[n].mean_aoa_el_deg);
        CHECK(a[n].aoa_el_spread_deg == b[n].aoa_el_spread_deg);
        CHECK(a[n].total_power == b[n].total_power);
    }
}
