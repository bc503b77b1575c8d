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

#ifndef MMIC_CLUSTERING_HPP
#define MMIC_CLUSTERING_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "mmic/rng.hpp"
#include "mmic/types.hpp"

namespace mmic {

// Subpaths are clustered in a 3-D metric space whose axes are
// (beta * delay in ns, azimuth AoA in deg, elevation AoA in deg); distances
// are plain Euclidean there. beta = 10 makes a 1 ns delay offset weigh like
// a 10 degree angular offset. Powers and AoDs are never read.
struct ClusteringConfig {
    double beta = 10.0;
    std::size_t k_max = 10;
    std::size_t restarts = 10;
    std::size_t max_iters = 100;
    double tol = 1e-6;  // max centroid movement, metric units
    std::uint64_t rng_seed = 0;
};

void validate_config(const ClusteringConfig& config);

// Embedding into metric coordinates and back.
Eigen::Vector3d metric_point(const Subpath& s, double beta);
Eigen::Vector3d metric_point(const Centroid& c, double beta);
Centroid centroid_from_metric_point(const Eigen::Vector3d& w, double beta);
Eigen::Matrix3Xd metric_points(const RayTable& table, double beta);

// Clustering distance between a subpath and a centroid:
// sqrt(beta^2 (dtau_ns)^2 + (daz_deg)^2 + (del_deg)^2).
double metric(const Subpath& s, const Centroid& c, double beta);

// k-means++ seeding: first centroid uniform over subpaths, each next one
// sampled proportional to the squared metric to the nearest chosen centroid.
// Throws ValidationError if k exceeds the number of subpaths.
std::vector<Centroid> kmeanspp_seed(const RayTable& table, std::size_t k, double beta, Rng& rng);

// Lloyd iteration from the given centroids: assign each subpath to the
// nearest centroid (ties to the lowest index), update each centroid to the
// unweighted mean of its members (azimuths unwrapped to within 180 deg of
// the current centroid azimuth), until the largest centroid movement drops
// below tol or max_iters is reached. Empty clusters are repaired by
// reseeding at the subpath farthest from its assigned centroid; if repairs
// keep cycling, the surplus centroids are dropped and the returned k is
// smaller than requested. distortion_trace, when given, receives the
// distortion after every assignment pass.
ClusterSet lloyd_iterate(const RayTable& table, const std::vector<Centroid>& centroids,
                         double beta, std::size_t max_iters, double tol,
                         std::vector<double>* distortion_trace = nullptr);

// Recomputes the distortion of a ClusterSet from scratch.
double recompute_distortion(const RayTable& table, const ClusterSet& set, double beta);

// Cluster-count validity index, lower is better. Pluggable so that other
// formulations can be swapped in without touching select_k callers.
using ValidityIndex = std::function<double(const RayTable&, const ClusterSet&, double)>;

// Default index: mean intra-cluster distance divided by the minimum
// inter-centroid distance. Returns NaN when undefined (k < 2 or coincident
// centroids).
double mean_intra_to_min_inter_index(const RayTable& table, const ClusterSet& set, double beta);

// Best of `restarts` seeded k-means++ runs at fixed k (lowest distortion).
// Restart r uses the stream derived from (rng_seed, k, r), so results do not
// depend on evaluation order.
ClusterSet best_fixed_k(const RayTable& table, std::size_t k, const ClusteringConfig& config);

struct KSelection {
    std::size_t k_opt = 1;
    ClusterSet clusters;
    // True when no candidate K >= 2 produced a usable index (degenerate
    // input, e.g. all subpaths identical or fewer than 2 subpaths).
    bool degenerate = false;
    // index_by_k[K] for K in [2, k_max]; NaN where undefined. Entries 0, 1
    // are always NaN.
    std::vector<double> index_by_k;
};

// Sweeps K in [1, min(k_max, n_subpaths)], keeps the best restart per K and
// returns the K minimizing the validity index (ties to the smaller K).
KSelection select_k(const RayTable& table, const ClusteringConfig& config,
                    const ValidityIndex& index = mean_intra_to_min_inter_index);

}  // namespace mmic

#endif  // MMIC_CLUSTERING_HPP
