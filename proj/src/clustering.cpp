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

#include "mmic/clustering.hpp"

#include <cmath>
#include <limits>

namespace mmic {

namespace {

constexpr double kSecToNs = 1e9;

double unwrap_to(double a_deg, double center_deg) {
    return a_deg - 360.0 * std::round((a_deg - center_deg) / 360.0);
}

}  // namespace

void validate_config(const ClusteringConfig& config) {
    if (!(config.beta > 0.0))
        throw ValidationError("clustering config: beta must be > 0");
    if (config.k_max < 1)
        throw ValidationError("clustering config: k_max must be >= 1");
    if (config.restarts < 1)
        throw ValidationError("clustering config: restarts must be >= 1");
    if (config.max_iters < 1)
        throw ValidationError("clustering config: max_iters must be >= 1");
    if (!(config.tol > 0.0))
        throw ValidationError("clustering config: tol must be > 0");
}

Eigen::Vector3d metric_point(const Subpath& s, double beta) {
    return {beta * s.delay_s * kSecToNs, s.aoa_az_deg, s.aoa_el_deg};
}

Eigen::Vector3d metric_point(const Centroid& c, double beta) {
    return {beta * c.delay_s * kSecToNs, c.aoa_az_deg, c.aoa_el_deg};
}

Centroid centroid_from_metric_point(const Eigen::Vector3d& w, double beta) {
    return {w[0] / (beta * kSecToNs), w[1], w[2]};
}

Eigen::Matrix3Xd metric_points(const RayTable& table, double beta) {
    Eigen::Matrix3Xd points(3, static_cast<Eigen::Index>(table.subpaths.size()));
    for (std::size_t j = 0; j < table.subpaths.size(); ++j)
        points.col(static_cast<Eigen::Index>(j)) = metric_point(table.subpaths[j], beta);
    return points;
}

double metric(const Subpath& s, const Centroid& c, double beta) {
    return (metric_point(s, beta) - metric_point(c, beta)).norm();
}

std::vector<Centroid> kmeanspp_seed(const RayTable& table, std::size_t k, double beta, Rng& rng) {
    const std::size_t n = table.subpaths.size();
    if (k == 0)
        throw ValidationError("kmeanspp_seed: k must be >= 1");
    if (k > n)
        throw ValidationError("kmeanspp_seed: k exceeds the number of subpaths");

    const Eigen::Matrix3Xd points = metric_points(table, beta);
    std::vector<std::size_t> chosen;
    chosen.reserve(k);
    chosen.push_back(static_cast<std::size_t>(rng.below(n)));

    std::vector<double> d2(n);
    while (chosen.size() < k) {
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t c : chosen)
                best = std::min(best, (points.col(static_cast<Eigen::Index>(j)) -
                                       points.col(static_cast<Eigen::Index>(c)))
                                          .squaredNorm());
            d2[j] = best;
            total += best;
        }
        std::size_t pick;
        if (total > 0.0) {
            const double target = rng.uniform01() * total;
            double acc = 0.0;
            pick = n - 1;  // guards against summation round-off at the tail
            for (std::size_t j = 0; j < n; ++j) {
                acc += d2[j];
                if (acc > target) {
                    pick = j;
                    break;
                }
            }
        } else {
            // Every point coincides with a chosen centroid; fall back to a
            // uniform pick so k centroids are still produced.
            pick = static_cast<std::size_t>(rng.below(n));
        }
        chosen.push_back(pick);
    }

    // Centroids copy the picked subpaths' coordinates directly so a seed
    // coincides exactly with its source point.
    std::vector<Centroid> centroids;
    centroids.reserve(k);
    for (std::size_t c : chosen) {
        const Subpath& s = table.subpaths[c];
        centroids.push_back({s.delay_s, s.aoa_az_deg, s.aoa_el_deg});
    }
    return centroids;
}

namespace {

struct Assignment {
    std::vector<std::size_t> labels;
    std::vector<std::size_t> counts;
    double distortion = 0.0;
};

void assign_points(const Eigen::Matrix3Xd& points, const std::vector<Eigen::Vector3d>& centroids,
                   Assignment& out) {
    const std::size_t n = static_cast<std::size_t>(points.cols());
    out.labels.assign(n, 0);
    out.counts.assign(centroids.size(), 0);
    out.distortion = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < centroids.size(); ++i) {
            const double d2 =
                (points.col(static_cast<Eigen::Index>(j)) - centroids[i]).squaredNorm();
            if (d2 < best) {  // strict: ties stay with the lowest index
                best = d2;
                best_i = i;
            }
        }
        out.labels[j] = best_i;
        ++out.counts[best_i];
        out.distortion += best;
    }
}

// Assignment plus empty-cluster repair. A bounded number of reseeds moves an
// empty centroid onto the subpath farthest from its assigned centroid; when
// the budget runs out (duplicate-dominated inputs), the empty centroids are
// dropped instead and k shrinks.
void assign_with_repair(const Eigen::Matrix3Xd& points, std::vector<Eigen::Vector3d>& centroids,
                        Assignment& out, std::size_t& repair_budget) {
    assign_points(points, centroids, out);
    for (;;) {
        std::size_t empty = centroids.size();
        for (std::size_t i = 0; i < centroids.size(); ++i) {
            if (out.counts[i] == 0) {
                empty = i;
                break;
            }
        }
        if (empty == centroids.size())
            return;

        if (repair_budget > 0) {
            --repair_budget;
            double worst = -1.0;
            std::size_t worst_j = 0;
            for (std::size_t j = 0; j < out.labels.size(); ++j) {
                const double d2 = (points.col(static_cast<Eigen::Index>(j)) -
                                   centroids[out.labels[j]])
                                      .squaredNorm();
                if (d2 > worst) {
                    worst = d2;
                    worst_j = j;
                }
            }
            centroids[empty] = points.col(static_cast<Eigen::Index>(worst_j));
            assign_points(points, centroids, out);
            continue;
        }

        // Budget exhausted: drop every empty centroid. Points were assigned
        // to non-empty centroids only, so the assignment survives reindexing.
        std::vector<Eigen::Vector3d> kept;
        std::vector<std::size_t> remap(centroids.size(), 0);
        for (std::size_t i = 0; i < centroids.size(); ++i) {
            if (out.counts[i] > 0) {
                remap[i] = kept.size();
                kept.push_back(centroids[i]);
            }
        }
        if (kept.empty())
            throw ValidationError("lloyd_iterate: cannot form any non-empty cluster");
        centroids = std::move(kept);
        assign_points(points, centroids, out);
        return;
    }
}

}  // namespace

ClusterSet lloyd_iterate(const RayTable& table, const std::vector<Centroid>& centroids,
                         double beta, std::size_t max_iters, double tol,
                         std::vector<double>* distortion_trace) {
    if (centroids.empty())
        throw ValidationError("lloyd_iterate: centroid list is empty");
    if (table.subpaths.empty())
        throw ValidationError("lloyd_iterate: ray table is empty");
    if (!(beta > 0.0))
        throw ValidationError("lloyd_iterate: beta must be > 0");

    const Eigen::Matrix3Xd points = metric_points(table, beta);
    std::vector<Eigen::Vector3d> c;
    c.reserve(centroids.size());
    for (const Centroid& cc : centroids)
        c.push_back(metric_point(cc, beta));

    std::size_t repair_budget = 2 * c.size() + 8;
    Assignment asg;
    assign_with_repair(points, c, asg, repair_budget);
    if (distortion_trace)
        distortion_trace->push_back(asg.distortion);

    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        // Centroid update: unweighted mean of members, with member azimuths
        // unwrapped around the current centroid azimuth.
        std::vector<Eigen::Vector3d> next(c.size(), Eigen::Vector3d::Zero());
        for (std::size_t j = 0; j < asg.labels.size(); ++j) {
            const std::size_t i = asg.labels[j];
            Eigen::Vector3d p = points.col(static_cast<Eigen::Index>(j));
            p[1] = unwrap_to(p[1], c[i][1]);
            next[i] += p;
        }
        double movement = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i] /= static_cast<double>(asg.counts[i]);
            movement = std::max(movement, (next[i] - c[i]).norm());
        }
        c = std::move(next);

        assign_with_repair(points, c, asg, repair_budget);
        if (distortion_trace)
            distortion_trace->push_back(asg.distortion);

        if (movement < tol)
            break;
    }

    ClusterSet result;
    result.k = c.size();
    result.assignment = asg.labels;
    result.centroids.reserve(c.size());
    for (const auto& w : c)
        result.centroids.push_back(centroid_from_metric_point(w, beta));
    result.distortion = asg.distortion;
    return result;
}

double recompute_distortion(const RayTable& table, const ClusterSet& set, double beta) {
    validate_cluster_set(table, set);
    double total = 0.0;
    for (std::size_t j = 0; j < table.subpaths.size(); ++j) {
        const double d = metric(table.subpaths[j], set.centroids[set.assignment[j]], beta);
        total += d * d;
    }
    return total;
}

double mean_intra_to_min_inter_index(const RayTable& table, const ClusterSet& set, double beta) {
    if (set.k < 2)
        return std::numeric_limits<double>::quiet_NaN();

    double intra = 0.0;
    for (std::size_t j = 0; j < table.subpaths.size(); ++j)
        intra += metric(table.subpaths[j], set.centroids[set.assignment[j]], beta);
    intra /= static_cast<double>(table.subpaths.size());

    double min_inter = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < set.k; ++a)
        for (std::size_t b = a + 1; b < set.k; ++b) {
            const double d =
                (metric_point(set.centroids[a], beta) - metric_point(set.centroids[b], beta))
                    .norm();
            min_inter = std::min(min_inter, d);
        }
    if (!(min_inter > 0.0))
        return std::numeric_limits<double>::quiet_NaN();
    return intra / min_inter;
}

ClusterSet best_fixed_k(const RayTable& table, std::size_t k, const ClusteringConfig& config) {
    validate_config(config);
    ClusterSet best;
    bool have = false;
    for (std::size_t r = 0; r < config.restarts; ++r) {
        Rng rng(derive_seed(config.rng_seed, {static_cast<std::uint64_t>(k),
                                              static_cast<std::uint64_t>(r)}));
        const auto seeds = kmeanspp_seed(table, k, config.beta, rng);
        ClusterSet run = lloyd_iterate(table, seeds, config.beta, config.max_iters, config.tol);
        if (!have || run.distortion < best.distortion) {
            best = std::move(run);
            have = true;
        }
    }
    return best;
}

KSelection select_k(const RayTable& table, const ClusteringConfig& config,
                    const ValidityIndex& index) {
    validate_config(config);
    if (table.subpaths.empty())
        throw ValidationError("select_k: ray table is empty");

    const std::size_t n = table.subpaths.size();
    KSelection sel;
    sel.index_by_k.assign(config.k_max + 1, std::numeric_limits<double>::quiet_NaN());

    if (n < 2) {
        sel.k_opt = 1;
        sel.clusters = best_fixed_k(table, 1, config);
        sel.degenerate = true;
        return sel;
    }

    const std::size_t k_hi = std::min(config.k_max, n);
    std::vector<ClusterSet> best_by_k(k_hi + 1);
    for (std::size_t k = 1; k <= k_hi; ++k)
        best_by_k[k] = best_fixed_k(table, k, config);

    bool found = false;
    std::size_t k_opt = 1;
    double best_index = std::numeric_limits<double>::infinity();
    for (std::size_t k = 2; k <= k_hi; ++k) {
        if (best_by_k[k].k != k)
            continue;  // repairs collapsed this K; not a usable candidate
        const double idx = index(table, best_by_k[k], config.beta);
        if (!std::isfinite(idx))
            continue;
        sel.index_by_k[k] = idx;
        if (idx < best_index) {  // strict: ties resolve toward smaller K
            best_index = idx;
            k_opt = k;
            found = true;
        }
    }

    if (!found) {
        sel.k_opt = 1;
        sel.clusters = best_by_k[1];
        sel.degenerate = true;
        return sel;
    }
    sel.k_opt = k_opt;
    sel.clusters = best_by_k[k_opt];
    sel.degenerate = false;
    return sel;
}

}  // namespace mmic
