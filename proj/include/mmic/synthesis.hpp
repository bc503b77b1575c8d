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

#ifndef MMIC_SYNTHESIS_HPP
#define MMIC_SYNTHESIS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mmic/types.hpp"

namespace mmic {

// Everything needed to draw stochastic channel realizations: one fitted
// model per intra-cluster characteristic plus optional cluster anchors.
// When anchors are absent, cluster n gets delay n * 100 ns, an azimuth
// drawn uniformly from [-60, 60] deg and elevation 0.
struct SynthesisProfile {
    FittedModel n_clusters_model;                // Constant
    FittedModel subpath_count_model;             // NegativeBinomial
    FittedModel delay_spread_model;              // Exponential, rate per second
    FittedModel aoa_az_spread_model;             // Lognormal, degrees
    FittedModel aoa_el_spread_model;             // Lognormal, degrees
    std::optional<std::vector<double>> cluster_anchor_delays_s;
    std::optional<std::vector<std::pair<double, double>>> cluster_anchor_angles_deg;  // (az, el)
    std::uint64_t rng_seed = 0;
};

// Throws ValidationError when a slot holds the wrong model family.
void validate_profile(const SynthesisProfile& profile);

// Parameter presets from 28 GHz NLOS street-canyon characterizations.
SynthesisProfile raytracing_preset(std::uint64_t rng_seed = 0);
SynthesisProfile measurement_preset(std::uint64_t rng_seed = 0);

struct SynthSubpath {
    double gain_amplitude = 0.0;  // linear; power = amplitude^2
    double phase_rad = 0.0;       // [0, 2*pi)
    double delay_s = 0.0;
    double aoa_az_deg = 0.0;  // raw branch value; may exceed [-180, 180)
    double aoa_el_deg = 0.0;
    double aod_az_deg = 0.0;
    double aod_el_deg = 0.0;
};

struct SynthCluster {
    double anchor_delay_s = 0.0;
    double anchor_aoa_az_deg = 0.0;
    double anchor_aoa_el_deg = 0.0;
    // Spread targets drawn from the profile models. With one subpath the
    // targets cannot be realized and spread_realizable is false.
    double target_delay_spread_s = 0.0;
    double target_aoa_az_spread_deg = 0.0;
    double target_aoa_el_spread_deg = 0.0;
    bool spread_realizable = true;
    std::vector<SynthSubpath> subpaths;
};

struct ChannelRealization {
    std::vector<SynthCluster> clusters;
};

// Draws one realization. Cluster count from the Constant model; per-cluster
// subpath counts from the negative binomial (resampled until >= 1); spread
// targets from the exponential/lognormal models; intra-cluster offsets are
// rescaled so each realized power-weighted spread equals its target exactly
// (subpaths share equal power). Clusters carry equal power and the total is
// normalized to 1; phases are i.i.d. uniform on [0, 2*pi); AoD angles are
// generated by the same procedure with independent draws. Deterministic in
// profile.rng_seed.
ChannelRealization synthesize(const SynthesisProfile& profile);

// Flattens a realization into a RayTable (power = amplitude^2, azimuths
// normalized into [-180, 180)).
RayTable realization_to_ray_table(const ChannelRealization& realization,
                                  const std::string& location_id);

// JSON sidecar recording the drawn targets (N, {M_n}, {S_n}, {Q_n}, {V_n})
// for closed-loop checks.
std::string write_realization_sidecar(const ChannelRealization& realization,
                                      const std::string& location_id);

}  // namespace mmic

#endif  // MMIC_SYNTHESIS_HPP
