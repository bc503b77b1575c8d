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

#ifndef MMIC_TYPES_HPP
#define MMIC_TYPES_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mmic {

// Error taxonomy. FormatError: malformed input files. ValidationError:
// domain constraints violated (out-of-range values, misaligned inputs).
// FitError: a fit precondition does not hold for the given sample set.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FormatError : Error {
    using Error::Error;
};
struct ValidationError : Error {
    using Error::Error;
};
struct FitError : Error {
    using Error::Error;
};

// dB <-> linear power. Inputs must be finite (and positive for linear_to_db).
double db_to_linear(double p_db);
double linear_to_db(double p_linear);

// Wraps an angle into [-180, 180). Idempotent; input must be finite.
double normalize_angle(double a_deg);

// One resolvable propagation path. Power is linear, delay in seconds,
// angles in degrees. AoD angles are carried through but never clustered on.
struct Subpath {
    double power = 0.0;       // linear, > 0
    double delay_s = 0.0;     // >= 0
    double aoa_az_deg = 0.0;  // [-180, 180)
    double aoa_el_deg = 0.0;  // [-90, 90]
    std::optional<double> aod_az_deg;
    std::optional<double> aod_el_deg;
};

// Validating constructor: normalizes azimuths, checks ranges, throws
// ValidationError on violation.
Subpath make_subpath(double power, double delay_s, double aoa_az_deg, double aoa_el_deg,
                     std::optional<double> aod_az_deg = std::nullopt,
                     std::optional<double> aod_el_deg = std::nullopt);

// All subpaths observed on one Tx-Rx link (one receiver location).
// Subpath order is preserved from ingestion; indices are stable.
struct RayTable {
    std::string location_id;
    std::vector<Subpath> subpaths;
    std::map<std::string, std::string> meta;
};

// Cluster centroid in delay-angle space. The azimuth is kept on the branch
// chosen while averaging and may lie outside [-180, 180) to stay metrically
// close to members near the wrap seam.
struct Centroid {
    double delay_s = 0.0;
    double aoa_az_deg = 0.0;
    double aoa_el_deg = 0.0;
};

// Assignment of a RayTable's subpaths to k clusters. distortion is the sum
// over subpaths of the squared clustering metric to the assigned centroid.
struct ClusterSet {
    std::size_t k = 0;
    std::vector<std::size_t> assignment;  // one entry per subpath, values in [0, k)
    std::vector<Centroid> centroids;      // size k
    double distortion = 0.0;
};

// Throws ValidationError unless sizes line up, every index is in [0, k)
// and every cluster has at least one member.
void validate_cluster_set(const RayTable& table, const ClusterSet& set);

// Per-cluster intra-cluster statistics. Delays in seconds, angles in
// degrees, power linear. mean_excess_delay_s is measured relative to
// min_delay_s (the cluster's earliest arrival).
struct ClusterStats {
    std::size_t m = 0;  // subpath count
    double min_delay_s = 0.0;
    double mean_excess_delay_s = 0.0;
    double rms_delay_spread_s = 0.0;
    double mean_aoa_az_deg = 0.0;
    double aoa_az_spread_deg = 0.0;
    double mean_aoa_el_deg = 0.0;
    double aoa_el_spread_deg = 0.0;
    double total_power = 0.0;
};

enum class ModelFamily { Constant, NegativeBinomial, Exponential, Lognormal };

// Stable lowercase names used in JSON reports and the CLI.
const char* family_name(ModelFamily family);
ModelFamily family_from_name(const std::string& name);

struct ConstantParams {
    double value = 0.0;
};
// Convention: mean = r(1-p)/p, variance = r(1-p)/p^2.
struct NegativeBinomialParams {
    double p = 0.0;  // in (0, 1)
    double r = 0.0;  // > 0
};
struct ExponentialParams {
    double lambda = 0.0;  // rate, > 0, in the reciprocal unit of the samples
};
struct LognormalParams {
    double mu = 0.0;     // mean of ln(sample)
    double sigma = 0.0;  // population std of ln(sample), > 0
};

using ModelParams =
    std::variant<ConstantParams, NegativeBinomialParams, ExponentialParams, LognormalParams>;

struct FittedModel {
    ModelFamily family = ModelFamily::Constant;
    ModelParams params = ConstantParams{0.0};
    std::size_t n_samples = 0;
    double log_likelihood = 0.0;
};

// Validating factories; throw ValidationError when params leave their
// stated open ranges.
FittedModel make_constant_model(double value, std::size_t n_samples = 0,
                                double log_likelihood = 0.0);
FittedModel make_negative_binomial_model(double p, double r, std::size_t n_samples = 0,
                                         double log_likelihood = 0.0);
FittedModel make_exponential_model(double lambda, std::size_t n_samples = 0,
                                   double log_likelihood = 0.0);
FittedModel make_lognormal_model(double mu, double sigma, std::size_t n_samples = 0,
                                 double log_likelihood = 0.0);

// Typed accessors; throw ValidationError if the family does not match.
const ConstantParams& constant_params(const FittedModel& model);
const NegativeBinomialParams& negative_binomial_params(const FittedModel& model);
const ExponentialParams& exponential_params(const FittedModel& model);
const LognormalParams& lognormal_params(const FittedModel& model);

// Step CDF of a sample set: P(x <= values[i]) = probabilities[i] = (i+1)/n.
struct EmpiricalCdf {
    std::vector<double> values;         // non-decreasing
    std::vector<double> probabilities;  // strictly increasing, last == 1
};

}  // namespace mmic

#endif  // MMIC_TYPES_HPP
