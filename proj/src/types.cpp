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

#include "mmic/types.hpp"

#include <cmath>

namespace mmic {

double db_to_linear(double p_db) {
    if (!std::isfinite(p_db))
        throw ValidationError("db_to_linear: input must be finite");
    return std::pow(10.0, p_db / 10.0);
}

double linear_to_db(double p_linear) {
    if (!std::isfinite(p_linear) || p_linear <= 0.0)
        throw ValidationError("linear_to_db: input must be finite and > 0");
    return 10.0 * std::log10(p_linear);
}

double normalize_angle(double a_deg) {
    if (!std::isfinite(a_deg))
        throw ValidationError("normalize_angle: input must be finite");
    double wrapped = a_deg - 360.0 * std::floor((a_deg + 180.0) / 360.0);
    // floor rounding can land exactly on +180 for inputs just below the seam
    if (wrapped >= 180.0)
        wrapped -= 360.0;
    return wrapped;
}

Subpath make_subpath(double power, double delay_s, double aoa_az_deg, double aoa_el_deg,
                     std::optional<double> aod_az_deg, std::optional<double> aod_el_deg) {
    if (!std::isfinite(power) || power <= 0.0)
        throw ValidationError("subpath: power must be finite and > 0");
    if (!std::isfinite(delay_s) || delay_s < 0.0)
        throw ValidationError("subpath: delay must be finite and >= 0");

    Subpath s;
    s.power = power;
    s.delay_s = delay_s;
    s.aoa_az_deg = normalize_angle(aoa_az_deg);
    double el = normalize_angle(aoa_el_deg);
    if (el < -90.0 || el > 90.0)
        throw ValidationError("subpath: elevation AoA outside [-90, 90] degrees");
    s.aoa_el_deg = el;
    if (aod_az_deg)
        s.aod_az_deg = normalize_angle(*aod_az_deg);
    if (aod_el_deg) {
        double del = normalize_angle(*aod_el_deg);
        if (del < -90.0 || del > 90.0)
            throw ValidationError("subpath: elevation AoD outside [-90, 90] degrees");
        s.aod_el_deg = del;
    }
    return s;
}

void validate_cluster_set(const RayTable& table, const ClusterSet& set) {
    if (set.k == 0)
        throw ValidationError("cluster set: k must be >= 1");
    if (set.centroids.size() != set.k)
        throw ValidationError("cluster set: centroid count does not match k");
    if (set.assignment.size() != table.subpaths.size())
        throw ValidationError("cluster set: assignment length does not match table");
    std::vector<std::size_t> counts(set.k, 0);
    for (std::size_t a : set.assignment) {
        if (a >= set.k)
            throw ValidationError("cluster set: assignment index out of range");
        ++counts[a];
    }
    for (std::size_t n = 0; n < set.k; ++n)
        if (counts[n] == 0)
            throw ValidationError("cluster set: cluster " + std::to_string(n) + " is empty");
    if (!(set.distortion >= 0.0))
        throw ValidationError("cluster set: distortion must be >= 0");
}

const char* family_name(ModelFamily family) {
    switch (family) {
        case ModelFamily::Constant:
            return "constant";
        case ModelFamily::NegativeBinomial:
            return "negative_binomial";
        case ModelFamily::Exponential:
            return "exponential";
        case ModelFamily::Lognormal:
            return "lognormal";
    }
    throw ValidationError("unknown model family");
}

ModelFamily family_from_name(const std::string& name) {
    if (name == "constant")
        return ModelFamily::Constant;
    if (name == "negative_binomial")
        return ModelFamily::NegativeBinomial;
    if (name == "exponential")
        return ModelFamily::Exponential;
    if (name == "lognormal")
        return ModelFamily::Lognormal;
    throw ValidationError("unknown model family name: " + name);
}

FittedModel make_constant_model(double value, std::size_t n_samples, double log_likelihood) {
    if (!std::isfinite(value))
        throw ValidationError("constant model: value must be finite");
    return FittedModel{ModelFamily::Constant, ConstantParams{value}, n_samples, log_likelihood};
}

FittedModel make_negative_binomial_model(double p, double r, std::size_t n_samples,
                                         double log_likelihood) {
    if (!(p > 0.0) || !(p < 1.0))
        throw ValidationError("negative binomial model: p must be in (0, 1)");
    if (!(r > 0.0) || !std::isfinite(r))
        throw ValidationError("negative binomial model: r must be > 0");
    return FittedModel{ModelFamily::NegativeBinomial, NegativeBinomialParams{p, r}, n_samples,
                       log_likelihood};
}

FittedModel make_exponential_model(double lambda, std::size_t n_samples, double log_likelihood) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw ValidationError("exponential model: lambda must be > 0");
    return FittedModel{ModelFamily::Exponential, ExponentialParams{lambda}, n_samples,
                       log_likelihood};
}

FittedModel make_lognormal_model(double mu, double sigma, std::size_t n_samples,
                                 double log_likelihood) {
    if (!std::isfinite(mu))
        throw ValidationError("lognormal model: mu must be finite");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw ValidationError("lognormal model: sigma must be > 0");
    return FittedModel{ModelFamily::Lognormal, LognormalParams{mu, sigma}, n_samples,
                       log_likelihood};
}

namespace {

template <typename Params>
const Params& params_as(const FittedModel& model, ModelFamily expected) {
    if (model.family != expected || !std::holds_alternative<Params>(model.params))
        throw ValidationError(std::string("model is not of family ") + family_name(expected));
    return std::get<Params>(model.params);
}

}  // namespace

const ConstantParams& constant_params(const FittedModel& model) {
    return params_as<ConstantParams>(model, ModelFamily::Constant);
}
const NegativeBinomialParams& negative_binomial_params(const FittedModel& model) {
    return params_as<NegativeBinomialParams>(model, ModelFamily::NegativeBinomial);
}
const ExponentialParams& exponential_params(const FittedModel& model) {
    return params_as<ExponentialParams>(model, ModelFamily::Exponential);
}
const LognormalParams& lognormal_params(const FittedModel& model) {
    return params_as<LognormalParams>(model, ModelFamily::Lognormal);
}

}  // namespace mmic
