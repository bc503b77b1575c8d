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

#ifndef MMIC_FITTING_HPP
#define MMIC_FITTING_HPP

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmic/rng.hpp"
#include "mmic/types.hpp"

namespace mmic {

double sample_mean(const Eigen::ArrayXd& samples);
double sample_median(const Eigen::ArrayXd& samples);
// Unbiased (1/(n-1)) sample variance.
double sample_variance(const Eigen::ArrayXd& samples);

// Method-of-moments starting point for the negative binomial:
// p0 = mean/variance, r0 = mean * p0 / (1 - p0). Requires variance > mean.
NegativeBinomialParams negative_binomial_moment_init(double mean, double variance);

// Log-likelihood of integer counts under NegativeBinomial(p, r) with
// f(M) = Gamma(M+r) / (M! Gamma(r)) * (1-p)^M * p^r.
double negative_binomial_log_likelihood(const Eigen::ArrayXd& samples, double p, double r);

// MLE by profiling p(r) = r / (r + mean) and maximizing over r in
// [1e-3, 1e3] (derivative-free bracketed search, 1e-8 relative tolerance).
// Requires >= 2 nonnegative integer samples with variance > mean; throws
// FitError otherwise.
FittedModel fit_negative_binomial(const Eigen::ArrayXd& samples);

// MLE lambda = 1 / mean. Requires >= 1 strictly positive sample.
FittedModel fit_exponential(const Eigen::ArrayXd& samples);

// MLE mu = mean(ln x), sigma = population std of ln x. Requires >= 2
// strictly positive samples; throws FitError when all samples are equal
// (sigma would be 0).
FittedModel fit_lognormal(const Eigen::ArrayXd& samples);

// Constant(value = rounded median). Requires a non-empty sample set.
FittedModel fit_constant(const Eigen::ArrayXd& samples);

// CDF of a fitted model, clamped to {0, 1} outside the support. Exact for
// Exponential/Lognormal, regularized-incomplete-beta based for the negative
// binomial, a step for Constant.
double model_cdf(const FittedModel& model, double x);

double model_mean(const FittedModel& model);
double model_median(const FittedModel& model);

// One seeded draw from a fitted model.
double sample_model(const FittedModel& model, Rng& rng);

namespace detail {

// Regularized incomplete beta function I_x(a, b), a,b > 0, by continued
// fraction (Lentz).
double regularized_incomplete_beta(double a, double b, double x);

double normal_cdf(double z);

}  // namespace detail

// One fitted characteristic of a pooled sample set, as stored in the fit
// report JSON. `model` is empty and `error` non-empty when the fit failed
// (partial results are still a report).
struct FitReportEntry {
    std::string characteristic;  // n_clusters | m | delay_spread | az_spread | el_spread
    ModelFamily family = ModelFamily::Constant;
    std::optional<FittedModel> model;
    std::string error;
    std::size_t n_samples = 0;
    double empirical_mean = 0.0;
    double empirical_median = 0.0;
};

std::string write_fit_report(std::span<const FitReportEntry> entries);
std::vector<FitReportEntry> parse_fit_report(const std::string& text);

}  // namespace mmic

#endif  // MMIC_FITTING_HPP
