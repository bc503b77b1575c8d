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

#include "mmic/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "json.hpp"

namespace mmic {

namespace detail {

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-15;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny)
        d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny)
            d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny)
            d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps)
            break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw ValidationError("regularized_incomplete_beta: a, b must be > 0");
    if (x <= 0.0)
        return 0.0;
    if (x >= 1.0)
        return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

}  // namespace detail

double sample_mean(const Eigen::ArrayXd& samples) {
    if (samples.size() == 0)
        throw ValidationError("sample_mean: empty sample set");
    return samples.mean();
}

double sample_median(const Eigen::ArrayXd& samples) {
    if (samples.size() == 0)
        throw ValidationError("sample_median: empty sample set");
    std::vector<double> v(samples.data(), samples.data() + samples.size());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1)
        return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double sample_variance(const Eigen::ArrayXd& samples) {
    if (samples.size() < 2)
        throw ValidationError("sample_variance: need at least 2 samples");
    const double mean = samples.mean();
    return (samples - mean).square().sum() / static_cast<double>(samples.size() - 1);
}

NegativeBinomialParams negative_binomial_moment_init(double mean, double variance) {
    if (!(variance > mean) || !(mean > 0.0))
        throw FitError("negative binomial moments: need variance > mean > 0");
    const double p0 = mean / variance;
    const double r0 = mean * p0 / (1.0 - p0);
    return {p0, r0};
}

namespace {

void check_counts(const Eigen::ArrayXd& samples, const char* what) {
    for (Eigen::Index i = 0; i < samples.size(); ++i) {
        const double v = samples[i];
        if (!std::isfinite(v) || v < 0.0)
            throw FitError(std::string(what) + ": samples must be finite and >= 0");
        if (v != std::floor(v))
            throw FitError(std::string(what) + ": non-integer sample");
    }
}

// Run-length histogram of integer samples; keeps the likelihood O(distinct)
// per evaluation instead of O(n).
std::map<long long, long long> count_histogram(const Eigen::ArrayXd& samples) {
    std::map<long long, long long> hist;
    for (Eigen::Index i = 0; i < samples.size(); ++i)
        ++hist[static_cast<long long>(samples[i])];
    return hist;
}

template <typename F>
double golden_section_maximize(F&& f, double lo, double hi, double tol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double negative_binomial_log_likelihood(const Eigen::ArrayXd& samples, double p, double r) {
    check_counts(samples, "negative_binomial_log_likelihood");
    if (!(p > 0.0) || !(p < 1.0) || !(r > 0.0))
        throw ValidationError("negative_binomial_log_likelihood: invalid parameters");
    const auto hist = count_histogram(samples);
    const double n = static_cast<double>(samples.size());
    double ll = 0.0;
    double sum_counts = 0.0;
    for (const auto& [value, count] : hist) {
        const double v = static_cast<double>(value);
        const double c = static_cast<double>(count);
        ll += c * (std::lgamma(v + r) - std::lgamma(v + 1.0));
        sum_counts += c * v;
    }
    ll += -n * std::lgamma(r) + sum_counts * std::log1p(-p) + n * r * std::log(p);
    return ll;
}

FittedModel fit_negative_binomial(const Eigen::ArrayXd& samples) {
    if (samples.size() < 2)
        throw FitError("fit_negative_binomial: need at least 2 samples");
    check_counts(samples, "fit_negative_binomial");
    const double mean = samples.mean();
    const double variance = sample_variance(samples);
    if (!(variance > mean))
        throw FitError(
            "fit_negative_binomial: sample variance must exceed the mean (overdispersion)");

    // Starting point kept for diagnostics; the bracketed search below covers
    // it by construction.
    (void)negative_binomial_moment_init(mean, variance);

    const auto hist = count_histogram(samples);
    const double n = static_cast<double>(samples.size());
    double sum_values = 0.0;
    double const_term = 0.0;
    for (const auto& [value, count] : hist) {
        sum_values += static_cast<double>(count) * static_cast<double>(value);
        const_term -= static_cast<double>(count) * std::lgamma(static_cast<double>(value) + 1.0);
    }

    // Profile likelihood over r with p(r) = r / (r + mean).
    const auto profile_ll = [&](double log_r) {
        const double r = std::exp(log_r);
        const double p = r / (r + mean);
        double ll = const_term - n * std::lgamma(r);
        for (const auto& [value, count] : hist)
            ll += static_cast<double>(count) * std::lgamma(static_cast<double>(value) + r);
        ll += sum_values * std::log1p(-p) + n * r * std::log(p);
        return ll;
    };

    const double log_r =
        golden_section_maximize(profile_ll, std::log(1e-3), std::log(1e3), 1e-8);
    const double r = std::exp(log_r);
    const double p = r / (r + mean);
    const double ll = negative_binomial_log_likelihood(samples, p, r);
    return make_negative_binomial_model(p, r, static_cast<std::size_t>(samples.size()), ll);
}

FittedModel fit_exponential(const Eigen::ArrayXd& samples) {
    if (samples.size() < 1)
        throw FitError("fit_exponential: need at least 1 sample");
    for (Eigen::Index i = 0; i < samples.size(); ++i)
        if (!std::isfinite(samples[i]) || samples[i] <= 0.0)
            throw FitError("fit_exponential: samples must be finite and > 0");
    const double mean = samples.mean();
    const double lambda = 1.0 / mean;
    const double n = static_cast<double>(samples.size());
    const double ll = n * std::log(lambda) - lambda * samples.sum();
    return make_exponential_model(lambda, static_cast<std::size_t>(samples.size()), ll);
}

FittedModel fit_lognormal(const Eigen::ArrayXd& samples) {
    if (samples.size() < 2)
        throw FitError("fit_lognormal: need at least 2 samples");
    for (Eigen::Index i = 0; i < samples.size(); ++i)
        if (!std::isfinite(samples[i]) || samples[i] <= 0.0)
            throw FitError("fit_lognormal: samples must be finite and > 0");
    const Eigen::ArrayXd logs = samples.log();
    const double mu = logs.mean();
    const double sigma2 = (logs - mu).square().mean();  // population (MLE) estimator
    if (!(sigma2 > 0.0))
        throw FitError("fit_lognormal: degenerate fit, all samples equal");
    const double sigma = std::sqrt(sigma2);
    const double n = static_cast<double>(samples.size());
    const double ll = -logs.sum() - n * std::log(sigma * std::sqrt(2.0 * std::numbers::pi)) -
                      (logs - mu).square().sum() / (2.0 * sigma2);
    return make_lognormal_model(mu, sigma, static_cast<std::size_t>(samples.size()), ll);
}

FittedModel fit_constant(const Eigen::ArrayXd& samples) {
    if (samples.size() == 0)
        throw FitError("fit_constant: empty sample set");
    const double value = std::round(sample_median(samples));
    return make_constant_model(value, static_cast<std::size_t>(samples.size()), 0.0);
}

namespace {

double negative_binomial_pmf(const NegativeBinomialParams& nb, long long m) {
    if (m < 0)
        return 0.0;
    const double v = static_cast<double>(m);
    const double ln_pmf = std::lgamma(v + nb.r) - std::lgamma(v + 1.0) - std::lgamma(nb.r) +
                          v * std::log1p(-nb.p) + nb.r * std::log(nb.p);
    return std::exp(ln_pmf);
}

}  // namespace

double model_cdf(const FittedModel& model, double x) {
    switch (model.family) {
        case ModelFamily::Constant: {
            return x < constant_params(model).value ? 0.0 : 1.0;
        }
        case ModelFamily::NegativeBinomial: {
            if (x < 0.0)
                return 0.0;
            const auto& nb = negative_binomial_params(model);
            const double m = std::floor(x);
            // P(M <= m) = I_p(r, m + 1)
            return detail::regularized_incomplete_beta(nb.r, m + 1.0, nb.p);
        }
        case ModelFamily::Exponential: {
            if (x < 0.0)
                return 0.0;
            return -std::expm1(-exponential_params(model).lambda * x);
        }
        case ModelFamily::Lognormal: {
            if (x <= 0.0)
                return 0.0;
            const auto& ln = lognormal_params(model);
            return detail::normal_cdf((std::log(x) - ln.mu) / ln.sigma);
        }
    }
    throw ValidationError("model_cdf: unknown family");
}

double model_mean(const FittedModel& model) {
    switch (model.family) {
        case ModelFamily::Constant:
            return constant_params(model).value;
        case ModelFamily::NegativeBinomial: {
            const auto& nb = negative_binomial_params(model);
            return nb.r * (1.0 - nb.p) / nb.p;
        }
        case ModelFamily::Exponential:
            return 1.0 / exponential_params(model).lambda;
        case ModelFamily::Lognormal: {
            const auto& ln = lognormal_params(model);
            return std::exp(ln.mu + 0.5 * ln.sigma * ln.sigma);
        }
    }
    throw ValidationError("model_mean: unknown family");
}

double model_median(const FittedModel& model) {
    switch (model.family) {
        case ModelFamily::Constant:
            return constant_params(model).value;
        case ModelFamily::NegativeBinomial: {
            const auto& nb = negative_binomial_params(model);
            double cdf = 0.0;
            for (long long m = 0; m <= 100000000; ++m) {
                cdf += negative_binomial_pmf(nb, m);
                if (cdf >= 0.5)
                    return static_cast<double>(m);
            }
            throw ValidationError("model_median: negative binomial median out of range");
        }
        case ModelFamily::Exponential:
            return std::numbers::ln2 / exponential_params(model).lambda;
        case ModelFamily::Lognormal:
            return std::exp(lognormal_params(model).mu);
    }
    throw ValidationError("model_median: unknown family");
}

double sample_model(const FittedModel& model, Rng& rng) {
    switch (model.family) {
        case ModelFamily::Constant:
            return constant_params(model).value;
        case ModelFamily::NegativeBinomial: {
            // Inversion through the PMF recurrence
            // f(m+1) = f(m) (m + r) / (m + 1) (1 - p).
            const auto& nb = negative_binomial_params(model);
            const double u = rng.uniform01();
            double pmf = std::exp(nb.r * std::log(nb.p));
            double cdf = pmf;
            long long m = 0;
            while (u >= cdf && m < 100000000) {
                pmf *= (static_cast<double>(m) + nb.r) / (static_cast<double>(m) + 1.0) *
                       (1.0 - nb.p);
                cdf += pmf;
                ++m;
            }
            return static_cast<double>(m);
        }
        case ModelFamily::Exponential:
            return rng.exponential(exponential_params(model).lambda);
        case ModelFamily::Lognormal: {
            const auto& ln = lognormal_params(model);
            return rng.lognormal(ln.mu, ln.sigma);
        }
    }
    throw ValidationError("sample_model: unknown family");
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json params_to_json(const FittedModel& model) {
    ordered_json j;
    switch (model.family) {
        case ModelFamily::Constant:
            j["value"] = constant_params(model).value;
            break;
        case ModelFamily::NegativeBinomial:
            j["p"] = negative_binomial_params(model).p;
            j["r"] = negative_binomial_params(model).r;
            break;
        case ModelFamily::Exponential:
            j["lambda"] = exponential_params(model).lambda;
            break;
        case ModelFamily::Lognormal:
            j["mu"] = lognormal_params(model).mu;
            j["sigma"] = lognormal_params(model).sigma;
            break;
    }
    return j;
}

FittedModel model_from_json(ModelFamily family, const ordered_json& entry) {
    const auto& params = entry.at("params");
    const std::size_t n = entry.at("n_samples").get<std::size_t>();
    const double ll = entry.at("log_likelihood").get<double>();
    switch (family) {
        case ModelFamily::Constant:
            return make_constant_model(params.at("value").get<double>(), n, ll);
        case ModelFamily::NegativeBinomial:
            return make_negative_binomial_model(params.at("p").get<double>(),
                                                params.at("r").get<double>(), n, ll);
        case ModelFamily::Exponential:
            return make_exponential_model(params.at("lambda").get<double>(), n, ll);
        case ModelFamily::Lognormal:
            return make_lognormal_model(params.at("mu").get<double>(),
                                        params.at("sigma").get<double>(), n, ll);
    }
    throw FormatError("fit report: unknown family");
}

}  // namespace

std::string write_fit_report(std::span<const FitReportEntry> entries) {
    ordered_json fits = ordered_json::array();
    for (const FitReportEntry& e : entries) {
        ordered_json j;
        j["characteristic"] = e.characteristic;
        j["family"] = family_name(e.family);
        if (e.model) {
            j["params"] = params_to_json(*e.model);
            j["n_samples"] = e.model->n_samples;
            j["log_likelihood"] = e.model->log_likelihood;
            j["model_mean"] = model_mean(*e.model);
            j["model_median"] = model_median(*e.model);
        } else {
            j["error"] = e.error;
            j["n_samples"] = e.n_samples;
        }
        j["empirical_mean"] = e.empirical_mean;
        j["empirical_median"] = e.empirical_median;
        fits.push_back(std::move(j));
    }
    ordered_json doc;
    doc["fits"] = std::move(fits);
    return doc.dump(2) + "\n";
}

std::vector<FitReportEntry> parse_fit_report(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw FormatError(std::string("fit report: invalid JSON: ") + e.what());
    }
    if (!doc.contains("fits") || !doc["fits"].is_array())
        throw FormatError("fit report: missing 'fits' array");

    std::vector<FitReportEntry> entries;
    try {
        for (const auto& j : doc["fits"]) {
            FitReportEntry e;
            e.characteristic = j.at("characteristic").get<std::string>();
            e.family = family_from_name(j.at("family").get<std::string>());
            if (j.contains("error")) {
                e.error = j["error"].get<std::string>();
            } else {
                e.model = model_from_json(e.family, j);
            }
            e.n_samples = j.at("n_samples").get<std::size_t>();
            if (j.contains("empirical_mean"))
                e.empirical_mean = j["empirical_mean"].get<double>();
            if (j.contains("empirical_median"))
                e.empirical_median = j["empirical_median"].get<double>();
            entries.push_back(std::move(e));
        }
    } catch (const ordered_json::exception& e) {
        throw FormatError(std::string("fit report: ") + e.what());
    }
    return entries;
}

}  // namespace mmic
