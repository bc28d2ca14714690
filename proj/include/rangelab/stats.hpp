/* Copyright 2026 The rangelab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rangelab/youngint.hpp"

namespace rangelab {

struct StatReport {
  std::string name;
  double statistic = 0.0;
  double p_value = 1.0;   // or the bound being compared, see `detail`
  double threshold = 0.0;
  bool pass = false;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::string detail;
};

void to_json(nlohmann::json& j, const StatReport& r);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool exact = false;
};

/// Kolmogorov distribution tail P(K > lambda).
double kolmogorov_tail(double lambda);

/// One-sample KS against a continuous CDF; exact (Marsaglia-Tsang-Wang) for
/// moderate n*D, asymptotic with the Stephens correction otherwise.
KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf);

/// Two-sample KS; exact lattice-path recursion when n*m <= 4e6.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// KS against a normal with estimated mean and variance (Lilliefors); p-value
/// from the Dallal-Wilkinson approximation.
KsResult lilliefors(std::vector<double> x);

/// Pearson chi-square goodness of fit; `expected` are probabilities.
KsResult chi_square_gof(const std::vector<double>& observed, const std::vector<double>& expected);

double mean(const std::vector<double>& x);
double variance(const std::vector<double>& x);  // unbiased
double skewness(const std::vector<double>& x);  // g1, moment estimator
double covariance(const std::vector<double>& x, const std::vector<double>& y);

struct Interval {
  double estimate = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double se = 0.0;
};

/// Percentile bootstrap of an arbitrary statistic.
Interval bootstrap(const std::vector<double>& x, const std::function<double(const std::vector<double>&)>& stat,
                   std::size_t resamples, std::uint64_t seed, double level = 0.95);

/// Sample variance with a jackknife normal interval.
Interval jackknife_variance(const std::vector<double>& x, double level = 0.95);

struct HolderEstimate {
  double alpha = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> lags;
  std::vector<double> mean_log_increment;
};

/// Regression of log max-increment on log lag over dyadic lags. For each lag
/// the max is taken over `windows` evenly spaced non-overlapping increments so
/// the slope is exact for self-similar paths.
HolderEstimate holder_exponent(const std::vector<HolderPath>& paths, std::size_t windows = 4,
                               std::size_t resamples = 400, std::uint64_t seed = 7);

/// OLS slope and intercept.
std::pair<double, double> ols(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rangelab
