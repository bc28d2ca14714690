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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "rangelab/stats.hpp"

using namespace rangelab;

namespace {

double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::vector<double> with_sup_distance(std::size_t n, double d) {
  std::vector<double> u;
  for (std::size_t i = 0; i < n; ++i) u.push_back(std::max(0.0, (i + 1.0) / n - d));
  return u;
}

}  // namespace

// Reference values from scipy.stats (kstwo, ks_2samp, chi2), statsmodels
// (lilliefors) and, for n = 400, Durbin's matrix formula in 50-digit arithmetic.
TEST_CASE("one-sample KS against reference values") {
  auto r = ks_one_sample(with_sup_distance(100, 0.1), uniform_cdf);
  CHECK(r.statistic == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(r.exact);
  CHECK(r.p_value == doctest::Approx(0.252692757006).epsilon(1e-8));
  r = ks_one_sample(with_sup_distance(60, 0.15), uniform_cdf);
  CHECK(r.p_value == doctest::Approx(0.121105349506).epsilon(1e-8));
  r = ks_one_sample(with_sup_distance(400, 0.05), uniform_cdf);
  CHECK(r.p_value == doctest::Approx(0.26121260292565).epsilon(1e-8));
  CHECK(kolmogorov_tail(0.1) == 1.0);
  CHECK(kolmogorov_tail(1.36) == doctest::Approx(0.0494).epsilon(1e-2));
  CHECK_THROWS_AS(ks_one_sample(std::vector<double>(10, 0.5), uniform_cdf), DomainError);
}

TEST_CASE("two-sample KS against reference values") {
  std::vector<double> a, b;
  for (int i = 0; i < 60; ++i) a.push_back((i + 0.5) / 60);
  for (int i = 0; i < 70; ++i) b.push_back(std::pow((i + 0.5) / 70, 1.3));
  const auto r = ks_two_sample(a, b);
  CHECK(r.statistic == doctest::Approx(0.109523809524).epsilon(1e-10));
  CHECK(r.p_value == doctest::Approx(0.788936753437).epsilon(1e-8));
  CHECK(ks_two_sample(a, a).statistic == 0.0);
  CHECK(ks_two_sample(a, a).p_value == doctest::Approx(1.0));
}

TEST_CASE("Lilliefors and chi-square against reference values") {
  std::vector<double> x;
  for (int i = 0; i < 80; ++i) x.push_back(std::pow((i + 0.5) / 80, 2));
  const auto l = lilliefors(x);
  CHECK(l.statistic == doctest::Approx(0.13329295608133).epsilon(1e-10));
  CHECK(l.p_value == doctest::Approx(0.0012649898677).epsilon(1e-6));
  const double h = std::sqrt(37.5);
  const auto c = chi_square_gof({25 + 7.5, 25 - 7.5, 25 + h, 25 - h}, {0.25, 0.25, 0.25, 0.25});
  CHECK(c.statistic == doctest::Approx(7.5).epsilon(1e-12));
  CHECK(c.p_value == doctest::Approx(0.0575584519726).epsilon(1e-9));
}

TEST_CASE("KS calibration and power") {
  int rejected = 0;
  const int trials = 500;
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(123, t));
    std::vector<double> x(10000);
    for (auto& v : x) v = rng.normal();
    rejected += ks_one_sample(x, normal_cdf).p_value < 0.05;
  }
  CHECK(rejected >= 15);
  CHECK(rejected <= 35);
  Rng rng(9);
  std::vector<double> a(2000), b(2000);
  for (auto& v : a) v = rng.normal();
  for (auto& v : b) v = rng.normal() + 0.5;
  CHECK(ks_two_sample(a, b).p_value < 1e-6);
  CHECK(lilliefors(a).p_value > 0.01);
}

TEST_CASE("moments and intervals") {
  const std::vector<double> x{1, 2, 3, 4, 10};
  CHECK(mean(x) == doctest::Approx(4.0));
  CHECK(variance(x) == doctest::Approx(12.5));
  CHECK(covariance(x, x) == doctest::Approx(12.5));
  CHECK(skewness(x) > 0.0);
  CHECK(skewness({1, 2, 3}) == doctest::Approx(0.0));
  const auto jk = jackknife_variance(x);
  CHECK(jk.estimate == doctest::Approx(12.5));
  CHECK(jk.lo < 12.5);
  CHECK(jk.hi > 12.5);
  Rng rng(4);
  std::vector<double> y(500);
  for (auto& v : y) v = rng.normal();
  const auto bs = bootstrap(y, mean, 1000, 1);
  CHECK(bs.lo < 0.0);
  CHECK(bs.hi > 0.0);
  CHECK(bs.hi - bs.lo == doctest::Approx(2 * 1.96 / std::sqrt(500.0)).epsilon(0.15));
  const auto [slope, icept] = ols({0, 1, 2}, {1, 3, 5});
  CHECK(slope == doctest::Approx(2.0));
  CHECK(icept == doctest::Approx(1.0));
}

TEST_CASE("Hoelder exponent estimator") {
  std::vector<HolderPath> lines, bms;
  for (int r = 0; r < 200; ++r) {
    Rng rng(derive_seed(77, r));
    const double slope = 1.0 + rng.uniform();
    std::vector<double> l(1025), w(1025, 0.0);
    for (int i = 0; i <= 1024; ++i) l[i] = slope * i / 1024.0;
    for (int i = 1; i <= 1024; ++i) w[i] = w[i - 1] + rng.normal() / 32.0;
    lines.emplace_back(0.0, 1.0, l, 1.0);
    bms.emplace_back(0.0, 1.0, w, 0.5);
  }
  CHECK(holder_exponent(lines).alpha == doctest::Approx(1.0).epsilon(0.02));
  const auto h = holder_exponent(bms);
  CHECK(h.alpha > 0.42);
  CHECK(h.alpha < 0.52);
  CHECK(h.lo <= h.alpha);
  CHECK(h.hi >= h.alpha);
  CHECK_THROWS_AS(holder_exponent(std::vector<HolderPath>(bms.begin(), bms.begin() + 10)), DomainError);
}
