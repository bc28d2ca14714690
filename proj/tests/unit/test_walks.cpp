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

#include <cmath>
#include <set>

#include "doctest.h"
#include "rangelab/walks.hpp"

using namespace rangelab;

TEST_CASE("walk specs validate") {
  CHECK_NOTHROW(WalkSpec::srw(3).validate());
  CHECK_THROWS_AS(WalkSpec::srw(7).validate(), DomainError);
  CHECK_THROWS_AS(WalkSpec::lazy_srw(2, 1.0).validate(), DomainError);
  CHECK_THROWS_AS(WalkSpec::tabulated(1, 2.0, {{{1}, 0.3}, {{-1}, 0.3}}).validate(), DomainError);
  CHECK_NOTHROW(WalkSpec::tabulated(1, 2.0, {{{1}, 0.5}, {{-1}, 0.5}}).validate());
}

TEST_CASE("paths are deterministic and streaming matches storage") {
  const auto spec = WalkSpec::lazy_srw(2);
  const auto a = sample_path(spec, 500, 42);
  const auto b = sample_path(spec, 500, 42);
  CHECK(a.coords == b.coords);
  CHECK(a.coords != sample_path(spec, 500, 43).coords);
  std::size_t mismatches = 0;
  for_each_position(spec, 500, 42, [&](std::size_t k, std::span<const std::int64_t> x) {
    for (int i = 0; i < 2; ++i) mismatches += x[i] != a.at(k)[i];
  });
  CHECK(mismatches == 0);
}

TEST_CASE("nearest neighbour steps have unit length") {
  const auto path = sample_path(WalkSpec::srw(4), 1000, 5);
  for (std::size_t k = 1; k <= 1000; ++k) {
    std::int64_t norm = 0;
    for (int i = 0; i < 4; ++i) norm += std::abs(path.at(k)[i] - path.at(k - 1)[i]);
    REQUIRE(norm == 1);
  }
  CHECK_THROWS_AS(sample_path(WalkSpec::srw(1), 100, 1, 50), ResourceError);
}

TEST_CASE("Pareto magnitudes follow the power law") {
  const ParetoMagnitude pm(1.5);
  // pmf ratio k^(-1-beta)
  CHECK(pm.pmf(2) / pm.pmf(1) == doctest::Approx(std::pow(2.0, -2.5)).epsilon(1e-12));
  Rng rng(9);
  const int N = 200000;
  std::vector<double> counts(6, 0.0);
  for (int i = 0; i < N; ++i) {
    const auto k = pm.sample(rng);
    counts[std::min<std::int64_t>(k, 6) - 1] += 1.0;
  }
  // chi-square against the exact pmf on {1..5, >=6}
  double stat = 0.0, rest = 1.0;
  for (int k = 1; k <= 5; ++k) {
    const double e = N * pm.pmf(k);
    rest -= pm.pmf(k);
    stat += (counts[k - 1] - e) * (counts[k - 1] - e) / e;
  }
  stat += (counts[5] - N * rest) * (counts[5] - N * rest) / (N * rest);
  CHECK(stat < 20.5);  // chi2(5) upper 0.001 quantile
}

TEST_CASE("characteristic functions") {
  const double x[2] = {0.3, -1.1};
  CHECK(char_fn_real(WalkSpec::srw(2), x) == doctest::Approx((std::cos(0.3) + std::cos(1.1)) / 2));
  CHECK(char_fn_real(WalkSpec::lazy_srw(2, 0.25), x) ==
        doctest::Approx(0.25 + 0.75 * (std::cos(0.3) + std::cos(1.1)) / 2));
  // Pareto series against a direct sum of the first magnitudes and the tail bound
  const ParetoMagnitude pm(1.2);
  double direct = 0.0;
  for (std::int64_t k = 1; k <= 2000000; ++k) direct += pm.pmf(k) * std::cos(0.7 * static_cast<double>(k));
  CHECK(pm.cosine_series(0.7) == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("support and lattice") {
  const auto srw = support_check(WalkSpec::srw(2));
  CHECK(srw.generating);
  CHECK(srw.period == 2);
  const auto tab = support_check(WalkSpec::tabulated(1, 2.0, {{{2}, 0.5}, {{-2}, 0.5}}));
  CHECK_FALSE(tab.generating);
  const auto one_sided = support_check(WalkSpec::tabulated(1, 1.0, {{{1}, 0.5}, {{2}, 0.5}}));
  CHECK(one_sided.period == 0);
  const auto basis = lattice_basis({{2, 0}, {0, 3}, {2, 3}}, 2);
  CHECK(std::abs(basis[0][0] * basis[1][1]) == 6);
}

TEST_CASE("spec json round trip and digest") {
  const auto s = WalkSpec::product_pareto(2, 1.7);
  const nlohmann::json j = s;
  const auto back = j.get<WalkSpec>();
  CHECK(back.digest() == s.digest());
  CHECK(WalkSpec::srw(2).digest() != WalkSpec::srw(3).digest());
  CHECK_THROWS_AS(nlohmann::json::parse(R"({"d":"x"})").get<WalkSpec>(), ConfigError);
}
