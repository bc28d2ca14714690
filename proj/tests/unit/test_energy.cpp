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

#include "doctest.h"
#include "rangelab/energy.hpp"
#include "rangelab/stats.hpp"

using namespace rangelab;

namespace {

RangeProcess hand(const std::vector<std::int64_t>& xs) {
  PathSample p;
  p.spec = WalkSpec::tabulated(1, 2.0, {{{1}, 0.5}, {{-1}, 0.5}});
  p.n = xs.size() - 1;
  p.coords = xs;
  return range_process(p);
}

}  // namespace

TEST_CASE("energy on a hand path") {
  const auto rp = hand({0, 1, 0, 2});
  CHECK(energy_discrete(rp, KernelSpec::constant(1.0), 3.0) == doctest::Approx(2.0));
  CHECK(energy_discrete(rp, KernelSpec::parametric(1.0, 1.0), 3.0) == doctest::Approx(4.0 / 3.0));
  CHECK(energy_discrete(rp, KernelSpec::constant(1.0), 0.5) == 0.0);
  CHECK(energy_discrete(hand({0, 0, 0}), KernelSpec::parametric(1.0, 1.0), 2.0) == 0.0);
  CHECK(energy_interpolated(hand({0, 0, 0}), KernelSpec::parametric(1.0, 1.0), 2.0) == 0.0);
}

TEST_CASE("constant kernel recovers the range") {
  const auto k = KernelSpec::constant(1.0);
  const auto rp = range_process(WalkSpec::lazy_srw(2), 2000, 11);
  const EnergyTable table(k, 2000);
  for (std::size_t t : {0, 1, 17, 1000, 2000}) {
    CHECK(energy_discrete(rp, k, static_cast<double>(t)) == static_cast<double>(rp.R[t]) - 1.0);
    CHECK(table.at(rp, t) == doctest::Approx(rp.R[t] - 1.0).epsilon(1e-12));
  }
  CHECK(energy_interpolated(rp, k, 17.3) == doctest::Approx(interpolate(rp, 17.3) - 1.0).epsilon(1e-12));
}

TEST_CASE("table and closed form agree") {
  const auto k = KernelSpec::parametric(2.0, 0.3);
  const auto rp = range_process(WalkSpec::srw(3), 1500, 2);
  const EnergyTable table(k, 1500);
  for (std::size_t t : {3, 250, 1500}) {
    CHECK(table.at(rp, t) == doctest::Approx(energy_interpolated(rp, k, static_cast<double>(t))).epsilon(1e-10));
  }
  const auto s = energy_sample(rp, k, {0.0, 750.0, 1500.0});
  CHECK(s.E.size() == 3);
  CHECK(s.Ecal[2] == doctest::Approx(table.at(rp, 1500)).epsilon(1e-10));
}

TEST_CASE("integration by parts identity") {
  const auto spec = WalkSpec::srw(4);
  const auto suite = make_scale_suite(4, 2.0, spec, 4096);
  const auto k = KernelSpec::parametric(1.0, 0.25);
  const auto rp = range_process(spec, 4096, 5);
  for (double t : {0.37, 1.0}) CHECK(energy_ibp_identity(rp, suite, k, 4096, t).pass());
}

TEST_CASE("admissibility and rescaling errors") {
  const auto sup = make_scale_suite(4, 2.0, WalkSpec::srw(4), 1024);
  CHECK(chi_admissible(sup, -0.4));
  CHECK_FALSE(chi_admissible(sup, -0.6));
  const std::vector<std::vector<double>> rows(4, std::vector<double>{0.0, 1.0});
  CHECK_THROWS_AS(rescale_energy_grid(rows, sup, KernelSpec::parametric(1.0, 0.7), 1024, {0.0, 1.0}), DomainError);
  const auto sub = make_scale_suite(1, 2.0, WalkSpec::srw(1), 1024);
  CHECK(chi_admissible(sub, -0.4));
  CHECK_FALSE(chi_admissible(sub, -0.6));
}

TEST_CASE("limit sampler") {
  CHECK(limit_covariance(0.5, 1.0, 1.0) == doctest::Approx(0.5));
  CHECK(limit_covariance(0.0, 0.3, 0.8) == doctest::Approx(0.3));
  CHECK(limit_covariance(0.25, 0.6, 0.6) == doctest::Approx(std::pow(0.6, 1.5) / 1.5));
  const auto half = limit_energy_sampler(Regime::Sup, 0.5, {0.0, 1.0}, 3, 100000);
  std::vector<double> col;
  for (const auto& r : half) {
    CHECK(r[0] == 0.0);
    col.push_back(r[1]);
  }
  CHECK(variance(col) == doctest::Approx(0.5).epsilon(0.02));
  // chi = 0 is Brownian motion
  const auto bm = limit_energy_sampler(Regime::Sup, 0.0, {0.25, 0.5}, 4, 2000);
  std::vector<double> x;
  for (const auto& r : bm) x.push_back(r[1] / std::sqrt(0.5));
  CHECK(ks_one_sample(x, [](double v) { return 0.5 * std::erfc(-v / std::sqrt(2.0)); }).p_value > 0.01);
  CHECK_THROWS_AS(limit_energy_sampler(Regime::Mid, 0.0, {1.0}, 1, 10), DomainError);
  CHECK_THROWS_AS(limit_energy_sampler(Regime::Sup, -0.6, {1.0}, 1, 10), DomainError);
  // SUB with chi = 0 returns increments of the supplied path
  const std::vector<HolderPath> paths{HolderPath(0.0, 1.0, {0.0, 0.4, -0.2, 0.1}, 0.5)};
  const auto sub = limit_energy_sampler(Regime::Sub, 0.0, {1.0 / 3.0, 1.0}, 1, 1, &paths);
  CHECK(sub[0][0] == doctest::Approx(0.4));
  CHECK(sub[0][1] == doctest::Approx(0.1));
}
