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
#include "rangelab/youngint.hpp"

using namespace rangelab;

namespace {

HolderPath analytic(double (*f)(double), double alpha = 1.0) { return HolderPath::from_function(f, 0.0, 1.0, 4, alpha); }

HolderPath brownian(std::uint64_t seed, std::size_t n, double alpha) {
  Rng rng(seed);
  std::vector<double> v(n + 1, 0.0);
  for (std::size_t i = 1; i <= n; ++i) v[i] = v[i - 1] + rng.normal() / std::sqrt(static_cast<double>(n));
  return HolderPath(0.0, 1.0, std::move(v), alpha);
}

}  // namespace

TEST_CASE("Young integrals of smooth paths") {
  const auto id = analytic([](double t) { return t; });
  const auto sq = analytic([](double t) { return t * t; });
  const auto cube = analytic([](double t) { return t * t * t; });
  const auto r = young_integral(id, id);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(std::abs(young_integral(sq, cube).value - 0.6) < 1e-6);
  RiemannPoint right = RiemannPoint::Right;
  YoungOptions o;
  o.point = right;
  CHECK(std::abs(young_integral(sq, cube, o).value - 0.6) < 1e-6);
  const auto c = HolderPath::from_function([](double) { return -1.5; }, 0.0, 1.0, 8, 1.0);
  const auto g = brownian(3, 256, 0.6);
  CHECK(young_integral(c, g).value == doctest::Approx(-1.5 * (g.values().back() - g.values().front())).epsilon(1e-12));
  CHECK_THROWS_AS(young_integral(brownian(1, 64, 0.4), brownian(2, 64, 0.5)), DomainError);
}

TEST_CASE("integration by parts and time inversion") {
  const auto id = analytic([](double t) { return t; });
  const auto smooth = ibp_residual(id, id);
  CHECK(smooth.residual <= smooth.bound);
  CHECK(smooth.residual < 1e-7);
  CHECK(time_inversion_check(id, id).residual < 1e-7);
  const auto f = brownian(10, 1024, 0.6), g = brownian(11, 1024, 0.6);
  const auto ibp = ibp_residual(f, g);
  CHECK(ibp.residual <= ibp.bound + 1e-15);
  const auto inv = time_inversion_check(f, g);
  CHECK(inv.residual <= inv.bound + 1e-15);
  // a coarser integrator on a nested grid
  const auto coarse = brownian(12, 256, 0.6);
  const auto mixed = ibp_residual(f, coarse);
  CHECK(mixed.residual <= mixed.bound + 1e-15);
  const auto c = HolderPath::from_function([](double) { return 2.0; }, 0.0, 1.0, 1024, 1.0);
  CHECK(ibp_residual(c, g).residual < 1e-12);
}

TEST_CASE("bilinearity") {
  const auto f1 = brownian(20, 512, 0.6), f2 = brownian(21, 512, 0.6), g = brownian(22, 512, 0.6);
  std::vector<double> mix(513);
  for (std::size_t i = 0; i <= 512; ++i) mix[i] = 2.0 * f1.values()[i] - 0.5 * f2.values()[i];
  const HolderPath f(0.0, 1.0, mix, 0.6);
  const auto a = young_integral(f1, g), b = young_integral(f2, g), m = young_integral(f, g);
  CHECK(std::abs(m.value - (2.0 * a.value - 0.5 * b.value)) <= m.error + 2.0 * a.error + 0.5 * b.error + 1e-12);
}

TEST_CASE("singular kernel integral oracles") {
  const auto g = brownian(4, 2048, 0.45);
  CHECK(std::abs(singular_kernel_integral(g, 0.0, 0.8).value - (g.at(0.8) - g.at(0.0))) < 1e-10);
  const auto id = analytic([](double t) { return t; });
  CHECK(std::abs(singular_kernel_integral(id, 0.5, 1.0).value - 2.0 / 3.0) < 1e-8);
  const auto sq = analytic([](double t) { return t * t; });
  CHECK(std::abs(singular_kernel_integral(sq, -0.25, 1.0).value - 2.0 * std::beta(2.0, 0.75)) < 1e-6);
  // piecewise-linear closed form against the analytic path
  const auto pl = HolderPath(0.0, 1.0, {0.0, 0.25, 1.0}, 1.0);
  const auto as_fn = HolderPath::from_function([](double t) { return t < 0.5 ? 0.5 * t : 0.25 + 1.5 * (t - 0.5); }, 0.0,
                                               1.0, 4, 1.0);
  CHECK(singular_kernel_integral(pl, -0.3, 0.9).value ==
        doctest::Approx(singular_kernel_integral(as_fn, -0.3, 0.9).value).epsilon(1e-8));
  CHECK_THROWS_AS(singular_kernel_integral(g, -0.5, 1.0), DomainError);
}

TEST_CASE("cutoff consistency") {
  const auto g = brownian(6, 1 << 14, 0.45);
  const double chi = -0.2;
  const double full = singular_kernel_integral(g, chi, 1.0).value;
  std::vector<double> c;
  for (int k = 6; k <= 12; ++k) {
    const double eps = std::ldexp(1.0, -k);
    c.push_back(std::abs(full - cutoff_integral(g, chi, 1.0, eps)) / std::pow(eps, 0.45 + chi));
  }
  // fitted constant stays bounded across eps
  CHECK(*std::max_element(c.begin(), c.end()) < 50.0 * (1e-3 + *std::min_element(c.begin(), c.end())) + 5.0);
}

TEST_CASE("Brownian isometry of the singular kernel") {
  for (double chi : {0.0, 0.5}) {
    double s2 = 0.0;
    const int N = 20000;
    for (int r = 0; r < N; ++r) {
      const auto w = brownian(1000 + r, 256, 0.49);
      const double v = singular_kernel_integral(w, chi, 1.0).value;
      s2 += v * v;
    }
    CHECK(s2 / N == doctest::Approx(1.0 / (2 * chi + 1)).epsilon(0.04));
  }
}

TEST_CASE("Hoelder constant under refinement") {
  const auto g = brownian(7, 512, 0.4);
  const double c = g.holder_constant();
  CHECK(std::isfinite(c));
  CHECK(g.refine().holder_constant() <= c * std::pow(2.0, 1 - 0.4) + 1e-12);
}
