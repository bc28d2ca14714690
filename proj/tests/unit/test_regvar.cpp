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

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "doctest.h"
#include "rangelab/regvar.hpp"

using namespace rangelab;

TEST_CASE("regimes") {
  CHECK(classify_regime(1, 2.0) == Regime::Sub);
  CHECK(classify_regime(2, 2.0) == Regime::Mid);
  CHECK(classify_regime(3, 2.0) == Regime::Sup);
  CHECK(classify_regime(1, 1.0) == Regime::Mid);
  CHECK(classify_regime(3, 2.0 + 1e-14) == Regime::Sup);
  CHECK(regime_chi(2, 2.0) == doctest::Approx(1.0));
  CHECK(regime_chi(4, 2.0) == doctest::Approx(0.5));
}

TEST_CASE("Green function of the 1d walk against binomial returns") {
  // P(S_2k = 0) = C(2k, k) 4^-k
  double oracle = 0.0;
  for (int k = 1; k <= 32; ++k) oracle += std::exp(std::lgamma(2 * k + 1.0) - 2 * std::lgamma(k + 1.0) - 2 * k * std::log(2.0));
  const auto exact = green_truncated(WalkSpec::srw(1), 64);
  CHECK(exact.method == GreenMethod::Exact);
  CHECK(exact.value == doctest::Approx(oracle).epsilon(1e-12));
  GreenOptions q;
  q.method = GreenMethod::Quadrature;
  CHECK(green_truncated(WalkSpec::srw(1), 64, q).value == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("quadrature and exact convolution agree in d = 2") {
  GreenOptions q;
  q.method = GreenMethod::Quadrature;
  const auto spec = WalkSpec::lazy_srw(2);
  const auto ex = green_truncated(spec, 64);
  const auto qu = green_truncated(spec, 64, q);
  CHECK(qu.value == doctest::Approx(ex.value).epsilon(1e-8));
  GreenOptions mc;
  mc.method = GreenMethod::MonteCarlo;
  mc.mc_replicas = 100000;
  const auto m = green_truncated(spec, 64, mc);
  CHECK(std::abs(m.value - ex.value) < 5 * m.std_error);
}

TEST_CASE("scale suite") {
  const auto spec = WalkSpec::lazy_srw(2);
  const auto suite = make_scale_suite(2, 2.0, spec, 1 << 12, {1000});
  CHECK(suite.regime == Regime::Mid);
  CHECK(suite.h(64) == doctest::Approx(green_truncated(spec, 64).value).epsilon(1e-10));
  CHECK(suite.h(1000) > suite.h(900));
  CHECK_THROWS(suite.h(1 << 13));
  const nlohmann::json j = suite;
  CHECK(j.get<ScaleSuite>().S(1000) == doctest::Approx(suite.S(1000)));
  const auto sup = make_scale_suite(4, 2.0, WalkSpec::srw(4), 4096);
  CHECK(sup.S(4096) == doctest::Approx(1.0 / std::sqrt(4096.0 * sup.g(4096))));
}

TEST_CASE("Potter bounds") {
  std::vector<double> x, f, bad;
  for (int i = 1; i <= 40; ++i) {
    const double v = std::pow(1.5, i);
    x.push_back(v);
    f.push_back(std::sqrt(v) * std::log(v + 2));
    bad.push_back(std::sqrt(v) * (i % 2 ? 1.0 : 1e4 * i));
  }
  CHECK(potter_check(x, f, 0.5, 0.1).regularly_varying);
  CHECK_FALSE(potter_check(x, bad, 0.5, 0.1, 1e3).regularly_varying);
}

TEST_CASE("kernels") {
  const auto k = KernelSpec::parametric(2.0, 0.5);
  CHECK(kernel_eval(k, 3.0) == doctest::Approx(1.0));
  CHECK(kernel_rescaled(k, 8.0, 0.5) == doctest::Approx(std::sqrt(9.0 / 5.0)));
  const double M = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double t) { return kernel_eval(k, t); }, 0.0, 7.0);
  CHECK(kernel_antiderivative(k, 7.0) == doctest::Approx(M).epsilon(1e-12));
  CHECK(kernel_derivative(k, 1.0) == doctest::Approx(-0.5 * 2.0 * std::pow(2.0, -1.5)));

  std::vector<double> grid, values;
  for (int i = 0; i <= 40; ++i) {
    grid.push_back(i * 0.5);
    values.push_back(std::pow(1.0 + i * 0.5, -0.3));
  }
  const auto tab = KernelSpec::tabulated(grid, values);
  CHECK(tab.chi_m == doctest::Approx(-0.3).epsilon(0.05));
  CHECK(kernel_eval(tab, 3.3) == doctest::Approx(std::pow(4.3, -0.3)).epsilon(1e-4));
  const double Mtab = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double t) { return kernel_eval(tab, t); }, 0.0, 10.0, 15, 1e-13);
  CHECK(kernel_antiderivative(tab, 10.0) == doctest::Approx(Mtab).epsilon(1e-10));
  CHECK(kernel_antiderivative(tab, 10.0) == doctest::Approx((std::pow(11.0, 0.7) - 1.0) / 0.7).epsilon(1e-3));
  CHECK(kernel_eval(tab, 40.0) == doctest::Approx(values.back() * std::pow(2.0, tab.chi_m)));
  CHECK_THROWS_AS(KernelSpec::tabulated({0.0, 1.0}, {1.0, 0.5}), DomainError);
  CHECK_THROWS_AS(KernelSpec::tabulated({0.0, 1.0, 2.0}, {1.0, -0.5, 0.2}), DomainError);
}
