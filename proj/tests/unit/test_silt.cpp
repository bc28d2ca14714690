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
#include "rangelab/silt.hpp"

using namespace rangelab;

TEST_CASE("dyadic blocks") {
  const auto one = dyadic_blocks(1.0, 1, 16);
  REQUIRE(one.size() == 1);
  CHECK(one[0].left_begin == 0);
  CHECK(one[0].left_end == 8);
  CHECK(one[0].right_begin == 9);
  CHECK(one[0].right_end == 17);
  double area = 0.0;
  for (const auto& b : dyadic_blocks(1.0, 10, 1 << 12)) area += b.area();
  CHECK(area == doctest::Approx((1.0 - std::ldexp(1.0, -10)) / 2.0).epsilon(1e-14));
  const auto deep = dyadic_blocks(1.0, 6, 16);
  CHECK(empty_block_count(deep) > 0);
  // disjoint at each level after flooring
  for (double t : {1.0, 0.37}) {
    const auto bl = dyadic_blocks(t, 5, 1000);
    for (std::size_t i = 1; i < bl.size(); ++i) {
      if (bl[i].level == bl[i - 1].level) CHECK(bl[i - 1].right_end <= bl[i].left_begin + 1);
      CHECK(bl[i].left_end <= bl[i].right_begin);
    }
  }
  CHECK_THROWS_AS(dyadic_blocks(1.0, 0, 16), DomainError);
  CHECK(default_depth(1 << 16) == 8);
  CHECK(default_depth(1 << 10) == 4);
}

TEST_CASE("pair counts against brute force") {
  const auto path = sample_path(WalkSpec::srw(1), 256, 4);
  const auto keys = path.keys();
  const auto blocks = dyadic_blocks(1.0, 3, 256);
  const auto pairs = block_pair_counts(keys, blocks);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    std::uint64_t brute = 0;
    for (std::size_t i = blocks[b].left_begin; i < blocks[b].left_end; ++i) {
      for (std::size_t j = blocks[b].right_begin; j < blocks[b].right_end; ++j) brute += keys[i] == keys[j];
    }
    CHECK(pairs[b] == brute);
  }
}

TEST_CASE("estimate without self-intersections is the pure centering term") {
  const auto spec = WalkSpec::srw(1);
  PathSample line;
  line.spec = spec;
  line.n = 64;
  for (std::int64_t k = 0; k <= 64; ++k) line.coords.push_back(k);
  const auto suite = make_scale_suite(1, 2.0, spec, 64);
  CenteringTable c;
  c.spec_digest = spec.digest();
  c.n = 64;
  c.t = 1.0;
  c.depth = 2;
  c.means = {3.0, 1.0, 2.0};
  const auto s = silt_estimate(line, suite, 1.0, 2, c);
  CHECK(s.gamma_hat == doctest::Approx(-silt_scale(suite, 64) * 6.0));
  CHECK(s.level_terms.size() == 2);
  CenteringTable missing;
  CHECK_THROWS_AS(silt_estimate(line, suite, 1.0, 2, missing), DomainError);
  CHECK_THROWS_AS(silt_estimate(line, suite, 1.0, 3, c), ConfigError);
  const nlohmann::json j = c;
  CHECK(j.get<CenteringTable>().means == c.means);
}

TEST_CASE("components add up to the estimate") {
  const auto spec = WalkSpec::lazy_srw(2);
  const std::size_t n = 1 << 12;
  const auto suite = make_scale_suite(2, 2.0, spec, n);
  const auto c = build_centering_table(spec, suite, n, 1.0, 4, 50, 1);
  const auto s = silt_estimate(sample_path(spec, n, 99), suite, 1.0, 4, c);
  const auto parts = split_components(s);
  CHECK(parts.first + parts.second + parts.cross == doctest::Approx(s.gamma_hat).epsilon(1e-12));
  // the first half is itself a depth-3 estimate on [0, 1/2]
  const auto half = build_centering_table(spec, suite, n, 0.5, 3, 50, 1);
  const auto sh = silt_estimate(sample_path(spec, n, 99), suite, 0.5, 3, half);
  double raw_first = 0.0, raw_half = 0.0;
  const auto blocks = dyadic_blocks(1.0, 4, n);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].level >= 2 && blocks[b].position <= (std::size_t{1} << (blocks[b].level - 2))) {
      raw_first += s.block_terms[b] + silt_scale(suite, n) * c.means[b];
    }
  }
  for (std::size_t b = 0; b < sh.block_terms.size(); ++b) raw_half += sh.block_terms[b] + silt_scale(suite, n) * half.means[b];
  CHECK(raw_first == doctest::Approx(raw_half).epsilon(1e-12));
}

TEST_CASE("decomposition check") {
  std::vector<double> a, b, x, f;
  Rng rng(5);
  for (int i = 0; i < 400; ++i) {
    a.push_back(rng.normal());
    b.push_back(rng.normal());
    x.push_back(rng.normal());
    f.push_back(std::sqrt(3.0) * rng.normal());
  }
  const SiltEnsemble A{a, 1024, 0.5, 3}, B{b, 1024, 0.5, 3}, X{x, 1024, 1.0, 1}, F{f, 1024, 1.0, 4};
  CHECK(decomposition_check(A, B, X, F).pass);
  CHECK(decomposition_check(A, B, X, F, 3.0).p_value < 0.01);
  const SiltEnsemble wrong{f, 2048, 1.0, 4};
  CHECK_THROWS_AS(decomposition_check(A, B, X, wrong), ConfigError);
  // s = 0: nothing to add
  const SiltEnsemble zero{std::vector<double>(400, 0.0), 1024, 0.0, 3};
  const SiltEnsemble same{a, 1024, 0.5, 4};
  CHECK(decomposition_check(A, zero, zero, same).p_value == doctest::Approx(1.0));
}
