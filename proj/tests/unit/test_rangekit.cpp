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
#include "rangelab/rangekit.hpp"

using namespace rangelab;

namespace {

WalkSpec plain_1d() { return WalkSpec::tabulated(1, 2.0, {{{1}, 0.5}, {{-1}, 0.5}}); }

PathSample manual(const std::vector<std::int64_t>& xs) {
  PathSample p;
  p.spec = plain_1d();
  p.n = xs.size() - 1;
  p.coords = xs;
  return p;
}

std::size_t brute_range(const PathSample& p, std::size_t a, std::size_t b) {
  std::set<std::vector<std::int64_t>> s;
  for (std::size_t k = a; k <= b; ++k) s.insert({p.at(k).begin(), p.at(k).end()});
  return s.size();
}

}  // namespace

TEST_CASE("range process on a hand path") {
  const auto rp = range_process(manual({0, 1, 0, 2}));
  CHECK(rp.R == std::vector<std::uint32_t>{1, 2, 2, 3});
  CHECK(rp.tau(2) == 1);
  CHECK(rp.tau(3) == 3);
  CHECK_THROWS_AS(rp.tau(4), DomainError);
  CHECK(interpolate(rp, 1.5) == doctest::Approx(2.0));
  CHECK(interpolate(rp, 2.25) == doctest::Approx(2.25));
}

TEST_CASE("streaming, interval and hashed ranges agree") {
  for (auto spec : {WalkSpec::srw(1), WalkSpec::lazy_srw(1), WalkSpec::srw(3), WalkSpec::discrete_pareto(1.2)}) {
    const auto path = sample_path(spec, 3000, 77);
    const auto a = range_process(path);
    const auto b = range_process(spec, 3000, 77);
    CHECK(a.R == b.R);
    CHECK(a.R[3000] == brute_range(path, 0, 3000));
    CHECK(subrange(path, 100, 900) == brute_range(path, 100, 900));
  }
  CHECK(subrange(sample_path(WalkSpec::srw(2), 10, 1), 5, 4) == 0);
}

TEST_CASE("range decomposition identity") {
  const auto spec = WalkSpec::lazy_srw(2);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto path = sample_path(spec, 1024, s);
    for (std::size_t p : {2, 4, 8, 7}) {
      for (auto conv : {BlockConvention::HalfOpen, BlockConvention::Closed}) {
        const auto d = decompose_range(path, 1024, p, conv);
        REQUIRE(static_cast<long long>(d.lhs) == d.rhs());
      }
    }
  }
}

TEST_CASE("intersections and pair counts") {
  const auto a = manual({0, 1, 2, 1});
  const auto b = manual({0, -1, 0, 1});
  CHECK(intersect_count(a, b, 3, 3) == 2);  // sites 0 and 1
  CHECK(pair_count(a, b, 3, 3) == 2 * 1 + 2 + 0);
  CHECK(intersect_count(a, b, 0, 3) == 0);
  CHECK(intersect_count(a, b, 0, 3, false) == 1);
  const auto spec = WalkSpec::srw(2);
  const auto p = sample_path(spec, 512, 3), q = sample_path(spec, 512, 4);
  const auto grid = intersection_grid(spec, 3, 4, {64, 512}, {128, 512});
  CHECK(grid[0] == intersect_count(p, q, 64, 128));
  CHECK(grid[3] == intersect_count(p, q, 512, 512));
}

TEST_CASE("block quantities") {
  const auto path = sample_path(WalkSpec::srw(2), 1024, 8);
  const auto r = block_ranges(path, 1024, 4);
  REQUIRE(r.size() == 4);
  CHECK(r[1] == brute_range(path, 256, 512));
  const auto adj = adjacent_intersections(path, 1024, 4);
  REQUIRE(adj.size() == 2);
  const auto cross = cross_intersections(path, 512, 512, 2);
  REQUIRE(cross.size() == 4);
}

TEST_CASE("rescale_center") {
  const auto spec = WalkSpec::srw(1);
  const auto suite = make_scale_suite(1, 2.0, spec, 4096);
  const std::vector<double> grid{0.0, 0.5, 1.0};
  std::vector<std::vector<double>> rows;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto rp = range_process(spec, 4096, s);
    rows.push_back(range_on_grid(rp, {0.0, 2048.0, 4096.0}));
  }
  // SUB paths are not centred
  const auto paths = rescale_center(rows, suite, 4096, grid);
  CHECK(paths[0].values()[2] == doctest::Approx(suite.S(4096) * rows[0][2]));
  const auto mid = make_scale_suite(2, 2.0, WalkSpec::srw(2), 4096);
  CHECK_THROWS_AS(rescale_center(rows, mid, 4096, grid), DomainError);
  CHECK_THROWS_AS(rescale_center(rows, suite, 4096, {0.0, 0.4, 1.0}), DomainError);
}
