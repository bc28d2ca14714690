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
#include <span>
#include <vector>

#include "rangelab/lattice.hpp"
#include "rangelab/regvar.hpp"
#include "rangelab/walks.hpp"
#include "rangelab/youngint.hpp"

namespace rangelab {

/// Incremental distinct-site counter. Nearest-neighbour walks in d = 1 use the
/// visited interval instead of a hash set.
class RangeTracker {
 public:
  RangeTracker(const WalkSpec& spec, std::size_t expected_sites);

  /// Records a position; true when the site is new.
  bool visit(std::span<const std::int64_t> x);
  std::size_t range() const noexcept { return count_; }
  void reset(std::size_t expected_sites);

 private:
  LatticePacker packer_;
  SiteTable table_;
  bool interval_mode_ = false;
  std::int64_t lo_ = 0, hi_ = -1;
  std::size_t count_ = 0;
};

/// R_0..R_n and discovery times. tau(i) is the first k >= 1 with R_k = i,
/// defined for 2 <= i <= R_n.
struct RangeProcess {
  std::vector<std::uint32_t> R;
  std::vector<std::uint32_t> discoveries;  // tau(2), tau(3), ...
  std::size_t n = 0;

  std::size_t tau(std::size_t i) const;
};

RangeProcess range_process(const PathSample& path);
/// Streaming form on (spec, n, seed); identical to range_process(sample_path(...)).
RangeProcess range_process(const WalkSpec& spec, std::size_t n, std::uint64_t seed);

/// Linear interpolation of the range at real time t in [0, n].
double interpolate(const RangeProcess& rp, double t);

/// |X(a, b)|, both endpoints included; zero when a > b.
std::size_t subrange(const PathSample& path, std::size_t a, std::size_t b);

enum class BlockConvention {
  HalfOpen,  ///< block k covers (floor((k-1)n/p), floor(kn/p)], block 1 also holds time 0
  Closed,    ///< block k covers [floor((k-1)n/p), floor(kn/p)]
};

struct Decomposition {
  std::size_t lhs = 0;                      // R_n
  std::vector<std::size_t> block_ranges;    // p entries
  std::vector<std::size_t> past_intersections;  // entries for k = 2..p
  long long rhs() const;
};

Decomposition decompose_range(const PathSample& path, std::size_t n, std::size_t p,
                              BlockConvention conv = BlockConvention::HalfOpen);

/// I_{n,m} = |X(0,n) cap X'(0,m)|. I_{n,0} = I_{0,m} = 0 when empty_horizon_zero is set.
std::size_t intersect_count(const PathSample& a, const PathSample& b, std::size_t n, std::size_t m,
                            bool empty_horizon_zero = true);
/// J_{n,m} = sum_{i<=n, j<=m} 1{X_i = X'_j}, zero when n or m is 0 and empty_horizon_zero is set.
std::uint64_t pair_count(const PathSample& a, const PathSample& b, std::size_t n, std::size_t m,
                         bool empty_horizon_zero = true);

/// R_n^{(i,j)}, i = 1..j: ranges of the closed blocks [floor((i-1)n/j), floor(in/j)].
std::vector<std::size_t> block_ranges(const PathSample& path, std::size_t n, std::size_t j);
/// I_n^{(i,j)}, i = 1..floor(j/2): intersections of the two halves of block pair i.
std::vector<std::size_t> adjacent_intersections(const PathSample& path, std::size_t n, std::size_t j);
/// I_{n,m}^{(i,j,k)} as a k x k row-major matrix: block i of [0, n] against
/// block j of [n, n + m] on the same path.
std::vector<std::size_t> cross_intersections(const PathSample& path, std::size_t n, std::size_t m, std::size_t k);

/// Intersections of two independent walks on a product grid of horizons:
/// out[a * ts.size() + b] = I_{ss[a], ts[b]}, empty horizons count zero.
std::vector<std::size_t> intersection_grid(const WalkSpec& spec, std::uint64_t seed_a, std::uint64_t seed_b,
                                           const std::vector<std::size_t>& ss, const std::vector<std::size_t>& ts);

/// Interpolated range at the given real times (in steps).
std::vector<double> range_on_grid(const RangeProcess& rp, const std::vector<double>& times);

/// Rescales ensemble grid values of the interpolated range (rows = replicas,
/// columns = uniform t_grid) by S(n); centred by ensemble means except in SUB.
std::vector<HolderPath> rescale_center(const std::vector<std::vector<double>>& grid_values, const ScaleSuite& suite,
                                       std::size_t n, const std::vector<double>& t_grid, double alpha = 0.5);

/// Per-column ensemble means used by rescale_center.
std::vector<double> column_means(const std::vector<std::vector<double>>& rows);

}  // namespace rangelab
