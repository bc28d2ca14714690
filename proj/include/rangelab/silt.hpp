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
#include <string>
#include <vector>

#include "json.hpp"
#include "rangelab/regvar.hpp"
#include "rangelab/stats.hpp"
#include "rangelab/walks.hpp"

namespace rangelab {

/// Rectangle [(2i-2)t/2^j, (2i-1)t/2^j) x ((2i-1)t/2^j, 2i t/2^j] of level j,
/// position i, floored against horizon n. Index ranges are half-open.
struct DyadicBlock {
  int level = 1;
  std::size_t position = 1;
  double t = 1.0;
  std::size_t left_begin = 0, left_end = 0;
  std::size_t right_begin = 0, right_end = 0;

  bool empty() const noexcept { return left_begin >= left_end || right_begin >= right_end; }
  /// Area of the real rectangle.
  double area() const;
};

/// Blocks of levels 1..depth, level-major with ascending position.
std::vector<DyadicBlock> dyadic_blocks(double t, int depth, std::size_t n);
std::size_t empty_block_count(const std::vector<DyadicBlock>& blocks);

/// p = min(8, log2(n) - 6), at least 1.
int default_depth(std::size_t n);

/// Ordered pairs (i1 < i2) with i1 in the left and i2 in the right range of
/// each block and equal positions.
std::vector<std::uint64_t> block_pair_counts(std::span<const std::uint64_t> keys,
                                             const std::vector<DyadicBlock>& blocks);

/// Per-block pilot means of the pair counts.
struct CenteringTable {
  static constexpr int kVersion = 1;
  std::uint64_t spec_digest = 0;
  std::size_t n = 0;
  double t = 1.0;
  int depth = 1;
  std::size_t replicas = 0;
  std::vector<double> means;     // one per block
  std::vector<double> level_sd;  // pilot sd of each level's scaled contribution

  bool matches(const WalkSpec& spec, std::size_t n, double t, int depth) const;
};

void to_json(nlohmann::json& j, const CenteringTable& c);
void from_json(const nlohmann::json& j, CenteringTable& c);

/// Pilot ensemble of `replicas` paths seeded from derive_seed(seed, r).
CenteringTable build_centering_table(const WalkSpec& spec, const ScaleSuite& suite, std::size_t n, double t,
                                     int depth, std::size_t replicas, std::uint64_t seed);

struct SiltSample {
  double gamma_hat = 0.0;
  std::vector<double> level_terms;  // scaled centered sum per level
  std::vector<double> block_terms;  // scaled centered pairs per block
  std::size_t n = 0;
  double t = 1.0;
  int depth = 1;
};

void to_json(nlohmann::json& j, const SiltSample& s);

/// Scale applied to centred pair counts: b(n)^d / n^2.
double silt_scale(const ScaleSuite& suite, std::size_t n);

SiltSample silt_estimate(const PathSample& path, const ScaleSuite& suite, double t, int depth,
                         const CenteringTable& centering);

/// Splits a depth-p estimate on [0, t] into the depth-(p-1) estimate on each
/// half and the level-1 cross block.
struct SiltComponents {
  double first = 0.0;
  double second = 0.0;
  double cross = 0.0;
};
SiltComponents split_components(const SiltSample& s);

struct SiltEnsemble {
  std::vector<double> values;
  std::size_t n = 0;
  double t = 1.0;
  int depth = 1;
};

/// Two-sample KS between `full` and first[i] + second[i+1 mod N] +
/// cross_scale * cross[i].
StatReport decomposition_check(const SiltEnsemble& first, const SiltEnsemble& second, const SiltEnsemble& cross,
                               const SiltEnsemble& full, double cross_scale = 1.0, double p_threshold = 0.01);

}  // namespace rangelab
