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

#include "rangelab/silt.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "rangelab/lattice.hpp"
#include "rangelab/parallel.hpp"

namespace rangelab {

double DyadicBlock::area() const {
  const double side = t / std::ldexp(1.0, level);
  return side * side;
}

std::vector<DyadicBlock> dyadic_blocks(double t, int depth, std::size_t n) {
  if (depth < 1) throw DomainError("dyadic depth must be >= 1");
  if (depth > 40) throw DomainError("dyadic depth too large");
  if (!(t >= 0.0)) throw DomainError("dyadic blocks need t >= 0");
  const double T = t * static_cast<double>(n);
  auto at = [&](std::size_t k, int j) { return T * static_cast<double>(k) / std::ldexp(1.0, j); };
  std::vector<DyadicBlock> out;
  for (int j = 1; j <= depth; ++j) {
    const std::size_t count = std::size_t{1} << (j - 1);
    for (std::size_t i = 1; i <= count; ++i) {
      DyadicBlock b;
      b.level = j;
      b.position = i;
      b.t = t;
      const double lo = at(2 * i - 2, j), mid = at(2 * i - 1, j), hi = at(2 * i, j);
      b.left_begin = static_cast<std::size_t>(std::ceil(lo));
      b.left_end = static_cast<std::size_t>(std::ceil(mid));
      b.right_begin = static_cast<std::size_t>(std::floor(mid)) + 1;
      b.right_end = static_cast<std::size_t>(std::floor(hi)) + 1;
      out.push_back(b);
    }
  }
  return out;
}

std::size_t empty_block_count(const std::vector<DyadicBlock>& blocks) {
  return static_cast<std::size_t>(std::count_if(blocks.begin(), blocks.end(), [](const auto& b) { return b.empty(); }));
}

int default_depth(std::size_t n) {
  if (n < 2) return 1;
  const int lg = std::bit_width(n) - 1;
  return std::max(1, std::min(8, lg - 6));
}

std::vector<std::uint64_t> block_pair_counts(std::span<const std::uint64_t> keys,
                                             const std::vector<DyadicBlock>& blocks) {
  std::vector<std::uint64_t> out(blocks.size(), 0);
  SiteTable table(1024);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& blk = blocks[b];
    if (blk.empty()) continue;
    if (blk.right_end > keys.size()) throw DomainError("block extends past the path");
    table.reset(blk.left_end - blk.left_begin);
    for (std::size_t i = blk.left_begin; i < blk.left_end; ++i) table.increment(keys[i]);
    std::uint64_t pairs = 0;
    for (std::size_t i = blk.right_begin; i < blk.right_end; ++i) pairs += table.find(keys[i]);
    out[b] = pairs;
  }
  return out;
}

bool CenteringTable::matches(const WalkSpec& spec, std::size_t n_, double t_, int depth_) const {
  return spec_digest == spec.digest() && n == n_ && std::abs(t - t_) <= 1e-12 && depth == depth_ &&
         means.size() == (std::size_t{1} << depth) - 1;
}

void to_json(nlohmann::json& j, const CenteringTable& c) {
  std::ostringstream digest;
  digest << std::hex << c.spec_digest;
  j = nlohmann::json{{"version", CenteringTable::kVersion},
                     {"spec_digest", digest.str()},
                     {"n", c.n},
                     {"t", c.t},
                     {"depth", c.depth},
                     {"replicas", c.replicas},
                     {"means", c.means},
                     {"level_sd", c.level_sd}};
}

void from_json(const nlohmann::json& j, CenteringTable& c) {
  try {
    if (j.at("version").get<int>() != CenteringTable::kVersion) throw ConfigError("unsupported centering table version");
    c.spec_digest = std::stoull(j.at("spec_digest").get<std::string>(), nullptr, 16);
    j.at("n").get_to(c.n);
    j.at("t").get_to(c.t);
    j.at("depth").get_to(c.depth);
    j.at("replicas").get_to(c.replicas);
    j.at("means").get_to(c.means);
    j.at("level_sd").get_to(c.level_sd);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad centering table: ") + e.what());
  }
}

double silt_scale(const ScaleSuite& suite, std::size_t n) {
  const double nn = static_cast<double>(n);
  return std::pow(suite.b(nn), suite.d) / (nn * nn);
}

CenteringTable build_centering_table(const WalkSpec& spec, const ScaleSuite& suite, std::size_t n, double t,
                                     int depth, std::size_t replicas, std::uint64_t seed) {
  if (replicas < 2) throw DomainError("pilot ensemble needs at least two replicas");
  const auto blocks = dyadic_blocks(t, depth, n);
  const auto horizon = static_cast<std::size_t>(std::ceil(t * static_cast<double>(n)));
  auto counts = parallel_map(replicas, [&](std::size_t r) {
    const auto path = sample_path(spec, horizon, derive_seed(seed, r));
    const auto keys = path.keys();
    return block_pair_counts(keys, blocks);
  });
  CenteringTable c;
  c.spec_digest = spec.digest();
  c.n = n;
  c.t = t;
  c.depth = depth;
  c.replicas = replicas;
  c.means.assign(blocks.size(), 0.0);
  for (const auto& row : counts) {
    for (std::size_t b = 0; b < blocks.size(); ++b) c.means[b] += static_cast<double>(row[b]);
  }
  for (auto& m : c.means) m /= static_cast<double>(replicas);
  const double scale = silt_scale(suite, n);
  c.level_sd.assign(static_cast<std::size_t>(depth), 0.0);
  for (int j = 1; j <= depth; ++j) {
    std::vector<double> level(replicas, 0.0);
    for (std::size_t r = 0; r < replicas; ++r) {
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].level == j) level[r] += scale * (static_cast<double>(counts[r][b]) - c.means[b]);
      }
    }
    c.level_sd[static_cast<std::size_t>(j - 1)] = std::sqrt(variance(level));
  }
  return c;
}

void to_json(nlohmann::json& j, const SiltSample& s) {
  j = nlohmann::json{{"gamma_hat", s.gamma_hat}, {"level_terms", s.level_terms}, {"n", s.n}, {"t", s.t},
                     {"depth", s.depth}};
}

SiltSample silt_estimate(const PathSample& path, const ScaleSuite& suite, double t, int depth,
                         const CenteringTable& centering) {
  if (centering.means.empty()) throw DomainError("missing centering table");
  const std::size_t n = centering.n;
  if (!centering.matches(path.spec, n, t, depth)) throw ConfigError("centering table does not match the estimate");
  const auto blocks = dyadic_blocks(t, depth, n);
  const auto keys = path.keys();
  const auto counts = block_pair_counts(keys, blocks);
  const double scale = silt_scale(suite, n);
  SiltSample s;
  s.n = n;
  s.t = t;
  s.depth = depth;
  s.level_terms.assign(static_cast<std::size_t>(depth), 0.0);
  s.block_terms.resize(blocks.size());
  CompensatedSum total;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const double v = scale * (static_cast<double>(counts[b]) - centering.means[b]);
    s.block_terms[b] = v;
    s.level_terms[static_cast<std::size_t>(blocks[b].level - 1)] += v;
    total.add(v);
  }
  s.gamma_hat = total.value();
  return s;
}

SiltComponents split_components(const SiltSample& s) {
  if (s.depth < 2) throw DomainError("splitting needs depth >= 2");
  SiltComponents c;
  std::size_t b = 0;
  for (int j = 1; j <= s.depth; ++j) {
    const std::size_t count = std::size_t{1} << (j - 1);
    for (std::size_t i = 1; i <= count; ++i, ++b) {
      if (j == 1) {
        c.cross += s.block_terms[b];
      } else if (i <= count / 2) {
        c.first += s.block_terms[b];
      } else {
        c.second += s.block_terms[b];
      }
    }
  }
  return c;
}

StatReport decomposition_check(const SiltEnsemble& first, const SiltEnsemble& second, const SiltEnsemble& cross,
                               const SiltEnsemble& full, double cross_scale, double p_threshold) {
  if (first.n != full.n || second.n != full.n || cross.n != full.n) throw ConfigError("ensembles use different n");
  if (first.depth != second.depth || full.depth != first.depth + 1) throw ConfigError("ensembles use mismatched depths");
  if (std::abs(first.t + second.t - full.t) > 1e-12) throw ConfigError("component horizons do not add up");
  const std::size_t N = first.values.size();
  if (second.values.size() != N || cross.values.size() != N) throw ConfigError("component ensembles differ in size");
  std::vector<double> combined(N);
  for (std::size_t i = 0; i < N; ++i) {
    combined[i] = first.values[i] + second.values[(i + 1) % N] + cross_scale * cross.values[i];
  }
  const auto ks = ks_two_sample(combined, full.values);
  StatReport r;
  r.name = "gamma decomposition";
  r.statistic = ks.statistic;
  r.p_value = ks.p_value;
  r.threshold = p_threshold;
  r.pass = ks.p_value > p_threshold;
  r.n1 = N;
  r.n2 = full.values.size();
  r.detail = "cross scale " + std::to_string(cross_scale);
  return r;
}

}  // namespace rangelab
