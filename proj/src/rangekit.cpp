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

#include "rangelab/rangekit.hpp"

#include <algorithm>
#include <cmath>

namespace rangelab {

RangeTracker::RangeTracker(const WalkSpec& spec, std::size_t expected_sites)
    : packer_(spec.d),
      table_(spec.d == 1 && (spec.law == Law::Srw || spec.law == Law::LazySrw) ? 1 : expected_sites),
      interval_mode_(spec.d == 1 && (spec.law == Law::Srw || spec.law == Law::LazySrw)) {}

void RangeTracker::reset(std::size_t expected_sites) {
  count_ = 0;
  lo_ = 0;
  hi_ = -1;
  if (!interval_mode_) table_.reset(expected_sites);
}

bool RangeTracker::visit(std::span<const std::int64_t> x) {
  if (interval_mode_) {
    const std::int64_t v = x[0];
    if (hi_ < lo_) {
      lo_ = hi_ = v;
      count_ = 1;
      return true;
    }
    if (v < lo_) {
      lo_ = v;
      ++count_;
      return true;
    }
    if (v > hi_) {
      hi_ = v;
      ++count_;
      return true;
    }
    return false;
  }
  if (table_.insert(packer_.pack(x))) {
    ++count_;
    return true;
  }
  return false;
}

std::size_t RangeProcess::tau(std::size_t i) const {
  if (i < 2 || i - 2 >= discoveries.size()) throw DomainError("discovery level not attained");
  return discoveries[i - 2];
}

namespace {

template <class Source>
RangeProcess build_range(const WalkSpec& spec, std::size_t n, Source&& source) {
  if (n >= std::numeric_limits<std::uint32_t>::max()) throw ResourceError("horizon too large for 32-bit counts");
  RangeProcess rp;
  rp.n = n;
  rp.R.resize(n + 1);
  RangeTracker tracker(spec, n + 1);
  source([&](std::size_t k, std::span<const std::int64_t> x) {
    const bool fresh = tracker.visit(x);
    if (fresh && k > 0) rp.discoveries.push_back(static_cast<std::uint32_t>(k));
    rp.R[k] = static_cast<std::uint32_t>(tracker.range());
  });
  return rp;
}

}  // namespace

RangeProcess range_process(const PathSample& path) {
  if (path.coords.empty()) throw DomainError("empty path");
  return build_range(path.spec, path.n, [&](auto&& visit) {
    for (std::size_t k = 0; k <= path.n; ++k) visit(k, path.at(k));
  });
}

RangeProcess range_process(const WalkSpec& spec, std::size_t n, std::uint64_t seed) {
  return build_range(spec, n, [&](auto&& visit) { for_each_position(spec, n, seed, visit); });
}

double interpolate(const RangeProcess& rp, double t) {
  if (!(t >= 0.0 && t <= static_cast<double>(rp.n))) throw DomainError("interpolation time outside [0, n]");
  const auto k = static_cast<std::size_t>(std::floor(t));
  if (k >= rp.n) return rp.R[rp.n];
  const double frac = t - static_cast<double>(k);
  return rp.R[k] + (static_cast<double>(rp.R[k + 1]) - rp.R[k]) * frac;
}

std::vector<double> range_on_grid(const RangeProcess& rp, const std::vector<double>& times) {
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(interpolate(rp, t));
  return out;
}

namespace {

void check_index(const PathSample& path, std::size_t i) {
  if (i > path.n) throw DomainError("time index beyond the path horizon");
}

// Adds keys of positions a..b (inclusive) to the table; returns how many were new.
std::size_t add_sites(const PathSample& path, const LatticePacker& packer, SiteTable& table, std::size_t a,
                      std::size_t b) {
  std::size_t fresh = 0;
  for (std::size_t k = a; k <= b; ++k) fresh += table.insert(packer.pack(path.at(k)));
  return fresh;
}

}  // namespace

std::size_t subrange(const PathSample& path, std::size_t a, std::size_t b) {
  if (a > b) return 0;
  check_index(path, b);
  LatticePacker packer(path.spec.d);
  SiteTable table(b - a + 1);
  return add_sites(path, packer, table, a, b);
}

long long Decomposition::rhs() const {
  long long s = 0;
  for (auto r : block_ranges) s += static_cast<long long>(r);
  for (auto i : past_intersections) s -= static_cast<long long>(i);
  return s;
}

Decomposition decompose_range(const PathSample& path, std::size_t n, std::size_t p, BlockConvention conv) {
  if (p < 1) throw DomainError("decompose_range needs p >= 1");
  check_index(path, n);
  LatticePacker packer(path.spec.d);
  Decomposition out;
  out.lhs = subrange(path, 0, n);
  SiteTable past(n + 1);
  SiteTable block(n / p + 2);
  std::size_t prev_end = 0;
  for (std::size_t k = 1; k <= p; ++k) {
    const std::size_t end = (k * n) / p;
    std::size_t start;
    if (k == 1) {
      start = 0;
    } else {
      start = conv == BlockConvention::HalfOpen ? prev_end + 1 : prev_end;
    }
    block.reset(end >= start ? end - start + 1 : 1);
    std::size_t common = 0;
    if (end >= start) {
      for (std::size_t t = start; t <= end; ++t) {
        const auto key = packer.pack(path.at(t));
        if (block.insert(key) && past.contains(key)) ++common;
      }
    }
    out.block_ranges.push_back(block.size());
    if (k >= 2) out.past_intersections.push_back(common);
    block.for_each([&](std::uint64_t key, std::uint32_t) { past.insert(key); });
    prev_end = end;
  }
  return out;
}

std::size_t intersect_count(const PathSample& a, const PathSample& b, std::size_t n, std::size_t m,
                            bool empty_horizon_zero) {
  check_index(a, n);
  check_index(b, m);
  if (a.spec.d != b.spec.d) throw DomainError("paths of different dimension");
  if (empty_horizon_zero && (n == 0 || m == 0)) return 0;
  LatticePacker packer(a.spec.d);
  SiteTable sa(n + 1);
  add_sites(a, packer, sa, 0, n);
  SiteTable sb(m + 1);
  std::size_t common = 0;
  for (std::size_t k = 0; k <= m; ++k) {
    const auto key = packer.pack(b.at(k));
    if (sb.insert(key) && sa.contains(key)) ++common;
  }
  return common;
}

std::uint64_t pair_count(const PathSample& a, const PathSample& b, std::size_t n, std::size_t m,
                         bool empty_horizon_zero) {
  check_index(a, n);
  check_index(b, m);
  if (a.spec.d != b.spec.d) throw DomainError("paths of different dimension");
  if (empty_horizon_zero && (n == 0 || m == 0)) return 0;
  LatticePacker packer(a.spec.d);
  SiteTable occ(n + 1);
  for (std::size_t k = 0; k <= n; ++k) occ.increment(packer.pack(a.at(k)));
  std::uint64_t pairs = 0;
  for (std::size_t k = 0; k <= m; ++k) pairs += occ.find(packer.pack(b.at(k)));
  return pairs;
}

std::vector<std::size_t> block_ranges(const PathSample& path, std::size_t n, std::size_t j) {
  if (j < 1) throw DomainError("block count must be >= 1");
  check_index(path, n);
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i <= j; ++i) out.push_back(subrange(path, ((i - 1) * n) / j, (i * n) / j));
  return out;
}

namespace {

std::size_t interval_intersection(const PathSample& path, std::size_t a0, std::size_t a1, std::size_t b0,
                                  std::size_t b1) {
  if (a0 > a1 || b0 > b1) return 0;
  LatticePacker packer(path.spec.d);
  SiteTable sa(a1 - a0 + 1);
  add_sites(path, packer, sa, a0, a1);
  SiteTable sb(b1 - b0 + 1);
  std::size_t common = 0;
  for (std::size_t k = b0; k <= b1; ++k) {
    const auto key = packer.pack(path.at(k));
    if (sb.insert(key) && sa.contains(key)) ++common;
  }
  return common;
}

}  // namespace

std::vector<std::size_t> adjacent_intersections(const PathSample& path, std::size_t n, std::size_t j) {
  if (j < 2) throw DomainError("adjacent intersections need j >= 2");
  check_index(path, n);
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i <= j / 2; ++i) {
    const std::size_t a = ((2 * i - 2) * n) / j;
    const std::size_t mid = ((2 * i - 1) * n) / j;
    const std::size_t b = (2 * i * n) / j;
    out.push_back(interval_intersection(path, a, mid, mid, b));
  }
  return out;
}

std::vector<std::size_t> cross_intersections(const PathSample& path, std::size_t n, std::size_t m, std::size_t k) {
  if (k < 1) throw DomainError("block count must be >= 1");
  check_index(path, n + m);
  std::vector<std::size_t> out(k * k);
  for (std::size_t i = 1; i <= k; ++i) {
    for (std::size_t j = 1; j <= k; ++j) {
      out[(i - 1) * k + (j - 1)] = interval_intersection(path, ((i - 1) * n) / k, (i * n) / k,
                                                         n + ((j - 1) * m) / k, n + (j * m) / k);
    }
  }
  return out;
}

std::vector<std::size_t> intersection_grid(const WalkSpec& spec, std::uint64_t seed_a, std::uint64_t seed_b,
                                           const std::vector<std::size_t>& ss, const std::vector<std::size_t>& ts) {
  if (ss.empty() || ts.empty()) return {};
  if (!std::is_sorted(ss.begin(), ss.end()) || !std::is_sorted(ts.begin(), ts.end())) {
    throw DomainError("horizon grids must be ascending");
  }
  LatticePacker packer(spec.d);
  const std::size_t na = ss.back();
  const std::size_t nb = ts.back();
  SiteTable first_a(na + 1);  // value = first visit time + 1
  for_each_position(spec, na, seed_a, [&](std::size_t k, std::span<const std::int64_t> x) {
    bool fresh = false;
    auto& slot = first_a.upsert(packer.pack(x), fresh);
    if (fresh) slot = static_cast<std::uint32_t>(k + 1);
  });
  const std::size_t S = ss.size(), T = ts.size();
  std::vector<std::size_t> hist((S + 1) * (T + 1), 0);
  SiteTable seen_b(nb + 1);
  for_each_position(spec, nb, seed_b, [&](std::size_t k, std::span<const std::int64_t> x) {
    const auto key = packer.pack(x);
    if (!seen_b.insert(key)) return;
    const std::uint32_t fa = first_a.find(key);
    if (fa == 0) return;
    const std::size_t ta = fa - 1;
    const auto ia = static_cast<std::size_t>(std::lower_bound(ss.begin(), ss.end(), ta) - ss.begin());
    const auto ib = static_cast<std::size_t>(std::lower_bound(ts.begin(), ts.end(), k) - ts.begin());
    ++hist[ia * (T + 1) + ib];
  });
  std::vector<std::size_t> out(S * T, 0);
  for (std::size_t a = 0; a < S; ++a) {
    for (std::size_t b = 0; b < T; ++b) {
      std::size_t v = hist[a * (T + 1) + b];
      if (a > 0) v += out[(a - 1) * T + b];
      if (b > 0) v += out[a * T + b - 1];
      if (a > 0 && b > 0) v -= out[(a - 1) * T + b - 1];
      out[a * T + b] = v;
    }
  }
  for (std::size_t a = 0; a < S; ++a) {
    for (std::size_t b = 0; b < T; ++b) {
      if (ss[a] == 0 || ts[b] == 0) out[a * T + b] = 0;
    }
  }
  return out;
}

std::vector<double> column_means(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  std::vector<CompensatedSum> acc(rows.front().size());
  for (const auto& r : rows) {
    if (r.size() != acc.size()) throw DomainError("ragged ensemble");
    for (std::size_t c = 0; c < r.size(); ++c) acc[c].add(r[c]);
  }
  std::vector<double> out;
  for (const auto& a : acc) out.push_back(a.value() / static_cast<double>(rows.size()));
  return out;
}

std::vector<HolderPath> rescale_center(const std::vector<std::vector<double>>& grid_values, const ScaleSuite& suite,
                                       std::size_t n, const std::vector<double>& t_grid, double alpha) {
  if (grid_values.empty()) throw DomainError("empty ensemble");
  if (t_grid.size() < 2) throw DomainError("time grid needs at least two points");
  const double step = (t_grid.back() - t_grid.front()) / static_cast<double>(t_grid.size() - 1);
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (std::abs(t_grid[i] - (t_grid.front() + step * static_cast<double>(i))) > 1e-12) {
      throw DomainError("time grid must be uniform");
    }
  }
  const bool center = suite.regime != Regime::Sub;
  if (center && grid_values.size() < 100) {
    throw DomainError("ensemble too small for stable centering (< 100 replicas)");
  }
  const double S = suite.S(n);
  const auto mean = center ? column_means(grid_values) : std::vector<double>(t_grid.size(), 0.0);
  std::vector<HolderPath> out;
  out.reserve(grid_values.size());
  for (const auto& row : grid_values) {
    std::vector<double> v(row.size());
    for (std::size_t c = 0; c < row.size(); ++c) v[c] = S * (row[c] - mean[c]);
    out.emplace_back(t_grid.front(), t_grid.back(), std::move(v), alpha);
  }
  return out;
}

}  // namespace rangelab
