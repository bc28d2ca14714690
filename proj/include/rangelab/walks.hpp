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

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rangelab/common.hpp"
#include "rangelab/lattice.hpp"

namespace rangelab {

enum class Law {
  Srw,             ///< nearest-neighbour simple random walk
  LazySrw,         ///< SRW holding in place with probability `hold`
  DiscretePareto,  ///< d = 1, P(Y = x) proportional to |x|^(-1-beta), x != 0
  ProductPareto,   ///< d > 1, independent DiscretePareto coordinates (anisotropic)
  Tabulated,       ///< user-supplied finite law
};

std::string to_string(Law law);
Law law_from_string(const std::string& name);

/// One atom of a tabulated increment law.
struct Atom {
  std::vector<std::int64_t> point;
  double mass = 0.0;
};

/// Increment law of a lattice walk plus the declared stable index and the
/// calibration constant of its scale function b(n) = sigma_hat * n^(1/beta).
struct WalkSpec {
  int d = 1;
  double beta = 2.0;
  Law law = Law::Srw;
  double hold = 0.5;
  double sigma_hat = 1.0;
  std::vector<Atom> atoms;  // Tabulated only
  std::string seed_scheme = "splitmix64-counter/xoshiro256++";

  static WalkSpec srw(int d);
  static WalkSpec lazy_srw(int d, double hold = 0.5);
  static WalkSpec discrete_pareto(double beta);
  static WalkSpec product_pareto(int d, double beta);
  static WalkSpec tabulated(int d, double beta, std::vector<Atom> atoms);

  /// Stable 64-bit digest of every field; keys centering tables.
  std::uint64_t digest() const;

  /// Throws DomainError when the spec is internally inconsistent.
  void validate() const;
};

void to_json(nlohmann::json& j, const WalkSpec& s);
void from_json(const nlohmann::json& j, WalkSpec& s);

/// Symmetric discrete power-law magnitude sampler on {1..radius}, mass ~ k^(-1-beta).
/// Inverse-CDF table for small magnitudes, exact rejection from a continuous
/// Pareto envelope beyond the table.
class ParetoMagnitude {
 public:
  static constexpr double kTailMass = 1e-9;
  static constexpr std::int64_t kTableSize = 1 << 16;
  static constexpr std::int64_t kMaxRadius = std::int64_t{1} << 40;

  explicit ParetoMagnitude(double beta);

  double beta() const noexcept { return beta_; }
  std::int64_t radius() const noexcept { return radius_; }
  /// Normaliser of the truncated law: sum_{k<=radius} k^(-1-beta).
  double normalizer() const noexcept { return z_; }
  /// Mass of the untruncated law beyond the radius, relative to the truncated mass.
  double tail_mass() const noexcept { return tail_; }
  /// Probability of magnitude k (the sign is split evenly on top of this).
  double pmf(std::int64_t k) const;

  std::int64_t sample(Rng& rng) const;

  /// sum_{k=1}^{radius} pmf(k) cos(k x), truncated once the Abel remainder bound
  /// drops below `tol`.
  double cosine_series(double x, double tol = 1e-10) const;

  /// Tail constant A in P(|Y| > x) ~ A x^(-beta).
  double tail_constant() const noexcept { return 1.0 / (beta_ * z_); }

 private:
  double beta_;
  std::int64_t radius_;
  double z_;
  double tail_;
  double table_mass_;
  std::vector<double> cdf_;  // cumulative mass of magnitudes 1..kTableSize (unnormalised)
};

/// Draws single increments for a WalkSpec.
class IncrementSampler {
 public:
  explicit IncrementSampler(const WalkSpec& spec);

  int dim() const noexcept { return d_; }

  /// Adds one increment to `x` (length d).
  void step(Rng& rng, std::span<std::int64_t> x) const;

  /// Writes one increment to `y` (length d).
  void draw(Rng& rng, std::span<std::int64_t> y) const;

 private:
  WalkSpec spec_;
  int d_;
  std::shared_ptr<const ParetoMagnitude> pareto_;
  std::vector<double> atom_cdf_;
};

/// Stored walk path X_0..X_n, row-major coordinates.
struct PathSample {
  WalkSpec spec;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::vector<std::int64_t> coords;  // (n + 1) * d

  int dim() const noexcept { return spec.d; }
  std::span<const std::int64_t> at(std::size_t k) const {
    return {coords.data() + k * static_cast<std::size_t>(spec.d), static_cast<std::size_t>(spec.d)};
  }
  /// Packed lattice keys of every position.
  std::vector<std::uint64_t> keys() const;
};

/// Largest stored path (in positions) that sample_path accepts; longer
/// horizons must use the streaming form.
inline constexpr std::size_t kDefaultPathBudget = std::size_t{1} << 26;

/// Deterministic stored path for (spec, n, seed).
PathSample sample_path(const WalkSpec& spec, std::size_t n, std::uint64_t seed,
                       std::size_t budget = kDefaultPathBudget);

/// Streaming form: calls visit(k, x) for k = 0..n with the same positions as
/// sample_path(spec, n, seed).
template <class Visitor>
void for_each_position(const WalkSpec& spec, std::size_t n, std::uint64_t seed, Visitor&& visit) {
  IncrementSampler sampler(spec);
  Rng rng(seed);
  std::array<std::int64_t, kMaxDim> x{};
  const std::span<std::int64_t> xs(x.data(), static_cast<std::size_t>(spec.d));
  visit(std::size_t{0}, std::span<const std::int64_t>(xs));
  for (std::size_t k = 1; k <= n; ++k) {
    sampler.step(rng, xs);
    visit(k, std::span<const std::int64_t>(xs));
  }
}

/// Characteristic function phi(x) = E exp(i <x, Y>) on the torus (-pi, pi]^d.
std::complex<double> char_fn(const WalkSpec& spec, std::span<const double> x);

/// Real part only; every built-in law is symmetric so phi is real.
double char_fn_real(const WalkSpec& spec, std::span<const double> x);

struct SupportReport {
  bool generating = false;   ///< support generates Z^d
  bool aperiodic = false;    ///< return-time support has gcd 1
  std::int64_t period = 0;   ///< gcd of return times; 0 when the walk cannot return
  bool certified = false;    ///< built-in constant rather than computed
  std::vector<std::vector<std::int64_t>> sublattice;  ///< basis of the generated group (HNF rows)
  std::string note;
};

SupportReport support_check(const WalkSpec& spec);

/// Hermite-normal-form row basis of the integer lattice spanned by `vectors`.
std::vector<std::vector<std::int64_t>> lattice_basis(const std::vector<std::vector<std::int64_t>>& vectors,
                                                     int d);

/// Writes coordinates as little-endian int64, row-major (n+1) x d.
void export_path_binary(const PathSample& path, const std::string& file);

}  // namespace rangelab
