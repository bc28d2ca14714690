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
#include <functional>
#include <vector>

#include "rangelab/common.hpp"

namespace rangelab {

/// Real path on a uniform grid t0 < ... < T, linearly interpolated between
/// nodes unless an analytic evaluator is attached.
class HolderPath {
 public:
  HolderPath() = default;
  HolderPath(double t0, double T, std::vector<double> values, double alpha);

  /// Samples f on N uniform intervals and keeps f as the analytic evaluator.
  static HolderPath from_function(std::function<double(double)> f, double t0, double T, std::size_t intervals,
                                  double alpha);

  double t0() const noexcept { return t0_; }
  double T() const noexcept { return T_; }
  double alpha() const noexcept { return alpha_; }
  void set_alpha(double a) { alpha_ = a; }
  std::size_t intervals() const noexcept { return values_.empty() ? 0 : values_.size() - 1; }
  double dt() const noexcept { return (T_ - t0_) / static_cast<double>(intervals()); }
  double time(std::size_t i) const noexcept { return t0_ + dt() * static_cast<double>(i); }
  const std::vector<double>& values() const noexcept { return values_; }
  bool analytic() const noexcept { return static_cast<bool>(f_); }

  /// Value at t (analytic evaluator, else linear interpolation).
  double at(double t) const;

  /// sup over grid pairs of |g(t)-g(s)| / |t-s|^alpha. Exact scan up to 4096
  /// intervals, dyadic lags beyond.
  double holder_constant() const;

  /// Linear midpoint insertion.
  HolderPath refine() const;

  /// t -> g(t0 + T - t) on the same interval.
  HolderPath reflected() const;

 private:
  double t0_ = 0.0;
  double T_ = 1.0;
  std::vector<double> values_;
  double alpha_ = 1.0;
  std::function<double(double)> f_;
};

enum class RiemannPoint { Left, Right };

struct YoungOptions {
  double tol = 1e-8;            // relative to max(1, |value|)
  std::size_t min_intervals = 4;
  std::size_t max_intervals = std::size_t{1} << 27;  // analytic paths
  RiemannPoint point = RiemannPoint::Left;
};

struct YoungResult {
  double value = 0.0;
  double error = 0.0;   // twice the last refinement delta
  std::size_t intervals = 0;
  bool converged = false;
  bool stalled = false;  // grid exhausted before reaching tol
};

/// Riemann-Stieltjes sums of f dg under refinement. Sampled paths refine up
/// to their native grid; analytic paths up to max_intervals.
YoungResult young_integral(const HolderPath& f, const HolderPath& g, const YoungOptions& opt = {});

struct Residual {
  double residual = 0.0;
  double bound = 0.0;  // combined error bound of the integrals involved
};

/// |int f dg + int g df - (f(b)g(b) - f(a)g(a))|.
Residual ibp_residual(const HolderPath& f, const HolderPath& g, const YoungOptions& opt = {});

/// |int_a^b f(t) dg(t) + int_a^b f(a+b-t) dg_b(t)| with g_b(t) = g(a+b-t).
Residual time_inversion_check(const HolderPath& f, const HolderPath& g, const YoungOptions& opt = {});

struct SingularResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

/// int_{t0}^t (t-s)^chi dg(s) = (t-t0)^chi (g(t)-g(t0)) - chi int_0^{t-t0} (g(t)-g(t-s)) s^(chi-1) ds.
/// Sampled paths: exact cellwise integration of the piecewise-linear path.
/// Analytic paths: adaptive Gauss-Kronrod in u = s^(alpha+chi).
SingularResult singular_kernel_integral(const HolderPath& g, double chi, double t);

/// Direct Stieltjes integral int_{t0}^{t-eps} (t-s)^chi dg(s).
double cutoff_integral(const HolderPath& g, double chi, double t, double eps);

}  // namespace rangelab
