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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rangelab/walks.hpp"

namespace rangelab {

enum class Regime { Sub, Mid, Sup };

std::string to_string(Regime r);
Regime regime_from_string(const std::string& name);

/// Regime of d/beta; boundaries compared with tolerance 1e-12.
Regime classify_regime(int d, double beta);

/// Hoelder / intersection exponent of the regime.
double regime_chi(int d, double beta);

enum class GreenMethod { Auto, Exact, Quadrature, MonteCarlo };

struct GreenOptions {
  GreenMethod method = GreenMethod::Auto;
  std::size_t exact_cost_cap = 500'000'000;   // cell updates
  std::size_t quad_nodes_cap = 1u << 20;      // tensor nodes (256^2 scale after grading)
  std::size_t mc_replicas = 1'000'000;
  std::size_t mc_step_budget = 4'000'000'000; // replicas * n
  std::uint64_t mc_seed = 0x9a7e11ULL;
};

struct GreenResult {
  double value = 0.0;
  double std_error = 0.0;  // zero for exact methods, quadrature estimate otherwise
  GreenMethod method = GreenMethod::Exact;
};

/// h(n) = sum_{k=1}^n P(X_k = 0).
GreenResult green_truncated(const WalkSpec& walk, std::size_t n, const GreenOptions& opt = {});

/// Several horizons at once, sharing one quadrature mesh (sorted ascending).
std::vector<GreenResult> green_truncated_many(const WalkSpec& walk, const std::vector<std::size_t>& ns,
                                              const GreenOptions& opt = {});

/// P(X_k = 0) for k = 0..n by exact lattice convolution (finite-support laws only).
std::vector<double> return_probabilities_exact(const WalkSpec& walk, std::size_t n);

class ScaleSuite {
 public:
  ScaleSuite() = default;

  int d = 1;
  double beta = 2.0;
  Regime regime = Regime::Sub;
  double chi = 0.5;
  double sigma_hat = 1.0;
  std::size_t n_max = 1;
  std::vector<std::pair<std::size_t, double>> h_table;  // ascending n
  std::vector<std::pair<std::size_t, double>> g_table;

  double b(double n) const;
  /// Slowly varying part: b(n) = n^(1/beta) s(n).
  double s(double /*n*/) const { return sigma_hat; }
  /// Truncated Green function; tabulated horizons exact, others interpolated in log n.
  double h(std::size_t n) const;
  double g(std::size_t n) const;
  /// Normalisation S_{d,beta}(n) of the regime.
  double S(std::size_t n) const;
};

void to_json(nlohmann::json& j, const ScaleSuite& s);
void from_json(const nlohmann::json& j, ScaleSuite& s);

/// Builds evaluators valid on [1, n_max]. `extra_h` horizons are tabulated
/// exactly in addition to the geometric grid.
ScaleSuite make_scale_suite(int d, double beta, const WalkSpec& walk, std::size_t n_max,
                            const std::vector<std::size_t>& extra_h = {}, const GreenOptions& opt = {});

struct PotterReport {
  double c_eps = 1.0;          // smallest admissible constant over the sampled pairs
  std::size_t pairs = 0;
  std::size_t violations = 0;  // pairs needing a constant above the cap
  bool regularly_varying = true;
};

/// Potter bounds over all pairs of samples (x_i, f_i), x ascending.
PotterReport potter_check(const std::vector<double>& x, const std::vector<double>& f, double kappa, double eps,
                          double cap = 1e6);

/// Memory kernel m: parametric L/(1+t)^delta or tabulated.
struct KernelSpec {
  enum class Form { Parametric, Tabulated };
  Form form = Form::Parametric;
  double L = 1.0;
  double delta = 0.0;
  double chi_m = 0.0;  // regular-variation index
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> slopes;  // Hermite slopes at grid nodes

  static KernelSpec parametric(double L, double delta);
  static KernelSpec constant(double L) { return parametric(L, 0.0); }
  /// Grid must start at 0, be strictly increasing, values positive with a
  /// monotone finite-difference derivative. chi from the last two nodes when NaN.
  static KernelSpec tabulated(std::vector<double> grid, std::vector<double> values, double chi = std::nan(""));
  static KernelSpec from_file(const std::string& path);
};

void to_json(nlohmann::json& j, const KernelSpec& k);
void from_json(const nlohmann::json& j, KernelSpec& k);

double kernel_eval(const KernelSpec& k, double t);
double kernel_rescaled(const KernelSpec& k, double n, double x);
double kernel_derivative(const KernelSpec& k, double t);
/// d/ds m_n(s) = n m'(ns) / m(n).
double kernel_rescaled_derivative(const KernelSpec& k, double n, double s);
/// M(t) = int_0^t m(u) du.
double kernel_antiderivative(const KernelSpec& k, double t);
/// sup of m on [0, t].
double kernel_sup(const KernelSpec& k, double t);

}  // namespace rangelab
