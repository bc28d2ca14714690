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
#include <optional>
#include <vector>

#include "json.hpp"
#include "rangelab/rangekit.hpp"
#include "rangelab/regvar.hpp"
#include "rangelab/youngint.hpp"

namespace rangelab {

/// E_t = sum over discovery times tau_i <= t of m(t - tau_i).
double energy_discrete(const RangeProcess& rp, const KernelSpec& k, double t);

/// Stieltjes integral of m(t - s) against the interpolated range on [0, t].
double energy_interpolated(const RangeProcess& rp, const KernelSpec& k, double t);

/// Interpolated energy at integer times through precomputed cell weights
/// w[j] = M(j + 1) - M(j).
class EnergyTable {
 public:
  EnergyTable(const KernelSpec& k, std::size_t horizon);
  double at(const RangeProcess& rp, std::size_t t) const;

 private:
  std::vector<double> w_;
};

struct EnergySample {
  std::vector<double> E;
  std::vector<double> Ecal;
  std::vector<double> t_grid;  // in steps
  KernelSpec kernel;
  std::size_t n = 0;
};

void to_json(nlohmann::json& j, const EnergySample& s);

EnergySample energy_sample(const RangeProcess& rp, const KernelSpec& k, const std::vector<double>& times);

/// Admissible kernel index for the regime: chi > -1/2 (SUP), beta/d - 2 (MID), -1/beta (SUB).
bool chi_admissible(const ScaleSuite& suite, double chi);

/// S(n)/m(n) (Ecal_{nt} - ensemble mean) per replica over t_grid in [0, 1];
/// SUB paths are not centred.
std::vector<HolderPath> rescaled_energy(const std::vector<RangeProcess>& ensemble, const ScaleSuite& suite,
                                        const KernelSpec& k, std::size_t n, const std::vector<double>& t_grid,
                                        double alpha = 0.5);

/// Same from energies already evaluated on n * t_grid (rows = replicas).
std::vector<HolderPath> rescale_energy_grid(const std::vector<std::vector<double>>& energies, const ScaleSuite& suite,
                                            const KernelSpec& k, std::size_t n, const std::vector<double>& t_grid,
                                            double alpha = 0.5);

/// Samples of the limiting energy, rows = samples, columns = t_grid.
/// SUP: exact centred Gaussian with unit sigma. MID and SUB: the singular
/// kernel integral of each supplied limit path.
std::vector<std::vector<double>> limit_energy_sampler(Regime regime, double chi, const std::vector<double>& t_grid,
                                                      std::uint64_t seed, std::size_t samples,
                                                      const std::vector<HolderPath>* limit_paths = nullptr);

/// Covariance of int_0^s (s-u)^chi dW_u and int_0^t (t-u)^chi dW_u.
double limit_covariance(double chi, double s, double t);

struct IdentityCheck {
  double direct = 0.0;  // S/m(n) Ecal_{nt}
  double ibp = 0.0;     // m_n(t)(P(t)-P(0)) - int_0^t (P(t)-P(t-s)) d/ds m_n(s) ds
  double tolerance = 0.0;
  bool pass() const { return std::abs(direct - ibp) <= tolerance; }
};

/// Integration-by-parts form of the rescaled energy on one path, P(s) = S R_{ns}.
IdentityCheck energy_ibp_identity(const RangeProcess& rp, const ScaleSuite& suite, const KernelSpec& k,
                                  std::size_t n, double t);

}  // namespace rangelab
