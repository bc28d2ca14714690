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

#include "rangelab/energy.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "rangelab/parallel.hpp"

namespace rangelab {

namespace {

void check_horizon(const RangeProcess& rp, double t) {
  if (!(t >= 0.0 && t <= static_cast<double>(rp.n))) throw DomainError("energy time outside [0, n]");
}

}  // namespace

double energy_discrete(const RangeProcess& rp, const KernelSpec& k, double t) {
  check_horizon(rp, t);
  CompensatedSum acc;
  for (auto tau : rp.discoveries) {
    if (static_cast<double>(tau) > t) break;
    acc.add(kernel_eval(k, t - static_cast<double>(tau)));
  }
  return acc.value();
}

double energy_interpolated(const RangeProcess& rp, const KernelSpec& k, double t) {
  check_horizon(rp, t);
  CompensatedSum acc;
  for (auto tau : rp.discoveries) {
    // the jump of R at tau is spread over the cell [tau - 1, tau]
    const double start = static_cast<double>(tau) - 1.0;
    if (start >= t) break;
    const double hi = t - start;
    const double lo = std::max(t - static_cast<double>(tau), 0.0);
    acc.add(kernel_antiderivative(k, hi) - kernel_antiderivative(k, lo));
  }
  return acc.value();
}

EnergyTable::EnergyTable(const KernelSpec& k, std::size_t horizon) : w_(horizon + 1) {
  double prev = 0.0;
  for (std::size_t j = 0; j <= horizon; ++j) {
    const double next = kernel_antiderivative(k, static_cast<double>(j + 1));
    w_[j] = next - prev;
    prev = next;
  }
}

double EnergyTable::at(const RangeProcess& rp, std::size_t t) const {
  if (t > rp.n) throw DomainError("energy time outside [0, n]");
  if (t >= w_.size()) throw DomainError("energy table shorter than the requested time");
  CompensatedSum acc;
  for (auto tau : rp.discoveries) {
    if (tau > t) break;
    acc.add(w_[t - tau]);
  }
  return acc.value();
}

void to_json(nlohmann::json& j, const EnergySample& s) {
  j = nlohmann::json{{"E", s.E}, {"Ecal", s.Ecal}, {"t_grid", s.t_grid}, {"kernel", s.kernel}, {"n", s.n}};
}

EnergySample energy_sample(const RangeProcess& rp, const KernelSpec& k, const std::vector<double>& times) {
  EnergySample s;
  s.kernel = k;
  s.n = rp.n;
  s.t_grid = times;
  for (double t : times) {
    s.E.push_back(energy_discrete(rp, k, t));
    s.Ecal.push_back(energy_interpolated(rp, k, t));
  }
  return s;
}

bool chi_admissible(const ScaleSuite& suite, double chi) {
  switch (suite.regime) {
    case Regime::Sup:
      return chi > -0.5;
    case Regime::Mid:
      return chi > suite.beta / suite.d - 2.0;
    case Regime::Sub:
      return chi > -1.0 / suite.beta;
  }
  return false;
}

std::vector<HolderPath> rescale_energy_grid(const std::vector<std::vector<double>>& energies, const ScaleSuite& suite,
                                            const KernelSpec& k, std::size_t n, const std::vector<double>& t_grid,
                                            double alpha) {
  if (!chi_admissible(suite, k.chi_m)) throw DomainError("kernel index outside the regime's admissible range");
  auto paths = rescale_center(energies, suite, n, t_grid, alpha);
  const double inv_m = 1.0 / kernel_eval(k, static_cast<double>(n));
  std::vector<HolderPath> out;
  out.reserve(paths.size());
  for (const auto& p : paths) {
    auto v = p.values();
    for (auto& x : v) x *= inv_m;
    out.emplace_back(p.t0(), p.T(), std::move(v), alpha);
  }
  return out;
}

std::vector<HolderPath> rescaled_energy(const std::vector<RangeProcess>& ensemble, const ScaleSuite& suite,
                                        const KernelSpec& k, std::size_t n, const std::vector<double>& t_grid,
                                        double alpha) {
  if (!chi_admissible(suite, k.chi_m)) throw DomainError("kernel index outside the regime's admissible range");
  auto energies = parallel_map(ensemble.size(), [&](std::size_t r) {
    std::vector<double> row;
    row.reserve(t_grid.size());
    for (double t : t_grid) row.push_back(energy_interpolated(ensemble[r], k, t * static_cast<double>(n)));
    return row;
  });
  return rescale_energy_grid(energies, suite, k, n, t_grid, alpha);
}

double limit_covariance(double chi, double s, double t) {
  if (s > t) std::swap(s, t);
  if (s <= 0.0) return 0.0;
  if (!(chi > -0.5)) throw DomainError("limit covariance needs chi > -1/2");
  if (s == t) return std::pow(s, 2.0 * chi + 1.0) / (2.0 * chi + 1.0);
  boost::math::quadrature::tanh_sinh<double> ts;
  const double gap = t - s;
  return ts.integrate([&](double v) { return std::pow(gap + v, chi) * std::pow(v, chi); }, 0.0, s);
}

std::vector<std::vector<double>> limit_energy_sampler(Regime regime, double chi, const std::vector<double>& t_grid,
                                                      std::uint64_t seed, std::size_t samples,
                                                      const std::vector<HolderPath>* limit_paths) {
  std::vector<std::vector<double>> out;
  if (regime != Regime::Sup) {
    if (limit_paths == nullptr || limit_paths->empty()) throw DomainError("MID and SUB limits need supplied paths");
    out.reserve(limit_paths->size());
    for (const auto& g : *limit_paths) {
      std::vector<double> row;
      for (double t : t_grid) row.push_back(singular_kernel_integral(g, chi, t).value);
      out.push_back(std::move(row));
    }
    return out;
  }
  if (!(chi > -0.5)) throw DomainError("SUP limit needs chi > -1/2");
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] < 0.0) throw DomainError("limit sampler needs nonnegative times");
    if (t_grid[i] > 0.0) live.push_back(i);
  }
  const std::size_t m = live.size();
  std::vector<double> L(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double c = limit_covariance(chi, t_grid[live[i]], t_grid[live[j]]);
      for (std::size_t q = 0; q < j; ++q) c -= L[i * m + q] * L[j * m + q];
      if (i == j) {
        if (c <= 0.0) c = 0.0;
        L[i * m + i] = std::sqrt(c);
      } else {
        L[i * m + j] = L[j * m + j] > 0.0 ? c / L[j * m + j] : 0.0;
      }
    }
  }
  out.assign(samples, std::vector<double>(t_grid.size(), 0.0));
  std::vector<double> z(m);
  for (std::size_t r = 0; r < samples; ++r) {
    Rng rng(derive_seed(seed, r));
    for (auto& v : z) v = rng.normal();
    for (std::size_t i = 0; i < m; ++i) {
      double acc = 0.0;
      for (std::size_t q = 0; q <= i; ++q) acc += L[i * m + q] * z[q];
      out[r][live[i]] = acc;
    }
  }
  return out;
}

IdentityCheck energy_ibp_identity(const RangeProcess& rp, const ScaleSuite& suite, const KernelSpec& k,
                                  std::size_t n, double t) {
  const double nn = static_cast<double>(n);
  const double S = suite.S(n);
  const double mn = kernel_eval(k, nn);
  IdentityCheck c;
  c.direct = S / mn * energy_interpolated(rp, k, t * nn);
  auto P = [&](double r) { return S * interpolate(rp, nn * r); };
  const double Pt = P(t);
  // D(s) = P(t) - P(t - s) is linear between the knots s = t - j/n
  using GL = boost::math::quadrature::gauss<double, 20>;
  CompensatedSum acc;
  double s_lo = 0.0;
  auto j = static_cast<long long>(std::floor(t * nn));
  if (static_cast<double>(j) == t * nn) --j;
  while (s_lo < t) {
    const double s_hi = j >= 0 ? t - static_cast<double>(j) / nn : t;
    if (s_hi > s_lo) {
      const double Da = Pt - P(t - s_lo), Db = Pt - P(t - s_hi);
      const double w = s_hi - s_lo;
      acc.add(GL::integrate(
          [&](double s) {
            const double D = Da + (Db - Da) * (s - s_lo) / w;
            return D * kernel_rescaled_derivative(k, nn, s);
          },
          s_lo, s_hi));
    }
    s_lo = s_hi;
    --j;
  }
  c.ibp = kernel_rescaled(k, nn, t) * (Pt - P(0.0)) - acc.value();
  c.tolerance = 1e-9 * std::max(1.0, std::abs(c.direct) + std::abs(kernel_rescaled(k, nn, t) * (Pt - P(0.0))));
  return c;
}

}  // namespace rangelab
