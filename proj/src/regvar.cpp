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

#include "rangelab/regvar.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>

namespace rangelab {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Sub: return "SUB";
    case Regime::Mid: return "MID";
    case Regime::Sup: return "SUP";
  }
  return "?";
}

Regime regime_from_string(const std::string& name) {
  if (name == "SUB") return Regime::Sub;
  if (name == "MID") return Regime::Mid;
  if (name == "SUP") return Regime::Sup;
  throw ConfigError("unknown regime '" + name + "'");
}

Regime classify_regime(int d, double beta) {
  constexpr double tol = 1e-12;
  const double r = d / beta;
  if (r < 1.0 - tol) return Regime::Sub;
  if (r < 1.5 - tol) return Regime::Mid;
  return Regime::Sup;
}

double regime_chi(int d, double beta) {
  switch (classify_regime(d, beta)) {
    case Regime::Sub: return 1.0 / beta;
    case Regime::Mid: return 2.0 - d / beta;
    case Regime::Sup: return 0.5;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Truncated Green function

namespace {

struct Rule {
  std::vector<double> x;  // on [-1, 1]
  std::vector<double> w;
};

template <unsigned N>
Rule gauss_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  Rule r;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  for (std::size_t i = 0; i < a.size(); ++i) {
    r.x.push_back(a[i]);
    r.w.push_back(w[i]);
    if (a[i] != 0.0) {
      r.x.push_back(-a[i]);
      r.w.push_back(w[i]);
    }
  }
  return r;
}

bool finite_support(const WalkSpec& w) {
  return w.law == Law::Srw || w.law == Law::LazySrw || w.law == Law::Tabulated;
}

std::vector<Atom> atoms_of(const WalkSpec& w) {
  std::vector<Atom> out;
  const auto d = static_cast<std::size_t>(w.d);
  if (w.law == Law::Tabulated) return w.atoms;
  const double move = w.law == Law::LazySrw ? 1.0 - w.hold : 1.0;
  if (w.law == Law::LazySrw) out.push_back(Atom{std::vector<std::int64_t>(d, 0), w.hold});
  for (std::size_t i = 0; i < d; ++i) {
    for (int s : {-1, 1}) {
      std::vector<std::int64_t> p(d, 0);
      p[i] = s;
      out.push_back(Atom{p, move / (2.0 * static_cast<double>(d))});
    }
  }
  return out;
}

std::int64_t support_radius(const std::vector<Atom>& atoms) {
  std::int64_t r = 0;
  for (const auto& a : atoms) {
    for (auto c : a.point) r = std::max(r, std::abs(c));
  }
  return r;
}

double exact_cost(const WalkSpec& w, std::size_t n) {
  if (!finite_support(w)) return std::numeric_limits<double>::infinity();
  const auto atoms = atoms_of(w);
  const double side = 2.0 * static_cast<double>(support_radius(atoms)) * static_cast<double>(n) + 1.0;
  return static_cast<double>(n) * std::pow(side, w.d) * static_cast<double>(atoms.size());
}

// Graded one-dimensional mesh on [0, pi] (or [-pi, pi] when mirrored),
// geometric panels refining toward the origin.
Rule graded_mesh(std::size_t n_max, const Rule& base, bool mirror) {
  const int levels = static_cast<int>(std::ceil(std::log2(kPi * std::sqrt(static_cast<double>(n_max))))) + 4;
  std::vector<double> edges{0.0};
  for (int l = std::max(levels, 1); l >= 1; --l) edges.push_back(kPi * std::ldexp(1.0, -l));
  edges.push_back(kPi);
  Rule out;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p];
    const double b = edges[p + 1];
    for (std::size_t i = 0; i < base.x.size(); ++i) {
      const double x = 0.5 * (a + b) + 0.5 * (b - a) * base.x[i];
      const double wt = 0.5 * (b - a) * base.w[i];
      out.x.push_back(x);
      out.w.push_back(wt);
      if (mirror) {
        out.x.push_back(-x);
        out.w.push_back(wt);
      }
    }
  }
  return out;
}

// sum_{k=1}^n z^k for real z, with om = 1 - z supplied accurately.
double geometric_real(double z, double om, double n) {
  if (om * n < 1e-10) return z * n * (1.0 - 0.5 * (n - 1.0) * om);
  if (z > 0.5) return z * (-std::expm1(n * std::log1p(-om))) / om;
  return z * (1.0 - std::pow(z, n)) / om;
}

std::complex<double> geometric_complex(std::complex<double> z, std::complex<double> om, double n) {
  if (std::abs(om) * n < 1e-10) return z * n * (1.0 - 0.5 * (n - 1.0) * om);
  const std::complex<double> zn = std::exp(n * std::log(z));
  return z * (1.0 - zn) / om;
}

// Per-node characteristic data shared across horizons.
struct TorusSamples {
  std::vector<double> weight;
  std::vector<double> phi;
  std::vector<double> om;
  std::vector<std::complex<double>> cphi;
  std::vector<std::complex<double>> com;
  bool complex_valued = false;
  double scale = 1.0;  // (2 pi)^-d times symmetry factor
};

TorusSamples sample_torus(const WalkSpec& w, const Rule& axis) {
  TorusSamples ts;
  const int d = w.d;
  const std::size_t m = axis.x.size();
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= m;
  ts.weight.resize(total);
  ts.complex_valued = w.law == Law::Tabulated;
  if (ts.complex_valued) {
    ts.cphi.resize(total);
    ts.com.resize(total);
    ts.scale = std::pow(2.0 * kPi, -d);
  } else {
    ts.phi.resize(total);
    ts.om.resize(total);
    ts.scale = std::pow(kPi, -d);
  }
  // axis-level caches
  std::vector<double> cosv(m), sin2(m), p1(m), a1(m);
  std::unique_ptr<ParetoMagnitude> mag;
  if (w.law == Law::DiscretePareto || w.law == Law::ProductPareto) mag = std::make_unique<ParetoMagnitude>(w.beta);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = axis.x[i];
    cosv[i] = std::cos(x);
    const double s = std::sin(0.5 * x);
    sin2[i] = 2.0 * s * s;
    if (mag) {
      p1[i] = mag->cosine_series(x);
      a1[i] = 1.0 - p1[i];
    }
  }
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> x(static_cast<std::size_t>(d));
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t r = flat;
    double wt = 1.0;
    for (int i = d - 1; i >= 0; --i) {
      idx[static_cast<std::size_t>(i)] = r % m;
      r /= m;
      wt *= axis.w[idx[static_cast<std::size_t>(i)]];
      x[static_cast<std::size_t>(i)] = axis.x[idx[static_cast<std::size_t>(i)]];
    }
    ts.weight[flat] = wt;
    switch (w.law) {
      case Law::Srw:
      case Law::LazySrw: {
        double c = 0.0, s2 = 0.0;
        for (auto j : idx) c += cosv[j], s2 += sin2[j];
        const double move = w.law == Law::LazySrw ? 1.0 - w.hold : 1.0;
        ts.phi[flat] = (1.0 - move) + move * c / d;
        ts.om[flat] = move * s2 / d;
        break;
      }
      case Law::DiscretePareto:
      case Law::ProductPareto: {
        double prod = 1.0, logsum = 0.0;
        for (auto j : idx) prod *= p1[j], logsum += std::log1p(-a1[j]);
        ts.phi[flat] = prod;
        ts.om[flat] = -std::expm1(logsum);
        break;
      }
      case Law::Tabulated: {
        std::complex<double> acc{0.0, 0.0}, om{0.0, 0.0};
        for (const auto& a : w.atoms) {
          double th = 0.0;
          for (int i = 0; i < d; ++i) th += x[static_cast<std::size_t>(i)] * static_cast<double>(a.point[static_cast<std::size_t>(i)]);
          const double s = std::sin(0.5 * th);
          acc += a.mass * std::complex<double>(std::cos(th), std::sin(th));
          om += a.mass * std::complex<double>(2.0 * s * s, -std::sin(th));
        }
        ts.cphi[flat] = acc;
        ts.com[flat] = om;
        break;
      }
    }
  }
  return ts;
}

double torus_green(const TorusSamples& ts, double n) {
  CompensatedSum acc;
  if (ts.complex_valued) {
    for (std::size_t i = 0; i < ts.weight.size(); ++i) {
      acc.add(ts.weight[i] * geometric_complex(ts.cphi[i], ts.com[i], n).real());
    }
  } else {
    for (std::size_t i = 0; i < ts.weight.size(); ++i) {
      acc.add(ts.weight[i] * geometric_real(ts.phi[i], ts.om[i], n));
    }
  }
  return ts.scale * acc.value();
}

std::vector<GreenResult> green_quadrature(const WalkSpec& w, const std::vector<std::size_t>& ns, const GreenOptions& opt) {
  const std::size_t n_max = ns.back();
  const bool mirror = w.law == Law::Tabulated;
  const Rule fine = graded_mesh(n_max, gauss_rule<20>(), mirror);
  const Rule coarse = graded_mesh(n_max, gauss_rule<15>(), mirror);
  if (std::pow(static_cast<double>(fine.x.size()), w.d) > static_cast<double>(opt.quad_nodes_cap)) {
    throw ResourceError("characteristic-function quadrature exceeds the node budget in dimension " +
                        std::to_string(w.d));
  }
  const auto tf = sample_torus(w, fine);
  const auto tc = sample_torus(w, coarse);
  std::vector<GreenResult> out;
  for (auto n : ns) {
    const double a = torus_green(tf, static_cast<double>(n));
    const double b = torus_green(tc, static_cast<double>(n));
    out.push_back({a, std::abs(a - b), GreenMethod::Quadrature});
  }
  return out;
}

GreenResult green_monte_carlo(const WalkSpec& w, std::size_t n, const GreenOptions& opt) {
  const double cost = static_cast<double>(opt.mc_replicas) * static_cast<double>(n);
  if (cost > static_cast<double>(opt.mc_step_budget)) {
    throw ResourceError("Monte Carlo Green function exceeds the step budget (" + std::to_string(opt.mc_replicas) +
                        " replicas x " + std::to_string(n) + " steps)");
  }
  IncrementSampler sampler(w);
  double sum = 0.0, sum2 = 0.0;
  std::array<std::int64_t, kMaxDim> x{};
  const std::span<std::int64_t> xs(x.data(), static_cast<std::size_t>(w.d));
  for (std::size_t r = 0; r < opt.mc_replicas; ++r) {
    Rng rng(derive_seed(opt.mc_seed, r));
    std::fill(x.begin(), x.end(), 0);
    double returns = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      sampler.step(rng, xs);
      if (std::all_of(xs.begin(), xs.end(), [](std::int64_t c) { return c == 0; })) returns += 1.0;
    }
    sum += returns;
    sum2 += returns * returns;
  }
  const double N = static_cast<double>(opt.mc_replicas);
  const double mean = sum / N;
  const double var = std::max(0.0, sum2 / N - mean * mean);
  return {mean, std::sqrt(var / N), GreenMethod::MonteCarlo};
}

}  // namespace

std::vector<double> return_probabilities_exact(const WalkSpec& w, std::size_t n) {
  w.validate();
  if (!finite_support(w)) throw DomainError("exact convolution needs a finite-support law");
  const auto atoms = atoms_of(w);
  const std::int64_t r = support_radius(atoms) * static_cast<std::int64_t>(n);
  const std::int64_t side = 2 * r + 1;
  const int d = w.d;
  std::size_t cells = 1;
  for (int i = 0; i < d; ++i) cells *= static_cast<std::size_t>(side);
  std::vector<double> cur(cells, 0.0), next(cells, 0.0);
  std::vector<std::int64_t> stride(static_cast<std::size_t>(d));
  std::int64_t s = 1;
  for (int i = d - 1; i >= 0; --i) {
    stride[static_cast<std::size_t>(i)] = s;
    s *= side;
  }
  std::int64_t origin = 0;
  for (int i = 0; i < d; ++i) origin += r * stride[static_cast<std::size_t>(i)];
  std::vector<std::int64_t> offset;
  for (const auto& a : atoms) {
    std::int64_t o = 0;
    for (int i = 0; i < d; ++i) o += a.point[static_cast<std::size_t>(i)] * stride[static_cast<std::size_t>(i)];
    offset.push_back(o);
  }
  cur[static_cast<std::size_t>(origin)] = 1.0;
  std::vector<double> p{1.0};
  const std::int64_t step_r = support_radius(atoms);
  for (std::size_t k = 1; k <= n; ++k) {
    std::fill(next.begin(), next.end(), 0.0);
    // only cells within radius (k-1)*step_r of the origin can be occupied
    const std::int64_t reach = static_cast<std::int64_t>(k - 1) * step_r;
    std::vector<std::int64_t> lo(static_cast<std::size_t>(d), r - reach), c(static_cast<std::size_t>(d));
    std::fill(c.begin(), c.end(), r - reach);
    while (true) {
      std::int64_t flat = 0;
      for (int i = 0; i < d; ++i) flat += c[static_cast<std::size_t>(i)] * stride[static_cast<std::size_t>(i)];
      const double v = cur[static_cast<std::size_t>(flat)];
      if (v != 0.0) {
        for (std::size_t a = 0; a < atoms.size(); ++a) {
          next[static_cast<std::size_t>(flat + offset[a])] += v * atoms[a].mass;
        }
      }
      int i = d - 1;
      while (i >= 0) {
        auto& ci = c[static_cast<std::size_t>(i)];
        if (++ci <= r + reach) break;
        ci = r - reach;
        --i;
      }
      if (i < 0) break;
    }
    cur.swap(next);
    p.push_back(cur[static_cast<std::size_t>(origin)]);
  }
  return p;
}

std::vector<GreenResult> green_truncated_many(const WalkSpec& w, const std::vector<std::size_t>& ns,
                                              const GreenOptions& opt) {
  w.validate();
  if (ns.empty()) return {};
  if (!std::is_sorted(ns.begin(), ns.end()) || ns.front() < 1) throw DomainError("horizons must be ascending and >= 1");
  std::vector<GreenResult> out(ns.size());
  std::vector<std::size_t> quad_idx;
  std::vector<double> exact;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const std::size_t n = ns[i];
    GreenMethod m = opt.method;
    if (m == GreenMethod::Auto) {
      if (n <= 64 && exact_cost(w, n) <= static_cast<double>(opt.exact_cost_cap)) {
        m = GreenMethod::Exact;
      } else if (w.d <= 2) {
        m = GreenMethod::Quadrature;
      } else {
        m = GreenMethod::MonteCarlo;
      }
    }
    if (m == GreenMethod::Exact) {
      if (exact_cost(w, n) > static_cast<double>(opt.exact_cost_cap)) {
        throw ResourceError("exact convolution exceeds the cost budget at n = " + std::to_string(n));
      }
      if (exact.size() < n + 1) exact = return_probabilities_exact(w, n);
      CompensatedSum acc;
      for (std::size_t k = 1; k <= n; ++k) acc.add(exact[k]);
      out[i] = {acc.value(), 0.0, GreenMethod::Exact};
    } else if (m == GreenMethod::Quadrature) {
      quad_idx.push_back(i);
    } else {
      out[i] = green_monte_carlo(w, n, opt);
    }
  }
  if (!quad_idx.empty()) {
    std::vector<std::size_t> qn;
    for (auto i : quad_idx) qn.push_back(ns[i]);
    const auto q = green_quadrature(w, qn, opt);
    for (std::size_t k = 0; k < quad_idx.size(); ++k) out[quad_idx[k]] = q[k];
  }
  return out;
}

GreenResult green_truncated(const WalkSpec& walk, std::size_t n, const GreenOptions& opt) {
  if (n < 1) throw DomainError("green_truncated needs n >= 1");
  return green_truncated_many(walk, {n}, opt).front();
}

// ---------------------------------------------------------------------------
// Scale suite

double ScaleSuite::b(double n) const { return sigma_hat * std::pow(n, 1.0 / beta); }

double ScaleSuite::h(std::size_t n) const {
  if (h_table.empty()) throw ResourceError("h is not tabulated for this suite");
  auto it = std::lower_bound(h_table.begin(), h_table.end(), n,
                             [](const auto& e, std::size_t v) { return e.first < v; });
  if (it != h_table.end() && it->first == n) return it->second;
  if (it == h_table.begin() || it == h_table.end()) {
    throw ResourceError("h(" + std::to_string(n) + ") outside the tabulated range");
  }
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double x0 = std::log(static_cast<double>(lo.first));
  const double x1 = std::log(static_cast<double>(hi.first));
  const double u = (std::log(static_cast<double>(n)) - x0) / (x1 - x0);
  if (regime == Regime::Sub && lo.second > 0.0) {
    return std::exp(std::log(lo.second) + u * (std::log(hi.second) - std::log(lo.second)));
  }
  return lo.second + u * (hi.second - lo.second);
}

double ScaleSuite::g(std::size_t n) const {
  std::size_t start = 0;
  double base = 0.0;
  auto it = std::upper_bound(g_table.begin(), g_table.end(), n,
                             [](std::size_t v, const auto& e) { return v < e.first; });
  if (it != g_table.begin()) {
    --it;
    start = it->first;
    base = it->second;
  }
  if (start == n) return base;
  CompensatedSum acc;
  acc.add(base);
  const double p = 2.0 - 2.0 * d / beta;
  const double c = std::pow(sigma_hat, -2.0 * d);
  for (std::size_t k = start + 1; k <= n; ++k) acc.add(c * std::pow(static_cast<double>(k), p));
  return acc.value();
}

double ScaleSuite::S(std::size_t n) const {
  const double nn = static_cast<double>(n);
  switch (regime) {
    case Regime::Sub: return 1.0 / b(nn);
    case Regime::Mid: {
      const double hv = h(n);
      return hv * hv * std::pow(b(nn), d) / (nn * nn);
    }
    case Regime::Sup: return 1.0 / std::sqrt(nn * g(n));
  }
  return 0.0;
}

void to_json(nlohmann::json& j, const ScaleSuite& s) {
  auto table = [](const std::vector<std::pair<std::size_t, double>>& t) {
    auto arr = nlohmann::json::array();
    for (const auto& [n, v] : t) arr.push_back({n, v});
    return arr;
  };
  j = nlohmann::json{{"d", s.d},
                     {"beta", s.beta},
                     {"regime", to_string(s.regime)},
                     {"chi", s.chi},
                     {"sigma_hat", s.sigma_hat},
                     {"n_max", s.n_max},
                     {"h_table", table(s.h_table)},
                     {"g_table", table(s.g_table)}};
}

void from_json(const nlohmann::json& j, ScaleSuite& s) {
  try {
    s = ScaleSuite{};
    s.d = j.at("d").get<int>();
    s.beta = j.at("beta").get<double>();
    s.regime = regime_from_string(j.at("regime").get<std::string>());
    s.chi = j.at("chi").get<double>();
    s.sigma_hat = j.at("sigma_hat").get<double>();
    s.n_max = j.value("n_max", std::size_t{1});
    for (const auto& e : j.at("h_table")) s.h_table.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<double>());
    for (const auto& e : j.at("g_table")) s.g_table.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scale suite: ") + e.what());
  }
  if (classify_regime(s.d, s.beta) != s.regime) throw ConfigError("scale suite regime disagrees with d/beta");
}

ScaleSuite make_scale_suite(int d, double beta, const WalkSpec& walk, std::size_t n_max,
                            const std::vector<std::size_t>& extra_h, const GreenOptions& opt) {
  if (!(beta > 0.0 && beta <= 2.0)) throw DomainError("stability index must lie in (0, 2]");
  if (d < 1) throw DomainError("dimension must be >= 1");
  if (n_max < 1) throw DomainError("n_max must be >= 1");
  walk.validate();
  if (walk.d != d || std::abs(walk.beta - beta) > 1e-12) throw DomainError("walk spec disagrees with (d, beta)");
  if (d == 1 && walk.law == Law::Tabulated && beta < 1.0) {
    const bool pos = std::all_of(walk.atoms.begin(), walk.atoms.end(), [](const Atom& a) { return a.mass == 0.0 || a.point[0] >= 0; });
    const bool neg = std::all_of(walk.atoms.begin(), walk.atoms.end(), [](const Atom& a) { return a.mass == 0.0 || a.point[0] <= 0; });
    if (pos || neg) throw DomainError("one-sided law with beta < 1: the limit is a stable subordinator");
  }
  ScaleSuite s;
  s.d = d;
  s.beta = beta;
  s.regime = classify_regime(d, beta);
  s.chi = regime_chi(d, beta);
  s.sigma_hat = walk.sigma_hat;
  s.n_max = n_max;

  std::vector<std::size_t> grid;
  for (std::size_t n = 1; n <= std::min<std::size_t>(64, n_max); ++n) grid.push_back(n);
  for (int k = 49;; ++k) {
    const auto n = static_cast<std::size_t>(std::llround(std::exp2(k / 8.0)));
    if (n >= n_max) break;
    if (n > grid.back()) grid.push_back(n);
  }
  if (n_max > grid.back()) grid.push_back(n_max);
  for (auto n : extra_h) {
    if (n >= 1 && n <= n_max) grid.push_back(n);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  // g at the grid by one running compensated sum
  {
    CompensatedSum acc;
    const double p = 2.0 - 2.0 * d / beta;
    const double c = std::pow(s.sigma_hat, -2.0 * d);
    std::size_t k = 0;
    for (auto n : grid) {
      for (; k < n; ++k) acc.add(c * std::pow(static_cast<double>(k + 1), p));
      s.g_table.emplace_back(n, acc.value());
    }
  }

  // h: exact / quadrature only; Monte Carlo is left to explicit calls.
  std::vector<std::size_t> hgrid;
  for (auto n : grid) {
    const bool exact_ok = n <= 64 && exact_cost(walk, n) <= static_cast<double>(opt.exact_cost_cap);
    if (exact_ok || d <= 2) hgrid.push_back(n);
  }
  if (!hgrid.empty()) {
    const auto h = green_truncated_many(walk, hgrid, opt);
    for (std::size_t i = 0; i < hgrid.size(); ++i) s.h_table.emplace_back(hgrid[i], h[i].value);
  }
  if (s.regime == Regime::Mid && (s.h_table.empty() || s.h_table.back().first < n_max)) {
    throw ResourceError("regime MID needs h(n) up to n_max but quadrature is unavailable in this dimension");
  }
  return s;
}

// ---------------------------------------------------------------------------

PotterReport potter_check(const std::vector<double>& x, const std::vector<double>& f, double kappa, double eps,
                          double cap) {
  if (x.size() != f.size()) throw DomainError("potter_check: size mismatch");
  if (!(eps > 0.0)) throw DomainError("potter_check: eps must be positive");
  PotterReport rep;
  double c = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      ++rep.pairs;
      const double r = x[i] / x[j];
      const double lr = std::log(r);
      const double lq = std::log(f[i]) - std::log(f[j]);
      const double up = std::max((kappa - eps) * lr, (kappa + eps) * lr);
      const double lo = std::min((kappa - eps) * lr, (kappa + eps) * lr);
      double need = std::max(lq - up, lo - lq);
      if (!std::isfinite(need)) need = std::numeric_limits<double>::infinity();
      const double cn = std::exp(std::max(0.0, need));
      if (cn > cap) {
        ++rep.violations;
      } else {
        c = std::max(c, cn);
      }
    }
  }
  rep.c_eps = rep.violations ? std::numeric_limits<double>::infinity() : c;
  rep.regularly_varying = rep.violations == 0;
  return rep;
}

// ---------------------------------------------------------------------------
// Kernels

KernelSpec KernelSpec::parametric(double L, double delta) {
  if (!(L > 0.0)) throw DomainError("kernel amplitude must be positive");
  KernelSpec k;
  k.form = Form::Parametric;
  k.L = L;
  k.delta = delta;
  k.chi_m = -delta;
  return k;
}

KernelSpec KernelSpec::tabulated(std::vector<double> grid, std::vector<double> values, double chi) {
  const std::size_t n = grid.size();
  if (n < 3 || values.size() != n) throw DomainError("tabulated kernel needs >= 3 matching nodes");
  if (grid[0] != 0.0) throw DomainError("tabulated kernel grid must start at 0");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(grid[i] > grid[i - 1])) throw DomainError("tabulated kernel grid must be strictly increasing");
  }
  for (double v : values) {
    if (!(v > 0.0)) throw DomainError("tabulated kernel must be strictly positive");
  }
  std::vector<double> slope(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) slope[i] = (values[i + 1] - values[i]) / (grid[i + 1] - grid[i]);
  const bool inc = std::is_sorted(slope.begin(), slope.end());
  const bool dec = std::is_sorted(slope.begin(), slope.end(), std::greater<>());
  if (!inc && !dec) throw DomainError("tabulated kernel derivative is not monotone");
  KernelSpec k;
  k.form = Form::Tabulated;
  k.grid = std::move(grid);
  k.values = std::move(values);
  k.slopes.resize(n);
  k.slopes[0] = slope[0];
  k.slopes[n - 1] = slope[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = k.grid[i] - k.grid[i - 1];
    const double h1 = k.grid[i + 1] - k.grid[i];
    k.slopes[i] = (slope[i - 1] * h1 + slope[i] * h0) / (h0 + h1);
  }
  k.L = k.values[0];
  if (std::isnan(chi)) {
    chi = std::log(k.values[n - 1] / k.values[n - 2]) / std::log(k.grid[n - 1] / k.grid[n - 2]);
  }
  k.chi_m = chi;
  k.delta = -chi;
  return k;
}

KernelSpec KernelSpec::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open kernel file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return nlohmann::json::parse(text).get<KernelSpec>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("kernel file: ") + e.what());
    }
  }
  std::vector<double> t, v;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    double a, b;
    if (row >> a >> b) {
      t.push_back(a);
      v.push_back(b);
    }
  }
  return tabulated(std::move(t), std::move(v));
}

void to_json(nlohmann::json& j, const KernelSpec& k) {
  if (k.form == KernelSpec::Form::Parametric) {
    j = nlohmann::json{{"form", "parametric"}, {"L", k.L}, {"delta", k.delta}, {"chi", k.chi_m}};
  } else {
    j = nlohmann::json{{"form", "tabulated"}, {"grid", k.grid}, {"values", k.values}, {"chi", k.chi_m}};
  }
}

void from_json(const nlohmann::json& j, KernelSpec& k) {
  const std::string form = j.value("form", std::string(j.contains("grid") ? "tabulated" : "parametric"));
  if (form == "parametric") {
    k = KernelSpec::parametric(j.at("L").get<double>(), j.at("delta").get<double>());
  } else if (form == "tabulated") {
    const double chi = j.contains("chi") ? j.at("chi").get<double>() : std::nan("");
    k = KernelSpec::tabulated(j.at("grid").get<std::vector<double>>(), j.at("values").get<std::vector<double>>(), chi);
  } else {
    throw ConfigError("unknown kernel form '" + form + "'");
  }
}

namespace {

void check_time(double t) {
  if (!(t >= 0.0)) throw DomainError("kernel evaluated at negative time");
}

std::size_t segment(const KernelSpec& k, double t) {
  auto it = std::upper_bound(k.grid.begin(), k.grid.end(), t);
  return static_cast<std::size_t>(it - k.grid.begin()) - 1;
}

double hermite(const KernelSpec& k, std::size_t i, double t) {
  const double h = k.grid[i + 1] - k.grid[i];
  const double u = (t - k.grid[i]) / h;
  const double u2 = u * u, u3 = u2 * u;
  return k.values[i] * (2 * u3 - 3 * u2 + 1) + h * k.slopes[i] * (u3 - 2 * u2 + u) + k.values[i + 1] * (-2 * u3 + 3 * u2) +
         h * k.slopes[i + 1] * (u3 - u2);
}

double hermite_integral(const KernelSpec& k, std::size_t i, double theta) {
  const double h = k.grid[i + 1] - k.grid[i];
  const double t2 = theta * theta, t3 = t2 * theta, t4 = t3 * theta;
  return h * (k.values[i] * (theta - t3 + 0.5 * t4) + h * k.slopes[i] * (0.5 * t2 - 2.0 * t3 / 3.0 + 0.25 * t4) +
              k.values[i + 1] * (t3 - 0.5 * t4) + h * k.slopes[i + 1] * (-t3 / 3.0 + 0.25 * t4));
}

}  // namespace

double kernel_eval(const KernelSpec& k, double t) {
  check_time(t);
  if (k.form == KernelSpec::Form::Parametric) return k.L * std::pow(1.0 + t, -k.delta);
  const double T = k.grid.back();
  if (t >= T) return k.values.back() * std::pow(t / T, k.chi_m);
  return hermite(k, segment(k, t), t);
}

double kernel_rescaled(const KernelSpec& k, double n, double x) {
  if (!(n >= 1.0)) throw DomainError("rescaling needs n >= 1");
  return kernel_eval(k, n * x) / kernel_eval(k, n);
}

double kernel_derivative(const KernelSpec& k, double t) {
  check_time(t);
  if (k.form == KernelSpec::Form::Parametric) return -k.delta * k.L * std::pow(1.0 + t, -k.delta - 1.0);
  const double h = 1e-4;
  if (t < h) return (kernel_eval(k, t + h) - kernel_eval(k, t)) / h;
  return (kernel_eval(k, t + h) - kernel_eval(k, t - h)) / (2.0 * h);
}

double kernel_rescaled_derivative(const KernelSpec& k, double n, double s) {
  return n * kernel_derivative(k, n * s) / kernel_eval(k, n);
}

double kernel_antiderivative(const KernelSpec& k, double t) {
  check_time(t);
  if (k.form == KernelSpec::Form::Parametric) {
    if (k.delta == 0.0) return k.L * t;
    if (std::abs(k.delta - 1.0) < 1e-15) return k.L * std::log1p(t);
    return k.L * std::expm1((1.0 - k.delta) * std::log1p(t)) / (1.0 - k.delta);
  }
  const double T = k.grid.back();
  CompensatedSum acc;
  const double tt = std::min(t, T);
  const std::size_t last = tt >= T ? k.grid.size() - 1 : segment(k, tt);
  for (std::size_t i = 0; i < last; ++i) acc.add(hermite_integral(k, i, 1.0));
  if (tt < T) acc.add(hermite_integral(k, last, (tt - k.grid[last]) / (k.grid[last + 1] - k.grid[last])));
  if (t > T) {
    const double a = k.chi_m + 1.0;
    const double mT = k.values.back();
    acc.add(std::abs(a) < 1e-15 ? mT * T * std::log(t / T) : mT * T * (std::pow(t / T, a) - 1.0) / a);
  }
  return acc.value();
}

double kernel_sup(const KernelSpec& k, double t) {
  check_time(t);
  if (k.form == KernelSpec::Form::Parametric) return k.delta >= 0.0 ? k.L : kernel_eval(k, t);
  double m = std::max(kernel_eval(k, 0.0), kernel_eval(k, t));
  for (std::size_t i = 0; i < k.grid.size() && k.grid[i] <= t; ++i) m = std::max(m, k.values[i]);
  return m;
}

}  // namespace rangelab
