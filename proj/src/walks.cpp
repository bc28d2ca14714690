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

#include "rangelab/walks.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>

namespace rangelab {

std::string to_string(Law law) {
  switch (law) {
    case Law::Srw: return "SRW";
    case Law::LazySrw: return "LAZY_SRW";
    case Law::DiscretePareto: return "DISCRETE_PARETO";
    case Law::ProductPareto: return "PRODUCT_PARETO";
    case Law::Tabulated: return "TABULATED";
  }
  return "?";
}

Law law_from_string(const std::string& name) {
  if (name == "SRW") return Law::Srw;
  if (name == "LAZY_SRW") return Law::LazySrw;
  if (name == "DISCRETE_PARETO") return Law::DiscretePareto;
  if (name == "PRODUCT_PARETO") return Law::ProductPareto;
  if (name == "TABULATED") return Law::Tabulated;
  throw ConfigError("unknown increment law '" + name + "'");
}

WalkSpec WalkSpec::srw(int d) {
  WalkSpec s;
  s.d = d;
  s.beta = 2.0;
  s.law = Law::Srw;
  s.validate();
  return s;
}

WalkSpec WalkSpec::lazy_srw(int d, double hold) {
  WalkSpec s;
  s.d = d;
  s.beta = 2.0;
  s.law = Law::LazySrw;
  s.hold = hold;
  s.validate();
  return s;
}

namespace {

// Scale of the symmetric stable limit of sums of iid variables with
// P(|Y| > x) ~ A x^(-beta): E exp(i t S) = exp(-(sigma |t|)^beta).
double stable_scale(double tail_constant, double beta) {
  double c;
  if (std::abs(beta - 1.0) < 1e-12) {
    c = tail_constant * kPi / 2.0;
  } else {
    c = tail_constant * std::tgamma(1.0 - beta) * std::cos(kPi * beta / 2.0);
  }
  return std::pow(c, 1.0 / beta);
}

}  // namespace

WalkSpec WalkSpec::discrete_pareto(double beta) {
  WalkSpec s;
  s.d = 1;
  s.beta = beta;
  s.law = Law::DiscretePareto;
  s.validate();
  ParetoMagnitude mag(beta);
  s.sigma_hat = stable_scale(mag.tail_constant(), beta);
  return s;
}

WalkSpec WalkSpec::product_pareto(int d, double beta) {
  WalkSpec s;
  s.d = d;
  s.beta = beta;
  s.law = Law::ProductPareto;
  s.validate();
  ParetoMagnitude mag(beta);
  s.sigma_hat = stable_scale(mag.tail_constant(), beta);
  return s;
}

WalkSpec WalkSpec::tabulated(int d, double beta, std::vector<Atom> atoms) {
  WalkSpec s;
  s.d = d;
  s.beta = beta;
  s.law = Law::Tabulated;
  s.atoms = std::move(atoms);
  s.validate();
  return s;
}

void WalkSpec::validate() const {
  if (d < 1 || d > kMaxDim) throw DomainError("dimension must be in [1, 6]");
  if (!(beta > 0.0 && beta <= 2.0)) throw DomainError("stability index must lie in (0, 2]");
  switch (law) {
    case Law::Srw:
    case Law::LazySrw:
      if (beta != 2.0) throw DomainError("nearest-neighbour walks are attracted to beta = 2");
      if (law == Law::LazySrw && !(hold > 0.0 && hold < 1.0)) {
        throw DomainError("lazy hold probability must be in (0, 1)");
      }
      break;
    case Law::DiscretePareto:
      if (d != 1) throw DomainError("DISCRETE_PARETO is one-dimensional; use PRODUCT_PARETO");
      if (!(beta < 2.0)) throw DomainError("DISCRETE_PARETO needs beta < 2");
      break;
    case Law::ProductPareto:
      if (d < 2) throw DomainError("PRODUCT_PARETO needs d >= 2");
      if (!(beta < 2.0)) throw DomainError("PRODUCT_PARETO needs beta < 2");
      break;
    case Law::Tabulated: {
      if (atoms.empty()) throw DomainError("tabulated law has no atoms");
      CompensatedSum total;
      for (const auto& a : atoms) {
        if (a.point.size() != static_cast<std::size_t>(d)) throw DomainError("atom dimension mismatch");
        if (!(a.mass >= 0.0)) throw DomainError("negative atom mass");
        total.add(a.mass);
      }
      if (std::abs(total.value() - 1.0) > 1e-12) throw DomainError("atom masses must sum to 1");
      break;
    }
  }
}

std::uint64_t WalkSpec::digest() const {
  nlohmann::json j = *this;
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

void to_json(nlohmann::json& j, const WalkSpec& s) {
  j = nlohmann::json{{"d", s.d},
                     {"beta", s.beta},
                     {"law", to_string(s.law)},
                     {"hold", s.hold},
                     {"sigma_hat", s.sigma_hat},
                     {"seed_scheme", s.seed_scheme}};
  if (s.law == Law::Tabulated) {
    auto arr = nlohmann::json::array();
    for (const auto& a : s.atoms) arr.push_back({{"point", a.point}, {"mass", a.mass}});
    j["atoms"] = arr;
  }
}

void from_json(const nlohmann::json& j, WalkSpec& s) {
  try {
    s = WalkSpec{};
    s.d = j.at("d").get<int>();
    s.beta = j.at("beta").get<double>();
    s.law = law_from_string(j.at("law").get<std::string>());
    s.hold = j.value("hold", 0.5);
    if (j.contains("seed_scheme")) s.seed_scheme = j.at("seed_scheme").get<std::string>();
    if (j.contains("atoms")) {
      for (const auto& a : j.at("atoms")) {
        s.atoms.push_back(Atom{a.at("point").get<std::vector<std::int64_t>>(), a.at("mass").get<double>()});
      }
    }
    s.validate();
    if (j.contains("sigma_hat")) {
      s.sigma_hat = j.at("sigma_hat").get<double>();
    } else if (s.law == Law::DiscretePareto || s.law == Law::ProductPareto) {
      s.sigma_hat = stable_scale(ParetoMagnitude(s.beta).tail_constant(), s.beta);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("walk spec: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

namespace {

double power_mass(double k, double beta) { return std::pow(k, -1.0 - beta); }

// Exact integral of x^(-1-beta) over [k - 1/2, k + 1/2], stable for large k.
double cell_integral(double k, double beta) {
  const double h = 0.5 / k;
  const double a = -beta * std::log1p(-h);
  const double b = -beta * std::log1p(h);
  return std::pow(k, -beta) * std::exp(b) * std::expm1(a - b) / beta;
}

// sum_{k=a}^{b} k^(-1-beta) by Euler-Maclaurin (a large).
double tail_sum(double a, double b, double beta) {
  if (b < a) return 0.0;
  auto f = [&](double k) { return std::pow(k, -1.0 - beta); };
  auto fp = [&](double k) { return -(1.0 + beta) * std::pow(k, -2.0 - beta); };
  auto f3 = [&](double k) { return -(1.0 + beta) * (2.0 + beta) * (3.0 + beta) * std::pow(k, -4.0 - beta); };
  const double integral = (std::pow(a, -beta) - std::pow(b, -beta)) / beta;
  return integral + 0.5 * (f(a) + f(b)) + (fp(b) - fp(a)) / 12.0 - (f3(b) - f3(a)) / 720.0;
}

}  // namespace

ParetoMagnitude::ParetoMagnitude(double beta) : beta_(beta) {
  if (!(beta > 0.0 && beta < 2.0)) throw DomainError("power-law index must be in (0, 2)");
  const double zeta = std::riemann_zeta(1.0 + beta);
  const double r = std::ceil(std::pow(kTailMass * beta * zeta, -1.0 / beta));
  if (!(r <= static_cast<double>(kMaxRadius))) {
    throw DomainError("power-law index too small: truncation radius for tail mass 1e-9 exceeds 2^40");
  }
  radius_ = static_cast<std::int64_t>(r);
  const std::int64_t table = std::min(radius_, kTableSize);
  cdf_.resize(static_cast<std::size_t>(table));
  CompensatedSum acc;
  for (std::int64_t k = 1; k <= table; ++k) {
    acc.add(power_mass(static_cast<double>(k), beta));
    cdf_[static_cast<std::size_t>(k - 1)] = acc.value();
  }
  table_mass_ = acc.value();
  const double rest = tail_sum(static_cast<double>(table + 1), static_cast<double>(radius_), beta);
  z_ = table_mass_ + rest;
  tail_ = (zeta - z_) / z_;
}

double ParetoMagnitude::pmf(std::int64_t k) const {
  if (k < 1 || k > radius_) return 0.0;
  return power_mass(static_cast<double>(k), beta_) / z_;
}

std::int64_t ParetoMagnitude::sample(Rng& rng) const {
  const double u = rng.uniform() * z_;
  if (u < table_mass_) {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<std::int64_t>(it - cdf_.begin()) + 1;
  }
  // Continuous envelope on [K0 + 1/2, radius + 1/2); pmf is convex so the
  // midpoint value never exceeds the cell integral.
  const double lo = static_cast<double>(cdf_.size()) + 0.5;
  const double hi = static_cast<double>(radius_) + 0.5;
  const double alo = std::pow(lo, -beta_);
  const double ahi = std::pow(hi, -beta_);
  while (true) {
    const double v = rng.uniform();
    const double x = std::pow(alo - v * (alo - ahi), -1.0 / beta_);
    double k = std::floor(x + 0.5);
    k = std::clamp(k, lo + 0.5, hi - 0.5);
    const double accept = power_mass(k, beta_) / cell_integral(k, beta_);
    if (rng.uniform() < accept) return static_cast<std::int64_t>(k);
  }
}

double ParetoMagnitude::cosine_series(double x, double tol) const {
  if (x == 0.0) return 1.0;
  const double s = std::abs(std::sin(x / 2.0));
  // Abel summation: |sum_{k>K} a_k cos(kx)| <= a_{K+1} / |sin(x/2)|.
  double kmax = static_cast<double>(radius_);
  if (s > 0.0) {
    const double need = std::pow(tol * z_ * s, -1.0 / (1.0 + beta_));
    kmax = std::min(kmax, std::ceil(need));
  }
  kmax = std::min(kmax, static_cast<double>(std::int64_t{1} << 24));
  const auto kend = static_cast<std::int64_t>(kmax);
  // cos(kx) by the Chebyshev recurrence, re-anchored every 1024 terms.
  CompensatedSum acc;
  const double c1 = std::cos(x);
  double prev = 1.0;
  double cur = c1;
  for (std::int64_t k = 1; k <= kend; ++k) {
    if ((k & 1023) == 0) cur = std::cos(static_cast<double>(k) * x), prev = std::cos(static_cast<double>(k - 1) * x);
    acc.add(power_mass(static_cast<double>(k), beta_) * cur);
    const double next = 2.0 * c1 * cur - prev;
    prev = cur;
    cur = next;
  }
  return acc.value() / z_;
}

// ---------------------------------------------------------------------------

IncrementSampler::IncrementSampler(const WalkSpec& spec) : spec_(spec), d_(spec.d) {
  spec_.validate();
  if (spec_.law == Law::DiscretePareto || spec_.law == Law::ProductPareto) {
    pareto_ = std::make_shared<const ParetoMagnitude>(spec_.beta);
  }
  if (spec_.law == Law::Tabulated) {
    CompensatedSum acc;
    for (const auto& a : spec_.atoms) {
      acc.add(a.mass);
      atom_cdf_.push_back(acc.value());
    }
  }
}

void IncrementSampler::step(Rng& rng, std::span<std::int64_t> x) const {
  switch (spec_.law) {
    case Law::Srw: {
      const auto v = rng.below(static_cast<std::uint64_t>(2 * d_));
      x[v >> 1] += (v & 1) ? 1 : -1;
      return;
    }
    case Law::LazySrw: {
      if (rng.uniform() < spec_.hold) return;
      const auto v = rng.below(static_cast<std::uint64_t>(2 * d_));
      x[v >> 1] += (v & 1) ? 1 : -1;
      return;
    }
    case Law::DiscretePareto:
    case Law::ProductPareto:
      for (int i = 0; i < d_; ++i) {
        const std::int64_t k = pareto_->sample(rng);
        x[i] += (rng() >> 63) ? k : -k;
      }
      return;
    case Law::Tabulated: {
      const double u = rng.uniform() * atom_cdf_.back();
      auto it = std::upper_bound(atom_cdf_.begin(), atom_cdf_.end(), u);
      if (it == atom_cdf_.end()) --it;
      const auto& p = spec_.atoms[static_cast<std::size_t>(it - atom_cdf_.begin())].point;
      for (int i = 0; i < d_; ++i) x[i] += p[i];
      return;
    }
  }
}

void IncrementSampler::draw(Rng& rng, std::span<std::int64_t> y) const {
  std::fill(y.begin(), y.end(), 0);
  step(rng, y);
}

std::vector<std::uint64_t> PathSample::keys() const {
  LatticePacker packer(spec.d);
  std::vector<std::uint64_t> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) out[k] = packer.pack(at(k));
  return out;
}

PathSample sample_path(const WalkSpec& spec, std::size_t n, std::uint64_t seed, std::size_t budget) {
  spec.validate();
  const std::size_t d = static_cast<std::size_t>(spec.d);
  if ((n + 1) * d > budget) {
    throw ResourceError("path of " + std::to_string(n) + " steps exceeds the stored-path budget; use for_each_position");
  }
  PathSample path;
  path.spec = spec;
  path.seed = seed;
  path.n = n;
  path.coords.resize((n + 1) * d);
  for_each_position(spec, n, seed, [&](std::size_t k, std::span<const std::int64_t> x) {
    std::copy(x.begin(), x.end(), path.coords.begin() + static_cast<std::ptrdiff_t>(k * d));
  });
  return path;
}

// ---------------------------------------------------------------------------

double char_fn_real(const WalkSpec& spec, std::span<const double> x) {
  switch (spec.law) {
    case Law::Srw:
    case Law::LazySrw: {
      double s = 0.0;
      for (int i = 0; i < spec.d; ++i) s += std::cos(x[i]);
      s /= spec.d;
      return spec.law == Law::Srw ? s : spec.hold + (1.0 - spec.hold) * s;
    }
    case Law::DiscretePareto:
    case Law::ProductPareto: {
      // Built once per call: cheap compared with the series itself.
      const ParetoMagnitude mag(spec.beta);
      double prod = 1.0;
      for (int i = 0; i < spec.d; ++i) prod *= mag.cosine_series(x[i]);
      return prod;
    }
    case Law::Tabulated:
      return char_fn(spec, x).real();
  }
  return 0.0;
}

std::complex<double> char_fn(const WalkSpec& spec, std::span<const double> x) {
  if (spec.law != Law::Tabulated) return {char_fn_real(spec, x), 0.0};
  std::complex<double> acc{0.0, 0.0};
  for (const auto& a : spec.atoms) {
    double phase = 0.0;
    for (int i = 0; i < spec.d; ++i) phase += x[i] * static_cast<double>(a.point[i]);
    acc += a.mass * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return acc;
}

// ---------------------------------------------------------------------------

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool in_lattice(const std::vector<std::vector<std::int64_t>>& hnf, std::vector<std::int64_t> v) {
  for (const auto& row : hnf) {
    std::size_t c = 0;
    while (c < row.size() && row[c] == 0) ++c;
    if (c == row.size()) continue;
    if (v[c] % row[c] != 0) return false;
    const std::int64_t q = v[c] / row[c];
    for (std::size_t k = 0; k < v.size(); ++k) v[k] -= q * row[k];
  }
  return std::all_of(v.begin(), v.end(), [](std::int64_t e) { return e == 0; });
}

}  // namespace

std::vector<std::vector<std::int64_t>> lattice_basis(const std::vector<std::vector<std::int64_t>>& vectors, int d) {
  std::vector<std::vector<std::int64_t>> a;
  for (const auto& v : vectors) {
    if (std::any_of(v.begin(), v.end(), [](std::int64_t e) { return e != 0; })) a.push_back(v);
  }
  std::size_t row = 0;
  for (int col = 0; col < d && row < a.size(); ++col) {
    const auto c = static_cast<std::size_t>(col);
    while (true) {
      std::size_t best = a.size();
      for (std::size_t r = row; r < a.size(); ++r) {
        if (a[r][c] != 0 && (best == a.size() || std::abs(a[r][c]) < std::abs(a[best][c]))) best = r;
      }
      if (best == a.size()) break;
      std::swap(a[row], a[best]);
      bool done = true;
      for (std::size_t r = row + 1; r < a.size(); ++r) {
        const std::int64_t q = a[r][c] / a[row][c];
        for (std::size_t k = 0; k < a[r].size(); ++k) a[r][k] -= q * a[row][k];
        if (a[r][c] != 0) done = false;
      }
      if (done) break;
    }
    if (a[row][c] == 0) continue;
    if (a[row][c] < 0) {
      for (auto& e : a[row]) e = -e;
    }
    for (std::size_t r = 0; r < row; ++r) {
      const std::int64_t q = floor_div(a[r][c], a[row][c]);
      for (std::size_t k = 0; k < a[r].size(); ++k) a[r][k] -= q * a[row][k];
    }
    ++row;
  }
  a.resize(row);
  return a;
}

SupportReport support_check(const WalkSpec& spec) {
  spec.validate();
  SupportReport rep;
  const int d = spec.d;
  auto unit_basis = [d] {
    std::vector<std::vector<std::int64_t>> b(static_cast<std::size_t>(d), std::vector<std::int64_t>(static_cast<std::size_t>(d), 0));
    for (int i = 0; i < d; ++i) b[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
    return b;
  };
  switch (spec.law) {
    case Law::Srw:
      rep = {true, false, 2, true, unit_basis(),
             "periodic with period 2: returns only at even times; use LAZY_SRW (add mass at 0) for aperiodicity"};
      return rep;
    case Law::LazySrw:
      rep = {true, true, 1, true, unit_basis(), "holding mass at 0 makes the walk aperiodic"};
      return rep;
    case Law::DiscretePareto:
    case Law::ProductPareto:
      rep = {true, true, 1, true, unit_basis(), "support contains 1 and 2 on every axis"};
      return rep;
    case Law::Tabulated:
      break;
  }
  std::vector<std::vector<std::int64_t>> support;
  for (const auto& a : spec.atoms) {
    if (a.mass > 0.0) support.push_back(a.point);
  }
  rep.sublattice = lattice_basis(support, d);
  std::int64_t index = 0;
  if (rep.sublattice.size() == static_cast<std::size_t>(d)) {
    index = 1;
    for (std::size_t i = 0; i < rep.sublattice.size(); ++i) {
      const auto& row = rep.sublattice[i];
      const auto c = static_cast<std::size_t>(std::find_if(row.begin(), row.end(), [](std::int64_t e) { return e != 0; }) - row.begin());
      index *= row[c];
    }
  }
  rep.generating = index == 1;

  // Return at time k needs k * x0 in the group generated by differences.
  std::vector<std::vector<std::int64_t>> diffs;
  for (const auto& p : support) {
    std::vector<std::int64_t> v(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) v[k] = p[k] - support.front()[k];
    diffs.push_back(std::move(v));
  }
  const auto hdiff = lattice_basis(diffs, d);
  rep.period = 0;
  for (std::int64_t k = 1; k <= 4096; ++k) {
    std::vector<std::int64_t> v(support.front().size());
    for (std::size_t c = 0; c < v.size(); ++c) v[c] = k * support.front()[c];
    if (in_lattice(hdiff, v)) {
      rep.period = k;
      break;
    }
  }
  bool one_sided = false;
  if (d == 1) {
    const bool all_pos = std::all_of(support.begin(), support.end(), [](const auto& p) { return p[0] > 0; });
    const bool all_neg = std::all_of(support.begin(), support.end(), [](const auto& p) { return p[0] < 0; });
    one_sided = all_pos || all_neg;
  }
  if (one_sided) {
    rep.period = 0;
    rep.note = "support lies in an open half-line: the walk never returns";
  }
  rep.aperiodic = rep.period == 1;
  if (!rep.generating) {
    rep.note += rep.note.empty() ? "" : "; ";
    rep.note += "support generates a proper sublattice (index " + std::to_string(index) + ")";
  } else if (rep.period > 1) {
    rep.note += rep.note.empty() ? "" : "; ";
    rep.note += "periodic with period " + std::to_string(rep.period) + "; add mass at 0 to lazify";
  }
  return rep;
}

void export_path_binary(const PathSample& path, const std::string& file) {
  static_assert(std::endian::native == std::endian::little, "binary export assumes a little-endian host");
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + file);
  out.write(reinterpret_cast<const char*>(path.coords.data()),
            static_cast<std::streamsize>(path.coords.size() * sizeof(std::int64_t)));
}

}  // namespace rangelab
