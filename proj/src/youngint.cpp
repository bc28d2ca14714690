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

#include "rangelab/youngint.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

namespace rangelab {

HolderPath::HolderPath(double t0, double T, std::vector<double> values, double alpha)
    : t0_(t0), T_(T), values_(std::move(values)), alpha_(alpha) {
  if (!(T > t0)) throw DomainError("path interval must have positive length");
  if (values_.size() < 2) throw DomainError("path needs at least two grid values");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("Hoelder exponent must be in (0, 1]");
}

HolderPath HolderPath::from_function(std::function<double(double)> f, double t0, double T, std::size_t intervals,
                                     double alpha) {
  if (intervals < 1) throw DomainError("need at least one interval");
  std::vector<double> v(intervals + 1);
  const double h = (T - t0) / static_cast<double>(intervals);
  for (std::size_t i = 0; i <= intervals; ++i) v[i] = f(t0 + h * static_cast<double>(i));
  HolderPath p(t0, T, std::move(v), alpha);
  p.f_ = std::move(f);
  return p;
}

double HolderPath::at(double t) const {
  const double slack = 1e-12 * std::max(1.0, std::abs(T_) + std::abs(t0_));
  if (t < t0_ - slack || t > T_ + slack) throw DomainError("path evaluated outside its interval");
  t = std::clamp(t, t0_, T_);
  if (f_) return f_(t);
  const std::size_t n = intervals();
  const double u = (t - t0_) / dt();
  const auto i = std::min(static_cast<std::size_t>(u), n - 1);
  const double w = u - static_cast<double>(i);
  return values_[i] + w * (values_[i + 1] - values_[i]);
}

double HolderPath::holder_constant() const {
  const std::size_t n = intervals();
  const double h = dt();
  double c = 0.0;
  auto update = [&](std::size_t lag) {
    const double denom = std::pow(h * static_cast<double>(lag), alpha_);
    for (std::size_t i = 0; i + lag <= n; ++i) c = std::max(c, std::abs(values_[i + lag] - values_[i]) / denom);
  };
  if (n <= 4096) {
    for (std::size_t lag = 1; lag <= n; ++lag) update(lag);
  } else {
    for (std::size_t lag = 1; lag <= n; lag *= 2) update(lag);
  }
  return c;
}

HolderPath HolderPath::refine() const {
  std::vector<double> v(2 * intervals() + 1);
  for (std::size_t i = 0; i < values_.size(); ++i) v[2 * i] = values_[i];
  for (std::size_t i = 0; i + 1 < values_.size(); ++i) v[2 * i + 1] = 0.5 * (values_[i] + values_[i + 1]);
  HolderPath p(t0_, T_, std::move(v), alpha_);
  p.f_ = f_;
  return p;
}

HolderPath HolderPath::reflected() const {
  std::vector<double> v(values_.rbegin(), values_.rend());
  HolderPath p(t0_, T_, std::move(v), alpha_);
  if (f_) {
    const double a = t0_, b = T_;
    p.f_ = [f = f_, a, b](double t) { return f(a + b - t); };
  }
  return p;
}

// ---------------------------------------------------------------------------

namespace {

double riemann_sum(const HolderPath& f, const HolderPath& g, std::size_t n, RiemannPoint point) {
  const double a = f.t0();
  const double h = (f.T() - a) / static_cast<double>(n);
  CompensatedSum acc;
  double g_prev = g.at(a);
  double f_prev = f.at(a);
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = i == n ? f.T() : a + h * static_cast<double>(i);
    const double gi = g.at(t);
    const double fi = f.at(t);
    acc.add((point == RiemannPoint::Left ? f_prev : fi) * (gi - g_prev));
    g_prev = gi;
    f_prev = fi;
  }
  return acc.value();
}

}  // namespace

YoungResult young_integral(const HolderPath& f, const HolderPath& g, const YoungOptions& opt) {
  if (std::abs(f.t0() - g.t0()) > 1e-12 || std::abs(f.T() - g.T()) > 1e-12) {
    throw DomainError("young_integral: paths live on different intervals");
  }
  if (!(f.alpha() + g.alpha() > 1.0)) throw DomainError("young_integral: alpha + beta <= 1, sums need not converge");

  // Piecewise-linear paths on nested grids: refined sums converge to the
  // cellwise average of f times the increment of g.
  if (!f.analytic() && !g.analytic()) {
    const std::size_t nf = f.intervals(), ng = g.intervals();
    const std::size_t N = std::max(nf, ng);
    if (N % std::min(nf, ng) == 0) {
      CompensatedSum acc;
      double mag = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const HolderPath& fine = nf == N ? f : g;
        const double ta = fine.time(i), tb = fine.time(i + 1);
        const double fa = nf == N ? f.values()[i] : f.at(ta), fb = nf == N ? f.values()[i + 1] : f.at(tb);
        const double ga = ng == N ? g.values()[i] : g.at(ta), gb = ng == N ? g.values()[i + 1] : g.at(tb);
        const double term = 0.5 * (fa + fb) * (gb - ga);
        acc.add(term);
        mag += std::abs(term);
      }
      YoungResult res;
      res.value = acc.value();
      res.error = 8.0 * std::numeric_limits<double>::epsilon() * (mag + std::abs(res.value));
      res.intervals = N;
      res.converged = true;
      return res;
    }
  }

  std::vector<std::size_t> levels;
  if (f.analytic() && g.analytic()) {
    for (std::size_t n = opt.min_intervals; n <= opt.max_intervals; n *= 2) levels.push_back(n);
  } else {
    std::size_t native = 0;
    if (!f.analytic()) native = std::max(native, f.intervals());
    if (!g.analytic()) native = std::max(native, g.intervals());
    for (std::size_t n = native; n >= 1; n = (n + 1) / 2) {
      levels.push_back(n);
      if (n == 1) break;
    }
    std::reverse(levels.begin(), levels.end());
  }

  YoungResult res;
  double prev = riemann_sum(f, g, levels.front(), opt.point);
  res.value = prev;
  res.intervals = levels.front();
  double delta = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < levels.size(); ++k) {
    const double cur = riemann_sum(f, g, levels[k], opt.point);
    delta = std::abs(cur - prev);
    res.value = cur;
    res.intervals = levels[k];
    prev = cur;
    if (levels[k] >= opt.min_intervals && delta <= opt.tol * std::max(1.0, std::abs(cur))) {
      res.converged = true;
      break;
    }
  }
  if (!res.converged) res.stalled = true;
  res.error = std::isfinite(delta) ? 2.0 * delta : std::numeric_limits<double>::infinity();
  return res;
}

Residual ibp_residual(const HolderPath& f, const HolderPath& g, const YoungOptions& opt) {
  const auto a = young_integral(f, g, opt);
  const auto b = young_integral(g, f, opt);
  const double boundary = f.at(f.T()) * g.at(g.T()) - f.at(f.t0()) * g.at(g.t0());
  return {std::abs(a.value + b.value - boundary), a.error + b.error};
}

Residual time_inversion_check(const HolderPath& f, const HolderPath& g, const YoungOptions& opt) {
  const auto a = young_integral(f, g, opt);
  const auto b = young_integral(f.reflected(), g.reflected(), opt);
  return {std::abs(a.value + b.value), a.error + b.error};
}

// ---------------------------------------------------------------------------

namespace {

// int_{sa}^{sb} s^(q-1) ds for q > 0 or sa > 0.
double power_integral(double sa, double sb, double q) {
  if (sb <= sa) return 0.0;
  if (sa == 0.0) return std::pow(sb, q) / q;
  return std::pow(sa, q) * std::expm1(q * std::log(sb / sa)) / q;
}

void check_singular(const HolderPath& g, double chi, double t) {
  if (!(chi > -g.alpha())) throw DomainError("singular kernel needs chi > -alpha");
  if (t < g.t0() || t > g.T() + 1e-12) throw DomainError("singular kernel: t outside the path interval");
}

}  // namespace

SingularResult singular_kernel_integral(const HolderPath& g, double chi, double t) {
  check_singular(g, chi, t);
  t = std::min(t, g.T());
  const double t0 = g.t0();
  const double gt = g.at(t);
  const double g0 = g.at(t0);
  SingularResult res;
  if (chi == 0.0 || t == t0) {
    res.value = gt - g0;
    return res;
  }
  const double span = t - t0;
  if (g.analytic()) {
    const double p = g.alpha() + chi;
    auto integrand = [&](double u) {
      const double s = std::pow(u, 1.0 / p);
      const double d = gt - g.at(std::max(t0, t - s));
      return d * std::exp((chi - 1.0) * std::log(s) + (1.0 / p - 1.0) * std::log(u)) / p;
    };
    double err = 0.0;
    const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, 0.0, std::pow(span, p), 20, 1e-13, &err);
    res.value = std::pow(span, chi) * (gt - g0) - chi * integral;
    res.error = std::abs(chi) * err;
    res.converged = err <= 1e-9 * std::max(1.0, std::abs(integral));
    return res;
  }
  // piecewise linear: D(s) = g(t) - g(t-s) is linear in s on every cell
  const double h = g.dt();
  const auto& v = g.values();
  const std::size_t n = g.intervals();
  auto cell = std::min(static_cast<std::size_t>((t - t0) / h), n - 1);
  CompensatedSum acc;
  bool first = true;
  double upper = t;  // current cell spans times [t_i, upper]
  while (true) {
    const double ti = t0 + h * static_cast<double>(cell);
    const double m = (v[cell + 1] - v[cell]) / h;
    const double A = first ? 0.0 : gt - v[cell] - m * (t - ti);
    const double B = m;
    const double sa = t - upper;
    const double sb = t - ti;
    if (sb > sa) {
      acc.add(A * power_integral(sa, sb, chi) + B * power_integral(sa, sb, chi + 1.0));
      first = false;
    }
    upper = ti;
    if (cell == 0) break;
    --cell;
  }
  res.value = std::pow(span, chi) * (gt - g0) - chi * acc.value();
  res.error = 1e-14 * std::max(1.0, std::abs(res.value)) * static_cast<double>(n);
  return res;
}

double cutoff_integral(const HolderPath& g, double chi, double t, double eps) {
  check_singular(g, chi, t);
  if (!(eps > 0.0)) throw DomainError("cutoff needs eps > 0");
  const double t0 = g.t0();
  const double end = t - eps;
  if (end <= t0) return 0.0;
  // Stieltjes integral of (t-s)^chi against the piecewise-linear path.
  const HolderPath& path = g;
  const std::size_t n = g.analytic() ? (std::size_t{1} << 20) : g.intervals();
  const double h = (g.T() - t0) / static_cast<double>(n);
  CompensatedSum acc;
  const double q = chi + 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = t0 + h * static_cast<double>(i);
    if (a >= end) break;
    const double b = std::min(a + h, end);
    const double gb = path.at(std::min(a + h, g.T()));
    const double ga = path.at(a);
    const double slope = (gb - ga) / h;
    acc.add(slope * (std::pow(t - a, q) - std::pow(t - b, q)) / q);
  }
  return acc.value();
}

}  // namespace rangelab
