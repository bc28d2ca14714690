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

#include "rangelab/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numeric>

#include "rangelab/common.hpp"

namespace rangelab {

void to_json(nlohmann::json& j, const StatReport& r) {
  j = nlohmann::json{{"name", r.name},   {"statistic", r.statistic}, {"p_value", r.p_value}, {"threshold", r.threshold},
                     {"pass", r.pass},   {"n1", r.n1},               {"n2", r.n2},           {"detail", r.detail}};
}

double kolmogorov_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

using Matrix = std::vector<double>;

void mat_mul(const Matrix& a, const Matrix& b, Matrix& c, int m) {
  std::fill(c.begin(), c.end(), 0.0);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) {
      const double aik = a[static_cast<std::size_t>(i * m + k)];
      if (aik == 0.0) continue;
      for (int j = 0; j < m; ++j) c[static_cast<std::size_t>(i * m + j)] += aik * b[static_cast<std::size_t>(k * m + j)];
    }
  }
}

// P(D_n < d) by Marsaglia, Tsang & Wang (2003), exponent-tracked powers.
double mtw_cdf(int n, double d) {
  const int k = static_cast<int>(n * d) + 1;
  const int m = 2 * k - 1;
  const double h = k - n * d;
  Matrix H(static_cast<std::size_t>(m * m), 0.0);
  auto at = [&](Matrix& M, int i, int j) -> double& { return M[static_cast<std::size_t>(i * m + j)]; };
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) at(H, i, j) = (i - j + 1 >= 0) ? 1.0 : 0.0;
  }
  for (int i = 0; i < m; ++i) {
    at(H, i, 0) -= std::pow(h, i + 1);
    at(H, m - 1, i) -= std::pow(h, m - i);
  }
  at(H, m - 1, 0) += (2 * h - 1 > 0 ? std::pow(2 * h - 1, m) : 0.0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i - j + 1 > 0) {
        for (int g = 1; g <= i - j + 1; ++g) at(H, i, j) /= g;
      }
    }
  }
  // Q = H^n with a running power-of-two exponent
  Matrix Q(static_cast<std::size_t>(m * m), 0.0), T(static_cast<std::size_t>(m * m));
  for (int i = 0; i < m; ++i) at(Q, i, i) = 1.0;
  int eQ = 0;
  Matrix P = H;
  int eP = 0;
  int e = n;
  while (e > 0) {
    if (e & 1) {
      mat_mul(Q, P, T, m);
      Q.swap(T);
      eQ += eP;
      const double c = at(Q, k - 1, k - 1);
      if (c > 1e140) {
        for (auto& v : Q) v *= 1e-140;
        eQ += 140;
      }
    }
    e >>= 1;
    if (e) {
      mat_mul(P, P, T, m);
      P.swap(T);
      eP *= 2;
      const double c = at(P, k - 1, k - 1);
      if (c > 1e140) {
        for (auto& v : P) v *= 1e-140;
        eP += 140;
      }
    }
  }
  double s = at(Q, k - 1, k - 1);
  for (int i = 1; i <= n; ++i) {
    s = s * i / n;
    if (s < 1e-140) {
      s *= 1e140;
      eQ -= 140;
    }
  }
  return s * std::pow(10.0, eQ);
}

}  // namespace

KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf) {
  if (x.size() < 50) throw DomainError("KS test needs at least 50 samples");
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double D = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double F = cdf(x[i]);
    D = std::max({D, (i + 1) / n - F, F - i / n});
  }
  KsResult r;
  r.statistic = D;
  const int N = static_cast<int>(x.size());
  const int k = static_cast<int>(N * D) + 1;
  if (N <= 5000 && 2 * k - 1 <= 301) {
    r.p_value = std::clamp(1.0 - mtw_cdf(N, D), 0.0, 1.0);
    r.exact = true;
  } else {
    const double sn = std::sqrt(n);
    r.p_value = kolmogorov_tail((sn + 0.12 + 0.11 / sn) * D);
  }
  return r;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.size() < 50 || b.size() < 50) throw DomainError("KS test needs at least 50 samples per side");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  double D = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    D = std::max(D, std::abs(i / na - j / nb));
  }
  KsResult r;
  r.statistic = D;
  if (na * nb <= 4e6) {
    std::size_t m = a.size(), n = b.size();
    if (m > n) std::swap(m, n);
    const double md = static_cast<double>(m), nd = static_cast<double>(n);
    const double q = (0.5 + std::floor(D * md * nd - 1e-7)) / (md * nd);
    std::vector<double> u(n + 1);
    for (std::size_t jj = 0; jj <= n; ++jj) u[jj] = (jj / nd > q) ? 0.0 : 1.0;
    for (std::size_t ii = 1; ii <= m; ++ii) {
      const double w = static_cast<double>(ii) / static_cast<double>(ii + n);
      u[0] = (ii / md > q) ? 0.0 : w * u[0];
      for (std::size_t jj = 1; jj <= n; ++jj) {
        u[jj] = (std::abs(ii / md - jj / nd) > q) ? 0.0 : w * u[jj] + u[jj - 1];
      }
    }
    r.p_value = std::clamp(1.0 - u[n], 0.0, 1.0);
    r.exact = true;
  } else {
    const double en = std::sqrt(na * nb / (na + nb));
    r.p_value = kolmogorov_tail((en + 0.12 + 0.11 / en) * D);
  }
  return r;
}

KsResult lilliefors(std::vector<double> x) {
  if (x.size() < 50) throw DomainError("Lilliefors test needs at least 50 samples");
  const double mu = mean(x);
  const double sd = std::sqrt(variance(x));
  if (!(sd > 0.0)) throw DomainError("Lilliefors test on a constant sample");
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double K = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double p = 0.5 * std::erfc(-(x[i] - mu) / (sd * std::sqrt(2.0)));
    K = std::max({K, (i + 1) / n - p, p - i / n});
  }
  double Kd = K, nd = n;
  if (n > 100) {
    Kd = K * std::pow(n / 100.0, 0.49);
    nd = 100.0;
  }
  double p = std::exp(-7.01256 * Kd * Kd * (nd + 2.78019) + 2.99587 * Kd * std::sqrt(nd + 2.78019) - 0.122119 +
                      0.974598 / std::sqrt(nd) + 1.67997 / nd);
  if (p > 0.1) {
    const double KK = (std::sqrt(n) - 0.01 + 0.85 / std::sqrt(n)) * K;
    if (KK <= 0.302) {
      p = 1.0;
    } else if (KK <= 0.5) {
      p = 2.76773 - 19.828315 * KK + 80.709644 * KK * KK - 138.55152 * std::pow(KK, 3) + 81.218052 * std::pow(KK, 4);
    } else if (KK <= 0.9) {
      p = -4.901232 + 40.662806 * KK - 97.490286 * KK * KK + 94.029866 * std::pow(KK, 3) - 32.355711 * std::pow(KK, 4);
    } else if (KK <= 1.31) {
      p = 6.198765 - 19.558097 * KK + 23.186922 * KK * KK - 12.234627 * std::pow(KK, 3) + 2.423045 * std::pow(KK, 4);
    } else {
      p = 0.0;
    }
  }
  return {K, std::clamp(p, 0.0, 1.0), false};
}

KsResult chi_square_gof(const std::vector<double>& observed, const std::vector<double>& expected) {
  if (observed.size() != expected.size() || observed.size() < 2) throw DomainError("chi-square: bad bins");
  const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = total * expected[i];
    if (!(e > 0.0)) throw DomainError("chi-square: empty expected bin");
    stat += (observed[i] - e) * (observed[i] - e) / e;
  }
  boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return {stat, boost::math::cdf(boost::math::complement(dist, stat)), false};
}

double mean(const std::vector<double>& x) {
  if (x.empty()) throw DomainError("mean of empty sample");
  CompensatedSum s;
  for (double v : x) s.add(v);
  return s.value() / static_cast<double>(x.size());
}

double variance(const std::vector<double>& x) {
  if (x.size() < 2) throw DomainError("variance needs two samples");
  const double m = mean(x);
  CompensatedSum s;
  for (double v : x) s.add((v - m) * (v - m));
  return s.value() / static_cast<double>(x.size() - 1);
}

double covariance(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("covariance: bad samples");
  const double mx = mean(x), my = mean(y);
  CompensatedSum s;
  for (std::size_t i = 0; i < x.size(); ++i) s.add((x[i] - mx) * (y[i] - my));
  return s.value() / static_cast<double>(x.size() - 1);
}

double skewness(const std::vector<double>& x) {
  if (x.size() < 3) throw DomainError("skewness needs three samples");
  const double m = mean(x);
  CompensatedSum m2, m3;
  for (double v : x) {
    const double d = v - m;
    m2.add(d * d);
    m3.add(d * d * d);
  }
  const double n = static_cast<double>(x.size());
  const double s2 = m2.value() / n;
  return (m3.value() / n) / std::pow(s2, 1.5);
}

Interval bootstrap(const std::vector<double>& x, const std::function<double(const std::vector<double>&)>& stat,
                   std::size_t resamples, std::uint64_t seed, double level) {
  Interval out;
  out.estimate = stat(x);
  std::vector<double> reps;
  reps.reserve(resamples);
  std::vector<double> buf(x.size());
  for (std::size_t r = 0; r < resamples; ++r) {
    Rng rng(derive_seed(seed, r));
    for (auto& v : buf) v = x[rng.below(x.size())];
    reps.push_back(stat(buf));
  }
  std::sort(reps.begin(), reps.end());
  const double a = (1.0 - level) / 2.0;
  auto q = [&](double p) {
    const double pos = p * static_cast<double>(reps.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    const double w = pos - static_cast<double>(i);
    return i + 1 < reps.size() ? reps[i] * (1 - w) + reps[i + 1] * w : reps.back();
  };
  out.lo = q(a);
  out.hi = q(1.0 - a);
  out.se = std::sqrt(variance(reps));
  return out;
}

Interval jackknife_variance(const std::vector<double>& x, double level) {
  const std::size_t n = x.size();
  if (n < 3) throw DomainError("jackknife needs three samples");
  const double full = variance(x);
  double s = 0.0, s2 = 0.0;
  for (double v : x) {
    s += v;
    s2 += v * v;
  }
  std::vector<double> loo(n);
  const double nm = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double si = s - x[i], s2i = s2 - x[i] * x[i];
    loo[i] = (s2i - si * si / nm) / (nm - 1.0);
  }
  const double lm = mean(loo);
  double acc = 0.0;
  for (double v : loo) acc += (v - lm) * (v - lm);
  const double se = std::sqrt(acc * nm / static_cast<double>(n));
  boost::math::normal z;
  const double q = boost::math::quantile(z, 0.5 + level / 2.0);
  return {full, full - q * se, full + q * se, se};
}

std::pair<double, double> ols(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

HolderEstimate holder_exponent(const std::vector<HolderPath>& paths, std::size_t windows, std::size_t resamples,
                               std::uint64_t seed) {
  if (paths.size() < 100) throw DomainError("Hoelder estimate needs at least 100 paths");
  const std::size_t n = paths.front().intervals();
  if (n + 1 < 32) throw DomainError("grid too coarse for a Hoelder estimate (< 32 points)");
  for (const auto& p : paths) {
    if (p.intervals() != n) throw DomainError("paths must share a grid");
  }
  const std::size_t spacing = n / windows;
  HolderEstimate est;
  for (std::size_t lag = 1; lag <= spacing; lag *= 2) est.lags.push_back(lag);
  if (est.lags.size() < 3) throw DomainError("grid too coarse for the requested window count");
  const double dt = paths.front().dt();
  // per-path log max increments, one row per path
  std::vector<std::vector<double>> logs(paths.size(), std::vector<double>(est.lags.size()));
  for (std::size_t p = 0; p < paths.size(); ++p) {
    const auto& v = paths[p].values();
    for (std::size_t l = 0; l < est.lags.size(); ++l) {
      double mx = 0.0;
      for (std::size_t w = 0; w < windows; ++w) {
        const std::size_t i = w * spacing;
        mx = std::max(mx, std::abs(v[i + est.lags[l]] - v[i]));
      }
      logs[p][l] = std::log(std::max(mx, 1e-300));
    }
  }
  std::vector<double> lx;
  for (auto lag : est.lags) lx.push_back(std::log(dt * static_cast<double>(lag)));
  auto slope_of = [&](const std::vector<std::size_t>& idx) {
    std::vector<double> ly(est.lags.size(), 0.0);
    for (auto p : idx) {
      for (std::size_t l = 0; l < ly.size(); ++l) ly[l] += logs[p][l];
    }
    for (auto& v : ly) v /= static_cast<double>(idx.size());
    return std::make_pair(ols(lx, ly).first, ly);
  };
  std::vector<std::size_t> all(paths.size());
  std::iota(all.begin(), all.end(), 0);
  auto [alpha, ly] = slope_of(all);
  est.alpha = alpha;
  est.mean_log_increment = ly;
  std::vector<double> reps;
  std::vector<std::size_t> idx(paths.size());
  for (std::size_t r = 0; r < resamples; ++r) {
    Rng rng(derive_seed(seed, r));
    for (auto& i : idx) i = rng.below(paths.size());
    reps.push_back(slope_of(idx).first);
  }
  std::sort(reps.begin(), reps.end());
  if (!reps.empty()) {
    est.lo = reps[static_cast<std::size_t>(0.025 * static_cast<double>(reps.size() - 1))];
    est.hi = reps[static_cast<std::size_t>(0.975 * static_cast<double>(reps.size() - 1))];
  } else {
    est.lo = est.hi = alpha;
  }
  return est;
}

}  // namespace rangelab
