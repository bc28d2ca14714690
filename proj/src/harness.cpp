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

#include "rangelab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "rangelab/energy.hpp"
#include "rangelab/parallel.hpp"
#include "rangelab/rangekit.hpp"
#include "rangelab/silt.hpp"
#include "rangelab/tolerances.hpp"

namespace rangelab {

namespace tolerances {

Profile profile(const std::string& name) {
  Profile p;
  p.name = name;
  if (name == "full") {
    p.statistical = true;
    return p;
  }
  if (name == "fast") {
    p.statistical = false;
    return p;
  }
  throw ConfigError("unknown tolerance profile: " + name);
}

}  // namespace tolerances

namespace {

const std::set<std::string> kFunctionals{"R", "Rcal", "I", "J", "gamma", "E", "Ecal"};

bool wants(const ExperimentConfig& cfg, const std::string& f) {
  return std::find(cfg.functionals.begin(), cfg.functionals.end(), f) != cfg.functionals.end();
}

}  // namespace

void ExperimentConfig::validate() const {
  walk.validate();
  if (replicas < 1) throw ConfigError("replicas must be >= 1");
  if (n < 1) throw ConfigError("horizon must be >= 1");
  if (t_grid.empty()) throw ConfigError("t_grid is empty");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0 && t_grid[i] <= 1.0)) throw ConfigError("t_grid must lie in [0, 1]");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw ConfigError("t_grid must be strictly increasing");
  }
  for (const auto& f : functionals) {
    if (!kFunctionals.count(f)) throw ConfigError("unknown functional: " + f);
  }
  if ((wants(*this, "E") || wants(*this, "Ecal")) && !kernel) throw ConfigError("energy functionals need a kernel");
  if (depth < 0) throw ConfigError("depth must be >= 0");
  if (regime && *regime != classify_regime(walk.d, walk.beta)) {
    throw ConfigError("declared regime does not match the walk");
  }
  if (wants(*this, "gamma") && pilot_replicas < 2) throw ConfigError("gamma needs a pilot ensemble");
  tolerances::profile(profile);
}

std::string ExperimentConfig::resolved_output_dir() const {
  if (const char* env = std::getenv("RANGELAB_OUTPUT_DIR")) {
    if (*env) return env;
  }
  return output_dir;
}

std::string ExperimentConfig::output_path() const {
  return (std::filesystem::path(resolved_output_dir()) / (name + ".jsonl")).string();
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = nlohmann::json{{"name", c.name},
                     {"walk", c.walk},
                     {"n", c.n},
                     {"replicas", c.replicas},
                     {"t_grid", c.t_grid},
                     {"depth", c.depth},
                     {"master_seed", c.master_seed},
                     {"output_dir", c.output_dir},
                     {"profile", c.profile},
                     {"functionals", c.functionals},
                     {"pilot_replicas", c.pilot_replicas}};
  j["regime"] = c.regime ? nlohmann::json(to_string(*c.regime)) : nlohmann::json(nullptr);
  j["kernel"] = c.kernel ? nlohmann::json(*c.kernel) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  try {
    c = ExperimentConfig{};
    if (j.contains("name")) j.at("name").get_to(c.name);
    j.at("walk").get_to(c.walk);
    j.at("n").get_to(c.n);
    if (j.contains("replicas")) j.at("replicas").get_to(c.replicas);
    if (j.contains("t_grid")) j.at("t_grid").get_to(c.t_grid);
    if (j.contains("depth")) j.at("depth").get_to(c.depth);
    if (j.contains("master_seed")) j.at("master_seed").get_to(c.master_seed);
    if (j.contains("output_dir")) j.at("output_dir").get_to(c.output_dir);
    if (j.contains("profile")) j.at("profile").get_to(c.profile);
    if (j.contains("functionals")) j.at("functionals").get_to(c.functionals);
    if (j.contains("pilot_replicas")) j.at("pilot_replicas").get_to(c.pilot_replicas);
    if (j.contains("regime") && !j.at("regime").is_null()) c.regime = regime_from_string(j.at("regime").get<std::string>());
    if (j.contains("kernel") && !j.at("kernel").is_null()) c.kernel = j.at("kernel").get<KernelSpec>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad experiment config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  auto cfg = j.get<ExperimentConfig>();
  cfg.validate();
  return cfg;
}

void to_json(nlohmann::json& j, const ReplicaResult& r) {
  j = nlohmann::json{{"index", r.index}, {"seed", r.seed}, {"values", r.values}};
  if (!r.error.empty()) j["error"] = r.error;
}

void from_json(const nlohmann::json& j, ReplicaResult& r) {
  j.at("index").get_to(r.index);
  j.at("seed").get_to(r.seed);
  j.at("values").get_to(r.values);
  r.error = j.contains("error") ? j.at("error").get<std::string>() : std::string();
}

std::uint64_t replica_seed(const ExperimentConfig& cfg, std::size_t index) {
  return derive_seed(cfg.master_seed, index);
}

namespace {

struct SharedState {
  std::optional<ScaleSuite> suite;
  std::vector<CenteringTable> centering;  // one per t_grid point, empty when t = 0
  int depth = 1;
};

SharedState prepare(const ExperimentConfig& cfg) {
  SharedState st;
  st.depth = cfg.depth > 0 ? cfg.depth : default_depth(cfg.n);
  if (wants(cfg, "gamma")) {
    st.suite = make_scale_suite(cfg.walk.d, cfg.walk.beta, cfg.walk, cfg.n, {cfg.n});
    const std::uint64_t pilot_seed = derive_seed(cfg.master_seed, ~std::uint64_t{0});
    for (double t : cfg.t_grid) {
      if (t == 0.0) {
        st.centering.emplace_back();
        continue;
      }
      st.centering.push_back(
          build_centering_table(cfg.walk, *st.suite, cfg.n, t, st.depth, cfg.pilot_replicas, pilot_seed));
    }
  }
  return st;
}

ReplicaResult replica(const ExperimentConfig& cfg, const SharedState& st, std::size_t index) {
  ReplicaResult res;
  res.index = index;
  res.seed = replica_seed(cfg, index);
  try {
    const bool need_path = wants(cfg, "I") || wants(cfg, "J") || wants(cfg, "gamma");
    std::optional<PathSample> path;
    if (need_path) path = sample_path(cfg.walk, cfg.n, res.seed);
    RangeProcess rp = path ? range_process(*path) : range_process(cfg.walk, cfg.n, res.seed);
    const double nn = static_cast<double>(cfg.n);
    std::optional<PathSample> other;
    if (wants(cfg, "I") || wants(cfg, "J")) other = sample_path(cfg.walk, cfg.n, derive_seed(res.seed, 1));
    for (std::size_t c = 0; c < cfg.t_grid.size(); ++c) {
      const double t = cfg.t_grid[c];
      const auto k = static_cast<std::size_t>(std::floor(t * nn));
      if (wants(cfg, "R")) res.values["R"].push_back(rp.R[k]);
      if (wants(cfg, "Rcal")) res.values["Rcal"].push_back(interpolate(rp, t * nn));
      if (wants(cfg, "E")) res.values["E"].push_back(energy_discrete(rp, *cfg.kernel, t * nn));
      if (wants(cfg, "Ecal")) res.values["Ecal"].push_back(energy_interpolated(rp, *cfg.kernel, t * nn));
      if (wants(cfg, "I")) res.values["I"].push_back(static_cast<double>(intersect_count(*path, *other, k, k)));
      if (wants(cfg, "J")) res.values["J"].push_back(static_cast<double>(pair_count(*path, *other, k, k)));
      if (wants(cfg, "gamma")) {
        res.values["gamma"].push_back(
            t == 0.0 ? 0.0 : silt_estimate(*path, *st.suite, t, st.depth, st.centering[c]).gamma_hat);
      }
    }
  } catch (const std::exception& e) {
    res.values.clear();
    res.error = e.what();
  }
  return res;
}

}  // namespace

ReplicaResult run_replica(const ExperimentConfig& cfg, std::size_t index) {
  cfg.validate();
  return replica(cfg, prepare(cfg), index);
}

std::vector<ReplicaResult> read_results(const std::string& path, ExperimentConfig* cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open results " + path);
  std::vector<ReplicaResult> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      break;  // truncated tail of an interrupted run
    }
    if (header) {
      header = false;
      if (cfg && j.contains("config")) *cfg = j.at("config").get<ExperimentConfig>();
      continue;
    }
    out.push_back(j.get<ReplicaResult>());
  }
  return out;
}

std::vector<ReplicaResult> run_experiment(const ExperimentConfig& cfg,
                                          const std::function<void(const ReplicaResult&)>& on_result) {
  cfg.validate();
  const auto path = cfg.output_path();
  std::filesystem::create_directories(cfg.resolved_output_dir());
  const nlohmann::json header{{"config", cfg}};
  const std::string header_line = header.dump();

  std::vector<ReplicaResult> done;
  {
    std::ifstream in(path);
    std::string first;
    if (in && std::getline(in, first) && first == header_line) {
      for (auto& r : read_results(path)) {
        if (!r.ok() || r.index != done.size() || done.size() >= cfg.replicas) break;
        done.push_back(std::move(r));
      }
    }
  }

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ResourceError("cannot write " + path);
  out << header_line << '\n';
  for (const auto& r : done) {
    out << nlohmann::json(r).dump() << '\n';
    if (on_result) on_result(r);
  }
  out.flush();

  const auto st = prepare(cfg);
  const std::size_t batch = std::max<std::size_t>(1, 4 * static_cast<std::size_t>(worker_count()));
  std::vector<ReplicaResult> results = std::move(done);
  for (std::size_t start = results.size(); start < cfg.replicas; start += batch) {
    const std::size_t count = std::min(batch, cfg.replicas - start);
    auto chunk = parallel_map(count, [&](std::size_t i) { return replica(cfg, st, start + i); });
    for (auto& r : chunk) {
      out << nlohmann::json(r).dump() << '\n';
      if (on_result) on_result(r);
      results.push_back(std::move(r));
    }
    out.flush();
  }
  return results;
}

Interval estimate_sigma2(const std::vector<HolderPath>& paths, const ScaleSuite& suite) {
  if (suite.regime != Regime::Sup) throw DomainError("sigma^2 is defined for the SUP regime only");
  std::vector<double> x;
  x.reserve(paths.size());
  for (const auto& p : paths) x.push_back(p.at(std::min(1.0, p.T())));
  return jackknife_variance(x);
}

double sigma2_covariance_error(const std::vector<HolderPath>& paths, double sigma2, const std::vector<double>& times) {
  double worst = 0.0;
  for (double s : times) {
    for (double t : times) {
      std::vector<double> a, b;
      for (const auto& p : paths) {
        a.push_back(p.at(s));
        b.push_back(p.at(t));
      }
      const double expect = sigma2 * std::min(s, t);
      worst = std::max(worst, std::abs(covariance(a, b) - expect) / expect);
    }
  }
  return worst;
}

StatReport ks_test(const std::string& name, const std::vector<double>& x, const std::function<double(double)>& cdf,
                   double p_threshold) {
  const auto ks = ks_one_sample(x, cdf);
  return {name, ks.statistic, ks.p_value, p_threshold, ks.p_value > p_threshold, x.size(), 0,
          ks.exact ? "exact" : "asymptotic"};
}

StatReport ks_test(const std::string& name, const std::vector<double>& a, const std::vector<double>& b,
                   double p_threshold) {
  const auto ks = ks_two_sample(a, b);
  return {name, ks.statistic, ks.p_value, p_threshold, ks.p_value > p_threshold, a.size(), b.size(),
          ks.exact ? "exact" : "asymptotic"};
}

StatReport normality_test(const std::string& name, const std::vector<double>& x, double p_threshold) {
  const auto ks = lilliefors(x);
  return {name, ks.statistic, ks.p_value, p_threshold, ks.p_value > p_threshold, x.size(), 0, "lilliefors"};
}

double moment_envelope_constant(const std::vector<double>& intersections, int p) {
  if (p < 1) throw DomainError("moment order must be >= 1");
  const double m1 = mean(intersections);
  if (!(m1 > 0.0)) throw DomainError("mean intersection is zero");
  double mp = 0.0;
  for (double v : intersections) mp += std::pow(v, 2.0 * p);
  mp /= static_cast<double>(intersections.size());
  const double fact = std::tgamma(p + 1.0);
  return mp / (fact * fact * std::pow(m1, 2.0 * p));
}

}  // namespace rangelab
