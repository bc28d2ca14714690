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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rangelab/regvar.hpp"
#include "rangelab/stats.hpp"
#include "rangelab/walks.hpp"
#include "rangelab/youngint.hpp"

namespace rangelab {

/// Declarative experiment; t_grid holds fractions of n.
struct ExperimentConfig {
  std::string name = "experiment";
  WalkSpec walk;
  std::size_t n = 1024;
  std::size_t replicas = 1;
  std::vector<double> t_grid{1.0};
  std::optional<Regime> regime;
  std::optional<KernelSpec> kernel;
  int depth = 0;  // 0 selects default_depth(n)
  std::uint64_t master_seed = 1;
  std::string output_dir = ".";
  std::string profile = "full";
  /// Any of R, Rcal, I, J, gamma, E, Ecal.
  std::vector<std::string> functionals{"R", "Rcal"};
  std::size_t pilot_replicas = 500;

  void validate() const;
  /// Output directory after the RANGELAB_OUTPUT_DIR override.
  std::string resolved_output_dir() const;
  std::string output_path() const;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);
ExperimentConfig load_config(const std::string& path);

struct ReplicaResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::map<std::string, std::vector<double>> values;  // one entry per t_grid point
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

void to_json(nlohmann::json& j, const ReplicaResult& r);
void from_json(const nlohmann::json& j, ReplicaResult& r);

/// Seed of replica i.
std::uint64_t replica_seed(const ExperimentConfig& cfg, std::size_t index);

/// Runs one replica; failures are caught and stored in `error`.
ReplicaResult run_replica(const ExperimentConfig& cfg, std::size_t index);

/// Runs all replicas in parallel and streams them, in index order, to
/// output_path() as JSON lines after a header line holding the config. A
/// file whose header matches is resumed from its last complete successful
/// prefix. `on_result` sees every result in index order.
std::vector<ReplicaResult> run_experiment(const ExperimentConfig& cfg,
                                          const std::function<void(const ReplicaResult&)>& on_result = {});

/// Reads results back from a replica file.
std::vector<ReplicaResult> read_results(const std::string& path, ExperimentConfig* cfg = nullptr);

/// Variance at t = 1 of a SUP-regime rescaled ensemble with a jackknife CI.
Interval estimate_sigma2(const std::vector<HolderPath>& paths, const ScaleSuite& suite);

/// Largest relative error of Cov(path(s), path(t)) against sigma2 * min(s, t)
/// over the given times.
double sigma2_covariance_error(const std::vector<HolderPath>& paths, double sigma2, const std::vector<double>& times);

StatReport ks_test(const std::string& name, const std::vector<double>& x, const std::function<double(double)>& cdf,
                   double p_threshold);
StatReport ks_test(const std::string& name, const std::vector<double>& a, const std::vector<double>& b,
                   double p_threshold);
/// KS against a normal with fitted moments (Lilliefors).
StatReport normality_test(const std::string& name, const std::vector<double>& x, double p_threshold);

/// Smallest K with mean(I^(2p)) <= (p!)^2 K mean(I)^(2p).
double moment_envelope_constant(const std::vector<double>& intersections, int p);

/// Young-integral oracles: telescoping, polynomial and Beta closed forms,
/// integration by parts and time inversion.
StatReport young_selftest();

/// Runs the acceptance criteria of a profile ("fast" or "full").
std::vector<StatReport> acceptance_suite(const std::string& profile,
                                         const std::function<void(const StatReport&)>& on_report = {});

}  // namespace rangelab
