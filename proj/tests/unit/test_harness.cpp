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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rangelab/harness.hpp"
#include "rangelab/parallel.hpp"
#include "rangelab/tolerances.hpp"

using namespace rangelab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("rangelab_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small(const fs::path& dir) {
  ExperimentConfig c;
  c.name = "small";
  c.walk = WalkSpec::lazy_srw(2);
  c.n = 512;
  c.replicas = 12;
  c.t_grid = {0.25, 0.5, 1.0};
  c.kernel = KernelSpec::parametric(1.0, 0.5);
  c.functionals = {"R", "Rcal", "I", "J", "E", "Ecal"};
  c.master_seed = 99;
  c.output_dir = dir.string();
  return c;
}

}  // namespace

TEST_CASE("config round trip and validation") {
  auto c = small(scratch("cfg"));
  c.regime = Regime::Mid;
  const nlohmann::json j = c;
  const auto back = j.get<ExperimentConfig>();
  CHECK(nlohmann::json(back) == j);
  auto bad = c;
  bad.t_grid = {1.5};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.functionals = {"nope"};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.regime = Regime::Sup;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_THROWS_AS(nlohmann::json::parse(R"({"n":"many"})").get<ExperimentConfig>(), ConfigError);
}

TEST_CASE("reruns are byte identical and thread independent") {
  const auto dir = scratch("rerun");
  auto c = small(dir);
  run_experiment(c);
  const auto first = slurp(c.output_path());
  fs::remove(c.output_path());
  setenv("RANGELAB_THREADS", "1", 1);
  const auto results = run_experiment(c);
  unsetenv("RANGELAB_THREADS");
  CHECK(slurp(c.output_path()) == first);
  REQUIRE(results.size() == 12);
  for (std::size_t i = 0; i < results.size(); ++i) {
    CHECK(results[i].ok());
    CHECK(results[i].index == i);
    CHECK(results[i].seed == derive_seed(99, i));
    CHECK(results[i].values.at("R").size() == 3);
  }
  // a single replica is the first replica of the larger run
  auto one = c;
  one.name = "one";
  one.replicas = 1;
  const auto r1 = run_experiment(one);
  CHECK(r1[0].values == results[0].values);
}

TEST_CASE("truncated runs resume") {
  const auto dir = scratch("resume");
  const auto c = small(dir);
  run_experiment(c);
  const auto full = slurp(c.output_path());
  // cut into the middle of the eighth record
  std::size_t pos = 0;
  for (int line = 0; line < 8; ++line) pos = full.find('\n', pos) + 1;
  {
    std::ofstream out(c.output_path(), std::ios::trunc);
    out << full.substr(0, pos + 20);
  }
  std::size_t seen = 0;
  run_experiment(c, [&](const ReplicaResult&) { ++seen; });
  CHECK(seen == 12);
  CHECK(slurp(c.output_path()) == full);
  ExperimentConfig read_cfg;
  CHECK(read_results(c.output_path(), &read_cfg).size() == 12);
  CHECK(read_cfg.name == c.name);
}

TEST_CASE("output directory override") {
  const auto dir = scratch("override");
  auto c = small(fs::temp_directory_path() / "rangelab_unused");
  setenv("RANGELAB_OUTPUT_DIR", dir.c_str(), 1);
  CHECK(c.resolved_output_dir() == dir.string());
  unsetenv("RANGELAB_OUTPUT_DIR");
  CHECK(c.resolved_output_dir() == c.output_dir);
}

TEST_CASE("profiles") {
  CHECK(tolerances::profile("full").statistical);
  CHECK_FALSE(tolerances::profile("fast").statistical);
  CHECK_THROWS_AS(tolerances::profile("nonsense"), ConfigError);
  CHECK_THROWS_AS(acceptance_suite("nonsense"), ConfigError);
}

TEST_CASE("parallel map keeps order and rethrows") {
  const auto v = parallel_map(100, [](std::size_t i) { return i * i; }, 4);
  for (std::size_t i = 0; i < 100; ++i) CHECK(v[i] == i * i);
  CHECK_THROWS_AS(parallel_map(10, [](std::size_t i) -> int {
    if (i == 7) throw DomainError("boom");
    return 0;
  }, 3),
                  DomainError);
}

TEST_CASE("moment envelope and sigma estimate") {
  const std::vector<double> ones(50, 1.0);
  CHECK(moment_envelope_constant(ones, 2) == doctest::Approx(0.25));
  std::vector<HolderPath> paths;
  for (int r = 0; r < 400; ++r) {
    Rng rng(derive_seed(5, r));
    std::vector<double> w(65, 0.0);
    for (int i = 1; i <= 64; ++i) w[i] = w[i - 1] + 1.5 * rng.normal() / 8.0;
    paths.emplace_back(0.0, 1.0, w, 0.5);
  }
  const auto suite = make_scale_suite(4, 2.0, WalkSpec::srw(4), 1024);
  const auto s2 = estimate_sigma2(paths, suite);
  CHECK(s2.lo < 2.25);
  CHECK(s2.hi > 2.25);
  CHECK(sigma2_covariance_error(paths, 2.25, {0.25, 0.5, 1.0}) < 0.2);
  CHECK(young_selftest().pass);
}
