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

// rangelab command line: simulation, estimators and the acceptance suite.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rangelab/energy.hpp"
#include "rangelab/harness.hpp"
#include "rangelab/parallel.hpp"
#include "rangelab/rangekit.hpp"
#include "rangelab/regvar.hpp"
#include "rangelab/silt.hpp"
#include "rangelab/stats.hpp"
#include "rangelab/tolerances.hpp"

using namespace rangelab;
using nlohmann::json;

namespace {

struct WalkArgs {
  std::string law = "SRW";
  int d = 1;
  double beta = 2.0;
  double hold = 0.5;
  std::string file;

  void add(CLI::App* app) {
    app->add_option("--walk", law, "SRW, LAZY_SRW, DISCRETE_PARETO or PRODUCT_PARETO");
    app->add_option("--dim,-d", d, "lattice dimension");
    app->add_option("--beta", beta, "stable index for Pareto laws");
    app->add_option("--hold", hold, "holding probability of LAZY_SRW");
    app->add_option("--walk-file", file, "WalkSpec JSON (overrides the flags)");
  }

  WalkSpec spec() const {
    if (!file.empty()) {
      std::ifstream in(file);
      if (!in) throw ConfigError("cannot open " + file);
      json j;
      in >> j;
      auto s = j.get<WalkSpec>();
      s.validate();
      return s;
    }
    switch (law_from_string(law)) {
      case Law::Srw:
        return WalkSpec::srw(d);
      case Law::LazySrw:
        return WalkSpec::lazy_srw(d, hold);
      case Law::DiscretePareto:
        return WalkSpec::discrete_pareto(beta);
      case Law::ProductPareto:
        return WalkSpec::product_pareto(d, beta);
      default:
        throw ConfigError("tabulated walks need --walk-file");
    }
  }
};

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.rfind("uniform:", 0) == 0) {
    const int k = std::stoi(text.substr(8));
    for (int i = 0; i <= k; ++i) out.push_back(static_cast<double>(i) / k);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

KernelSpec parse_kernel(const std::string& pair, const std::string& file) {
  if (!file.empty()) return KernelSpec::from_file(file);
  const auto comma = pair.find(',');
  if (comma == std::string::npos) throw ConfigError("--kernel expects L,delta");
  return KernelSpec::parametric(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
}

std::string out_dir(const std::string& flag) {
  if (const char* env = std::getenv("RANGELAB_OUTPUT_DIR")) {
    if (*env) return env;
  }
  return flag;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  const auto path = (std::filesystem::path(dir) / name).string();
  std::ofstream out(path);
  if (!out) throw ResourceError("cannot write " + path);
  std::cerr << "writing " << path << "\n";
  return out;
}

void print_report(const StatReport& r) {
  std::printf("[%s] %-34s stat=%-12.6g p=%-10.4g %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.statistic,
              r.p_value, r.detail.c_str());
  std::fflush(stdout);
}

std::vector<std::vector<double>> range_grid_ensemble(const WalkSpec& spec, std::size_t n, std::size_t replicas,
                                                     std::uint64_t seed, const std::vector<double>& grid) {
  return parallel_map(replicas, [&](std::size_t r) {
    const auto rp = range_process(spec, n, derive_seed(seed, r));
    std::vector<double> times;
    for (double t : grid) times.push_back(t * static_cast<double>(n));
    return range_on_grid(rp, times);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rangelab: range, intersection and energy functionals of random walks"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "run an experiment config and stream replica results");
  std::string config_path;
  WalkArgs sim_walk;
  ExperimentConfig sim_cfg;
  std::string sim_grid = "1", sim_functionals = "R,Rcal", sim_kernel, sim_kernel_file;
  sim->add_option("--config", config_path, "experiment JSON");
  sim_walk.add(sim);
  sim->add_option("--name", sim_cfg.name);
  sim->add_option("-n,--steps", sim_cfg.n);
  sim->add_option("--replicas", sim_cfg.replicas);
  sim->add_option("--seed", sim_cfg.master_seed);
  sim->add_option("--t-grid", sim_grid, "comma list of fractions of n, or uniform:K");
  sim->add_option("--functionals", sim_functionals, "comma list of R,Rcal,I,J,gamma,E,Ecal");
  sim->add_option("--depth", sim_cfg.depth);
  sim->add_option("--kernel", sim_kernel, "L,delta");
  sim->add_option("--kernel-file", sim_kernel_file);
  sim->add_option("--out", sim_cfg.output_dir);

  // fluctuations
  auto* fl = app.add_subcommand("fluctuations", "rescaled centred range ensemble and its regime statistics");
  WalkArgs fl_walk;
  std::size_t fl_n = 1 << 14, fl_reps = 500;
  std::uint64_t fl_seed = 1;
  std::string fl_out = ".";
  fl_walk.add(fl);
  fl->add_option("-n,--steps", fl_n);
  fl->add_option("--replicas", fl_reps);
  fl->add_option("--seed", fl_seed);
  fl->add_option("--out", fl_out);

  // silt
  auto* si = app.add_subcommand("silt", "dyadic self-intersection estimator ensemble");
  WalkArgs si_walk;
  std::size_t si_n = 1 << 14, si_reps = 500, si_pilot = 500;
  double si_t = 1.0;
  int si_depth = 0;
  std::uint64_t si_seed = 1;
  std::string si_out = ".", si_centering;
  si_walk.add(si);
  si->add_option("-n,--steps", si_n);
  si->add_option("--t", si_t);
  si->add_option("--depth", si_depth, "0 selects the default");
  si->add_option("--replicas", si_reps);
  si->add_option("--pilot", si_pilot);
  si->add_option("--seed", si_seed);
  si->add_option("--centering", si_centering, "reuse a centering table JSON");
  si->add_option("--out", si_out);

  // energy
  auto* en = app.add_subcommand("energy", "energy functional ensemble");
  WalkArgs en_walk;
  std::size_t en_n = 1 << 14, en_reps = 200;
  std::uint64_t en_seed = 1;
  std::string en_kernel = "1,0", en_kernel_file, en_grid = "uniform:8", en_out = ".";
  en_walk.add(en);
  en->add_option("-n,--steps", en_n);
  en->add_option("--replicas", en_reps);
  en->add_option("--seed", en_seed);
  en->add_option("--kernel", en_kernel, "L,delta for m(t) = L (1+t)^-delta");
  en->add_option("--kernel-file", en_kernel_file, "tabulated kernel JSON");
  en->add_option("--t-grid", en_grid);
  en->add_option("--out", en_out);

  // holder
  auto* ho = app.add_subcommand("holder", "Hoelder exponent of an ensemble of paths");
  std::string ho_input, ho_functional = "Rcal";
  std::size_t ho_windows = 4;
  ho->add_option("--input", ho_input, "replica JSONL from simulate")->required();
  ho->add_option("--functional", ho_functional);
  ho->add_option("--windows", ho_windows);

  auto* ys = app.add_subcommand("young-selftest", "Young integral oracles");

  auto* ve = app.add_subcommand("verify", "acceptance suite");
  std::string profile = "fast";
  ve->add_option("--profile", profile, "fast or full");

  auto* rep = app.add_subcommand("report", "CSV summary and gnuplot data of a replica file");
  std::string rep_input, rep_out = ".";
  rep->add_option("--input", rep_input)->required();
  rep->add_option("--out", rep_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      ExperimentConfig cfg;
      if (!config_path.empty()) {
        cfg = load_config(config_path);
      } else {
        cfg = sim_cfg;
        cfg.walk = sim_walk.spec();
        cfg.t_grid = parse_grid(sim_grid);
        cfg.functionals.clear();
        std::stringstream ss(sim_functionals);
        std::string f;
        while (std::getline(ss, f, ',')) cfg.functionals.push_back(f);
        if (!sim_kernel.empty() || !sim_kernel_file.empty()) cfg.kernel = parse_kernel(sim_kernel, sim_kernel_file);
      }
      std::size_t failed = 0;
      run_experiment(cfg, [&](const ReplicaResult& r) {
        if (!r.ok()) {
          ++failed;
          std::cerr << "replica " << r.index << " failed: " << r.error << "\n";
        }
      });
      std::cerr << "wrote " << cfg.output_path() << "\n";
      return failed ? 1 : 0;
    }

    if (*fl) {
      const auto spec = fl_walk.spec();
      const auto suite = make_scale_suite(spec.d, spec.beta, spec, fl_n, {fl_n});
      const auto grid = parse_grid("uniform:32");
      const auto rows = range_grid_ensemble(spec, fl_n, fl_reps, fl_seed, grid);
      const auto paths = rescale_center(rows, suite, fl_n, grid);
      std::vector<double> last;
      for (const auto& p : paths) last.push_back(p.values().back());
      json summary{{"walk", spec}, {"n", fl_n}, {"replicas", fl_reps}, {"regime", to_string(suite.regime)},
                   {"S", suite.S(fl_n)}, {"mean", mean(last)}, {"variance", variance(last)},
                   {"skewness", skewness(last)}};
      if (fl_reps >= 50) summary["normality"] = normality_test("Lilliefors", last, tolerances::kKsP);
      if (suite.regime == Regime::Sup && fl_reps >= 3) {
        const auto s2 = estimate_sigma2(paths, suite);
        summary["sigma2"] = {{"estimate", s2.estimate}, {"lo", s2.lo}, {"hi", s2.hi}};
      }
      if (fl_reps >= 100) {
        const auto h = holder_exponent(paths);
        summary["holder"] = {{"alpha", h.alpha}, {"lo", h.lo}, {"hi", h.hi}};
      }
      auto out = open_out(out_dir(fl_out), "fluctuations.jsonl");
      for (std::size_t r = 0; r < paths.size(); ++r) {
        out << json{{"index", r}, {"t_grid", grid}, {"values", paths[r].values()}}.dump() << '\n';
      }
      std::cout << summary.dump(2) << "\n";
      return 0;
    }

    if (*si) {
      const auto spec = si_walk.spec();
      const auto suite = make_scale_suite(spec.d, spec.beta, spec, si_n, {si_n});
      const int depth = si_depth > 0 ? si_depth : default_depth(si_n);
      CenteringTable centering;
      if (!si_centering.empty()) {
        std::ifstream in(si_centering);
        if (!in) throw ConfigError("cannot open " + si_centering);
        json j;
        in >> j;
        centering = j.get<CenteringTable>();
      } else {
        centering = build_centering_table(spec, suite, si_n, si_t, depth, si_pilot, derive_seed(si_seed, 1u << 31));
        open_out(out_dir(si_out), "centering.json") << json(centering).dump(2) << '\n';
      }
      const auto blocks = dyadic_blocks(si_t, depth, si_n);
      if (const auto empty = empty_block_count(blocks)) std::cerr << empty << " dyadic blocks are empty at this depth\n";
      const auto horizon = static_cast<std::size_t>(std::ceil(si_t * static_cast<double>(si_n)));
      const auto samples = parallel_map(si_reps, [&](std::size_t r) {
        return silt_estimate(sample_path(spec, horizon, derive_seed(si_seed, r)), suite, si_t, depth, centering);
      });
      auto out = open_out(out_dir(si_out), "silt.jsonl");
      std::vector<double> g;
      for (std::size_t r = 0; r < samples.size(); ++r) {
        out << json{{"index", r}, {"sample", samples[r]}}.dump() << '\n';
        g.push_back(samples[r].gamma_hat);
      }
      json summary{{"n", si_n}, {"t", si_t}, {"depth", depth}, {"replicas", si_reps}, {"mean", mean(g)}};
      if (g.size() >= 2) summary["variance"] = variance(g);
      std::cout << summary.dump(2) << "\n";
      return 0;
    }

    if (*en) {
      const auto spec = en_walk.spec();
      const auto kernel = parse_kernel(en_kernel, en_kernel_file);
      const auto grid = parse_grid(en_grid);
      const auto suite = make_scale_suite(spec.d, spec.beta, spec, en_n, {en_n});
      const auto samples = parallel_map(en_reps, [&](std::size_t r) {
        const auto rp = range_process(spec, en_n, derive_seed(en_seed, r));
        std::vector<double> times;
        for (double t : grid) times.push_back(t * static_cast<double>(en_n));
        return energy_sample(rp, kernel, times);
      });
      auto out = open_out(out_dir(en_out), "energy.jsonl");
      std::vector<std::vector<double>> rows;
      for (std::size_t r = 0; r < samples.size(); ++r) {
        out << json{{"index", r}, {"sample", samples[r]}}.dump() << '\n';
        rows.push_back(samples[r].Ecal);
      }
      json summary{{"kernel", kernel}, {"regime", to_string(suite.regime)}, {"n", en_n}, {"replicas", en_reps}};
      if (chi_admissible(suite, kernel.chi_m) && (suite.regime == Regime::Sub || en_reps >= 100)) {
        const auto paths = rescale_energy_grid(rows, suite, kernel, en_n, grid);
        std::vector<double> last;
        for (const auto& p : paths) last.push_back(p.values().back());
        summary["rescaled_mean"] = mean(last);
        if (last.size() >= 2) summary["rescaled_variance"] = variance(last);
      } else {
        summary["note"] = "rescaling skipped: kernel index not admissible or too few replicas";
      }
      std::cout << summary.dump(2) << "\n";
      return 0;
    }

    if (*ho) {
      ExperimentConfig cfg;
      const auto results = read_results(ho_input, &cfg);
      std::vector<std::vector<double>> rows;
      for (const auto& r : results) {
        if (r.ok() && r.values.count(ho_functional)) rows.push_back(r.values.at(ho_functional));
      }
      if (rows.empty()) throw ConfigError("no values for functional " + ho_functional);
      const auto means = column_means(rows);
      std::vector<HolderPath> paths;
      for (auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) row[c] -= means[c];
        paths.emplace_back(cfg.t_grid.front(), cfg.t_grid.back(), row, 0.5);
      }
      const auto h = holder_exponent(paths, ho_windows);
      std::cout << json{{"alpha", h.alpha}, {"lo", h.lo}, {"hi", h.hi}, {"lags", h.lags}}.dump(2) << "\n";
      return 0;
    }

    if (*ys) {
      const auto r = young_selftest();
      print_report(r);
      return r.pass ? 0 : 1;
    }

    if (*ve) {
      std::printf("profile %s (tolerance profile v%d)\n", profile.c_str(), tolerances::kProfileVersion);
      const auto reports = acceptance_suite(profile, print_report);
      bool ok = true;
      for (const auto& r : reports) ok = ok && r.pass;
      return ok ? 0 : 1;
    }

    if (*rep) {
      ExperimentConfig cfg;
      const auto results = read_results(rep_input, &cfg);
      std::map<std::string, std::vector<std::vector<double>>> by_functional;
      for (const auto& r : results) {
        if (!r.ok()) continue;
        for (const auto& [k, v] : r.values) by_functional[k].push_back(v);
      }
      const auto dir = out_dir(rep_out);
      auto csv = open_out(dir, cfg.name + "_summary.csv");
      csv << "functional,t,replicas,mean,variance,min,max\n";
      for (const auto& [name, rows] : by_functional) {
        auto dat = open_out(dir, cfg.name + "_" + name + ".dat");
        dat << "# t mean sd\n";
        for (std::size_t c = 0; c < cfg.t_grid.size(); ++c) {
          std::vector<double> col;
          for (const auto& row : rows) col.push_back(row[c]);
          const double m = mean(col);
          const double v = col.size() > 1 ? variance(col) : 0.0;
          csv << name << ',' << cfg.t_grid[c] << ',' << col.size() << ',' << m << ',' << v << ','
              << *std::min_element(col.begin(), col.end()) << ',' << *std::max_element(col.begin(), col.end()) << '\n';
          dat << cfg.t_grid[c] << ' ' << m << ' ' << std::sqrt(v) << '\n';
        }
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
