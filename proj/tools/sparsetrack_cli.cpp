// Copyright 2026 the sparsetrack authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command-line front end:
//   simulate         run a Monte-Carlo experiment from a JSON config
//   reproduce-fig1   run one of the four preset tracking regimes
//   analyze-matrix   exact restricted-isometry / orthogonality constants
//   check-conditions evaluate a stability certificate from JSON inputs

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sparsetrack/serialization.hpp"

namespace st = sparsetrack;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

st::ExperimentConfig fig1_config(const std::string& regime, int trials) {
  st::ExperimentConfig cfg;
  cfg.model.m = 200;
  cfg.model.s0 = 20;
  cfg.model.sa = 2;
  cfg.n = 59;
  cfg.c = 0.1266;
  cfg.horizon = 200;
  cfg.trials = trials;
  cfg.seed = 20260826;
  cfg.algorithms = {"cs", "modcs", "modcs-aldl", "lscs"};
  if (regime == "r1d3") {
    cfg.model.r = 1.0;
    cfg.model.d = 3;
  } else if (regime == "r075d4") {
    cfg.model.r = 0.75;
    cfg.model.d = 4;
  } else if (regime == "r05d4") {
    cfg.model.r = 0.5;
    cfg.model.d = 4;
  } else if (regime == "r04d5") {
    cfg.model.r = 0.4;
    cfg.model.d = 5;
  } else {
    throw CLI::ValidationError("--regime",
                               "expected r1d3, r075d4, r05d4 or r04d5");
  }
  return cfg;
}

void export_all(const st::AggregateRecord& agg, const std::string& dir,
                const std::string& stem) {
  std::filesystem::create_directories(dir);
  st::export_results(agg, "csv", dir + "/" + stem + ".csv");
  st::export_results(agg, "json", dir + "/" + stem + ".json");
  st::export_results(agg, "svg", dir + "/" + stem + ".svg");
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stoi(tok));
  return out;
}

std::vector<std::pair<int, int>> parse_pair_list(const std::string& s) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos)
      throw CLI::ValidationError("--theta-pairs", "expected S:S' pairs");
    out.push_back({std::stoi(tok.substr(0, colon)),
                   std::stoi(tok.substr(colon + 1))});
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"recursive sparse-sequence reconstruction toolkit"};
  app.require_subcommand(1);

  std::uint64_t global_seed = 0;
  int threads = 0;
  auto* seed_opt =
      app.add_option("--seed", global_seed, "override the master seed");
  app.add_option("--threads", threads, "worker threads for trials");

  // simulate
  auto* sim = app.add_subcommand("simulate", "run an experiment config");
  std::string cfg_path, out_dir;
  sim->add_option("--config", cfg_path, "experiment config JSON")->required();
  sim->add_option("--out", out_dir, "output directory");

  // reproduce-fig1
  auto* fig = app.add_subcommand("reproduce-fig1",
                                 "run a preset tracking-stability regime");
  std::string regime;
  int fig_trials = 50;
  fig->add_option("--regime", regime, "r1d3 | r075d4 | r05d4 | r04d5")
      ->required();
  fig->add_option("--trials", fig_trials, "number of Monte-Carlo trials");
  std::string fig_out = "fig1-out";
  fig->add_option("--out", fig_out, "output directory");

  // analyze-matrix
  auto* ana = app.add_subcommand(
      "analyze-matrix", "exact isometry constants by exhaustive enumeration");
  std::string matrix_path, delta_orders, theta_pairs, ana_out;
  ana->add_option("--matrix", matrix_path, "matrix CSV (header n,m)")
      ->required();
  ana->add_option("--delta-orders", delta_orders, "comma-separated orders");
  ana->add_option("--theta-pairs", theta_pairs, "comma-separated S:S' pairs");
  ana->add_option("--out", ana_out, "write JSON here instead of stdout");

  // check-conditions
  auto* chk = app.add_subcommand("check-conditions",
                                 "evaluate a stability certificate");
  std::string variant, params_path, constants_path, chk_out;
  chk->add_option("--variant", variant,
                  "T1-modcs | T2-aldl | C3-aldl-relaxed | GEN-aldl | T3-lscs")
      ->required();
  chk->add_option("--params", params_path, "theorem parameter JSON")
      ->required();
  chk->add_option("--constants", constants_path, "matrix constants JSON")
      ->required();
  chk->add_option("--out", chk_out, "write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sim) {
      st::ExperimentConfig cfg;
      try {
        cfg = st::experiment_config_from_json(st::load_json_file(cfg_path));
      } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
      }
      if (seed_opt->count() > 0) cfg.seed = global_seed;
      if (threads > 0) cfg.threads = threads;
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      if (cfg.out_dir.empty()) cfg.out_dir = ".";
      const st::AggregateRecord agg = st::run_monte_carlo(cfg);
      export_all(agg, cfg.out_dir, "results");
      std::cout << "wrote " << cfg.out_dir << "/results.{csv,json,svg}\n";
    } else if (*fig) {
      st::ExperimentConfig cfg = fig1_config(regime, fig_trials);
      if (seed_opt->count() > 0) cfg.seed = global_seed;
      if (threads > 0) cfg.threads = threads;
      const st::AggregateRecord agg = st::run_monte_carlo(cfg);
      export_all(agg, fig_out, regime);
      for (const auto& [name, s] : agg.mean)
        std::cout << name << ": final NMSE " << s.nmse.back()
                  << ", final-half miss slope "
                  << st::final_half_slope(s.misses) << "\n";
      std::cout << "wrote " << fig_out << "/" << regime << ".{csv,json,svg}\n";
    } else if (*ana) {
      st::Matrix a;
      try {
        a = st::load_matrix_csv(matrix_path);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
      }
      const st::MatrixConstants mc = st::compute_constants(
          a, parse_int_list(delta_orders), parse_pair_list(theta_pairs));
      const std::string body = st::to_json(mc).dump(2) + "\n";
      if (ana_out.empty())
        std::cout << body;
      else
        st::write_text_file(ana_out, body);
    } else if (*chk) {
      st::TheoremParams params;
      st::MatrixConstants mc;
      try {
        nlohmann::json pj = st::load_json_file(params_path);
        pj["variant"] = variant;
        params = st::theorem_params_from_json(pj);
        mc = st::matrix_constants_from_json(st::load_json_file(constants_path));
      } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
      }
      const st::ConditionReport rep = st::certify(params, mc);
      const std::string body = st::to_json(rep).dump(2) + "\n";
      if (chk_out.empty())
        std::cout << body;
      else
        st::write_text_file(chk_out, body);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
