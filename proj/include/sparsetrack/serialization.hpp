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
// JSON / CSV / SVG serialization for configs, matrix constants, condition
// reports, and Monte-Carlo results.

#ifndef SPARSETRACK_SERIALIZATION_HPP
#define SPARSETRACK_SERIALIZATION_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "sparsetrack/bounds.hpp"
#include "sparsetrack/experiment.hpp"
#include "sparsetrack/rip.hpp"
#include "sparsetrack/svg.hpp"

namespace sparsetrack {

using json = nlohmann::json;

// --- matrix constants ------------------------------------------------------

inline json to_json(const MatrixConstants& mc) {
  json j;
  j["fingerprint"] = mc.fingerprint;
  json deltas = json::object();
  for (const auto& [s, v] : mc.delta) deltas[std::to_string(s)] = v;
  j["delta"] = deltas;
  json thetas = json::array();
  for (const auto& [key, v] : mc.theta)
    thetas.push_back({{"s", key.first}, {"sp", key.second}, {"value", v}});
  j["theta"] = thetas;
  return j;
}

inline MatrixConstants matrix_constants_from_json(const json& j) {
  MatrixConstants mc;
  mc.fingerprint = j.value("fingerprint", std::uint64_t{0});
  for (const auto& [k, v] : j.at("delta").items())
    mc.delta[std::stoi(k)] = v.get<double>();
  for (const auto& e : j.at("theta"))
    mc.theta[{e.at("s").get<int>(), e.at("sp").get<int>()}] =
        e.at("value").get<double>();
  return mc;
}

// --- theorem parameters and condition reports ------------------------------

inline json to_json(const TheoremParams& p) {
  return json{{"variant", variant_name(p.variant)},
              {"s0", p.s0},
              {"sa", p.sa},
              {"d", p.d},
              {"r", p.r},
              {"eps", p.eps},
              {"alpha", p.alpha},
              {"alpha_add", p.alpha_add},
              {"alpha_del", p.alpha_del},
              {"d0", p.d0},
              {"f", p.f}};
}

inline TheoremParams theorem_params_from_json(const json& j) {
  TheoremParams p;
  p.variant = variant_from_name(j.at("variant").get<std::string>());
  p.s0 = j.at("s0").get<int>();
  p.sa = j.at("sa").get<int>();
  p.d = j.value("d", 1);
  p.r = j.at("r").get<double>();
  p.eps = j.at("eps").get<double>();
  p.alpha = j.value("alpha", 0.0);
  p.alpha_add = j.value("alpha_add", 0.0);
  p.alpha_del = j.value("alpha_del", 0.0);
  p.d0 = j.value("d0", 2);
  p.f = j.value("f", -1);
  return p;
}

inline json to_json(const ConditionReport& rep) {
  json entries = json::array();
  for (const auto& e : rep.entries)
    entries.push_back({{"name", e.name},
                       {"relation", e.relation},
                       {"lhs", e.lhs},
                       {"rhs", e.rhs},
                       {"pass", e.pass},
                       {"margin", e.margin}});
  return json{{"variant", rep.variant},
              {"overall", rep.overall()},
              {"entries", entries},
              {"notes", rep.notes}};
}

// --- experiment config -----------------------------------------------------

inline json to_json(const ExperimentConfig& cfg) {
  json j;
  j["model"] = {{"m", cfg.model.m}, {"s0", cfg.model.s0}, {"sa", cfg.model.sa},
                {"d", cfg.model.d}, {"r", cfg.model.r},   {"seed", cfg.seed}};
  j["n"] = cfg.n;
  j["n0"] = cfg.n0;
  j["c"] = cfg.c;
  j["seed"] = cfg.seed;
  j["horizon"] = cfg.horizon;
  j["trials"] = cfg.trials;
  j["threads"] = cfg.threads;
  j["algorithms"] = cfg.algorithms;
  if (cfg.use_recipe) {
    j["thresholds"] = "recipe";
  } else {
    j["thresholds"] = {{"alpha", cfg.thresholds.alpha},
                       {"alpha_add", cfg.thresholds.alpha_add},
                       {"alpha_del", cfg.thresholds.alpha_del}};
  }
  j["solver"] = {{"max_iters", cfg.solver.max_iters},
                 {"primal_tol", cfg.solver.primal_tol},
                 {"feas_tol", cfg.solver.feas_tol},
                 {"penalty", cfg.solver.penalty},
                 {"over_relaxation", cfg.solver.over_relaxation},
                 {"adapt_penalty", cfg.solver.adapt_penalty}};
  if (!cfg.out_dir.empty()) j["out_dir"] = cfg.out_dir;
  return j;
}

inline ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig cfg;
  const json& mj = j.at("model");
  cfg.model.m = mj.at("m").get<int>();
  cfg.model.s0 = mj.at("s0").get<int>();
  cfg.model.sa = mj.at("sa").get<int>();
  cfg.model.d = mj.at("d").get<int>();
  cfg.model.r = mj.at("r").get<double>();
  if (mj.contains("seed")) cfg.seed = mj.at("seed").get<std::uint64_t>();
  cfg.n = j.at("n").get<int>();
  cfg.n0 = j.value("n0", -1);
  cfg.c = j.at("c").get<double>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.horizon = j.at("horizon").get<int>();
  cfg.trials = j.value("trials", 1);
  cfg.threads = j.value("threads", 1);
  if (j.contains("algorithms"))
    cfg.algorithms = j.at("algorithms").get<std::vector<std::string>>();
  if (j.contains("thresholds") && j.at("thresholds").is_object()) {
    const json& tj = j.at("thresholds");
    cfg.use_recipe = false;
    cfg.thresholds.alpha = tj.at("alpha").get<double>();
    cfg.thresholds.alpha_add = tj.at("alpha_add").get<double>();
    cfg.thresholds.alpha_del = tj.at("alpha_del").get<double>();
  }
  if (j.contains("solver")) {
    const json& sj = j.at("solver");
    cfg.solver.max_iters = sj.value("max_iters", cfg.solver.max_iters);
    cfg.solver.primal_tol = sj.value("primal_tol", cfg.solver.primal_tol);
    cfg.solver.feas_tol = sj.value("feas_tol", cfg.solver.feas_tol);
    cfg.solver.penalty = sj.value("penalty", cfg.solver.penalty);
    cfg.solver.over_relaxation =
        sj.value("over_relaxation", cfg.solver.over_relaxation);
    cfg.solver.adapt_penalty =
        sj.value("adapt_penalty", cfg.solver.adapt_penalty);
  }
  cfg.out_dir = j.value("out_dir", std::string{});
  cfg.validate();
  return cfg;
}

// --- results ---------------------------------------------------------------

inline std::string results_to_csv(const AggregateRecord& rec) {
  std::ostringstream out;
  out.precision(17);
  out << "algorithm,t,nmse,misses,extras\n";
  for (const auto& [name, s] : rec.mean)
    for (std::size_t t = 0; t < s.nmse.size(); ++t)
      out << name << ',' << t << ',' << s.nmse[t] << ',' << s.misses[t] << ','
          << s.extras[t] << '\n';
  return out.str();
}

inline json to_json(const AggregateRecord& rec) {
  json algos = json::object();
  for (const auto& [name, s] : rec.mean)
    algos[name] = {{"nmse", s.nmse},
                   {"misses", s.misses},
                   {"extras", s.extras},
                   {"solver_failures", s.solver_failures}};
  return json{{"trials", rec.trials}, {"horizon", rec.horizon},
              {"algorithms", algos}};
}

inline AggregateRecord aggregate_from_json(const json& j) {
  AggregateRecord rec;
  rec.trials = j.at("trials").get<int>();
  rec.horizon = j.at("horizon").get<int>();
  for (const auto& [name, s] : j.at("algorithms").items()) {
    AlgoSeries a;
    a.nmse = s.at("nmse").get<std::vector<double>>();
    a.misses = s.at("misses").get<std::vector<double>>();
    a.extras = s.at("extras").get<std::vector<double>>();
    a.solver_failures = s.at("solver_failures").get<std::vector<int>>();
    rec.mean[name] = std::move(a);
  }
  return rec;
}

inline std::string results_to_svg(const AggregateRecord& rec) {
  std::map<std::string, std::vector<double>> nmse, misses, extras;
  for (const auto& [name, s] : rec.mean) {
    nmse[name] = s.nmse;
    misses[name] = s.misses;
    extras[name] = s.extras;
  }
  std::ostringstream out;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='640' height='1260'>\n"
      << "<svg y='0'>" << svg_line_chart("NMSE", nmse, /*log_y=*/true)
      << "</svg>\n<svg y='420'>" << svg_line_chart("extras", extras, false)
      << "</svg>\n<svg y='840'>" << svg_line_chart("misses", misses, false)
      << "</svg>\n</svg>\n";
  return out.str();
}

inline void export_results(const AggregateRecord& rec,
                           const std::string& format,
                           const std::string& path) {
  std::string body;
  if (format == "csv")
    body = results_to_csv(rec);
  else if (format == "json")
    body = to_json(rec).dump(2) + "\n";
  else if (format == "svg")
    body = results_to_svg(rec);
  else
    throw std::invalid_argument("export_results: unknown format " + format);
  write_text_file(path, body);
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

}  // namespace sparsetrack

#endif  // SPARSETRACK_SERIALIZATION_HPP
