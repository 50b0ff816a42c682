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
// Monte-Carlo harness: runs the trackers on shared per-trial data streams,
// aggregates NMSE / misses / extras per time step, and exports results.
// Per-trial seeds are derived from the master seed, so results are
// byte-identical regardless of thread count.

#ifndef SPARSETRACK_EXPERIMENT_HPP
#define SPARSETRACK_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "sparsetrack/bounds.hpp"
#include "sparsetrack/measurement.hpp"
#include "sparsetrack/signal_model.hpp"
#include "sparsetrack/trackers.hpp"

namespace sparsetrack {

inline const std::vector<std::string> kAllAlgorithms = {"cs", "modcs",
                                                        "modcs-aldl", "lscs"};

struct ExperimentConfig {
  ModelParams model;
  int n = 0;
  int n0 = -1;  // < 0: min(m, 3*s0 + 10)
  double c = 0.0;
  std::uint64_t seed = 0;
  int horizon = 1;       // number of steps after t = 0
  int trials = 1;
  int threads = 1;
  std::vector<std::string> algorithms = {"modcs", "modcs-aldl", "lscs"};
  Thresholds thresholds;     // used when use_recipe is false
  bool use_recipe = true;    // alpha_add = c/2, alpha_del = r/2, alpha between
  SolverConfig solver;
  bool keep_traces = false;  // retain ground-truthed traces for verification
  std::string out_dir;       // destination for exported artifacts

  int effective_n0() const {
    return n0 >= 0 ? n0 : default_n0(model.m, model.s0);
  }
  Thresholds effective_thresholds() const {
    return use_recipe ? Thresholds::recipe(c, model.r) : thresholds;
  }
  void validate() const {
    model.validate();
    if (trials < 1 || horizon < 1)
      throw std::invalid_argument("experiment: trials >= 1 and horizon >= 1");
    if (n <= 0 || n >= model.m)
      throw std::invalid_argument("experiment: require 0 < n < m");
    if (effective_n0() < n)
      throw std::invalid_argument("experiment: require n0 >= n");
    if (c < 0.0) throw std::invalid_argument("experiment: require c >= 0");
    for (const auto& a : algorithms)
      if (std::find(kAllAlgorithms.begin(), kAllAlgorithms.end(), a) ==
          kAllAlgorithms.end())
        throw std::invalid_argument("experiment: unknown algorithm " + a);
  }
};

struct AlgoSeries {
  std::vector<double> nmse;    // per t
  std::vector<double> misses;  // per t
  std::vector<double> extras;  // per t
  std::vector<double> e_norm;  // ||e_t||_2 of the detection LS error
  std::vector<double> e_inf;   // ||e_t||_inf ("" )
  std::vector<int> solver_failures;  // per t (0/1 per trial; summed in aggregate)
};

struct TrialRecord {
  std::map<std::string, AlgoSeries> algos;
  double signal_power = 0.0;
  std::map<std::string, std::vector<TrackedStep>> traces;  // when keep_traces
};

struct SpreadStats {
  double fraction = 0.0;   // share of steps with ||e||_inf <= ||e||/sqrt(Sa)
  double max_ratio = 0.0;  // max of (||e||/sqrt(Sa)) / ||e||_inf
  double min_ratio = 0.0;  // min of the same ratio
  long steps_counted = 0;
};

struct AggregateRecord {
  int trials = 0;
  int horizon = 0;
  std::map<std::string, AlgoSeries> mean;  // nmse = ratio of means over trials
  std::vector<TrialRecord> per_trial;      // kept for spread / verification
};

namespace detail {

using StepFn = std::pair<StepTrace, TrackerState> (*)(
    const TrackerState&, const PartialL1Solver&, const Vector&, double,
    const Thresholds&, const SolverConfig&, const Vector*);

inline StepFn step_fn(const std::string& algorithm) {
  if (algorithm == "cs") return &simple_cs_step;
  if (algorithm == "modcs") return &modcs_step;
  if (algorithm == "modcs-aldl") return &modcs_aldl_step;
  if (algorithm == "lscs") return &lscs_step;
  throw std::invalid_argument("unknown algorithm: " + algorithm);
}

}  // namespace detail

// One trajectory; every selected algorithm consumes the same signal, matrix
// and noise streams, so measured differences are algorithmic only.
inline TrialRecord run_trial(const ExperimentConfig& cfg,
                             std::uint64_t trial_seed) {
  cfg.validate();
  const int horizon = cfg.horizon;
  const Thresholds thr = cfg.effective_thresholds();

  MeasurementModel mm = make_measurement_model(
      cfg.n, cfg.effective_n0(), cfg.model.m, cfg.c, mix_seed(trial_seed, 101));
  PartialL1Solver solver(mm.a);
  PartialL1Solver solver0(mm.a0);

  // The full trajectory and noise are drawn up front and shared.
  std::vector<SignalState> states;
  states.reserve(horizon + 1);
  states.push_back(init_signal(cfg.model, mix_seed(trial_seed, 202)));
  Rng step_rng(mix_seed(trial_seed, 303));
  for (int t = 1; t <= horizon; ++t)
    states.push_back(step_signal(states.back(), step_rng).first);

  std::vector<Vector> ys(horizon + 1);
  ys[0] = measure(mm.a0, states[0].x,
                  uniform_noise(mm.n0(), cfg.c, mix_seed(trial_seed, 404)));
  for (int t = 1; t <= horizon; ++t)
    ys[t] = measure(mm.a, states[t].x,
                    uniform_noise(mm.n(), cfg.c, mix_seed(trial_seed, 404 + t)));

  TrialRecord rec;
  rec.signal_power = cfg.model.power();

  for (const auto& name : cfg.algorithms) {
    const auto step = detail::step_fn(name);
    AlgoSeries series;
    TrackerState state;
    for (int t = 0; t <= horizon; ++t) {
      const bool initial = (t == 0);
      const PartialL1Solver& s = initial ? solver0 : solver;
      const double eps = initial ? mm.eps0 : mm.eps;
      auto [trace, next] =
          step(state, s, ys[t], eps, thr, cfg.solver, &states[t].x);
      state = next;

      const Vector err = states[t].x - trace.x_final;
      series.nmse.push_back(err.squaredNorm() / states[t].x.squaredNorm());
      const auto [mis, ext] =
          support_error_metrics(states[t].support, trace.n_hat_next);
      series.misses.push_back(mis);
      series.extras.push_back(ext);
      series.solver_failures.push_back(trace.solver_converged ? 0 : 1);
      if (trace.ls_error_vec) {
        series.e_norm.push_back(trace.ls_error_vec->norm());
        series.e_inf.push_back(trace.ls_error_vec->cwiseAbs().maxCoeff());
      } else {
        series.e_norm.push_back(0.0);
        series.e_inf.push_back(0.0);
      }
      if (cfg.keep_traces)
        rec.traces[name].push_back(
            TrackedStep{states[t].x, states[t].support, trace});
    }
    rec.algos[name] = std::move(series);
  }
  return rec;
}

// Averages the per-time metrics across trials; NMSE is aggregated as the
// ratio of mean squared error to mean signal power (equal to the mean
// per-trial NMSE here, since the model keeps the power constant).
inline AggregateRecord run_monte_carlo(const ExperimentConfig& cfg) {
  cfg.validate();
  AggregateRecord agg;
  agg.trials = cfg.trials;
  agg.horizon = cfg.horizon;
  agg.per_trial.resize(cfg.trials);

  const int workers = std::max(1, std::min(cfg.threads, cfg.trials));
  if (workers == 1) {
    for (int k = 0; k < cfg.trials; ++k)
      agg.per_trial[k] = run_trial(cfg, mix_seed(cfg.seed, k));
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int k = next++; k < cfg.trials; k = next++)
          agg.per_trial[k] = run_trial(cfg, mix_seed(cfg.seed, k));
      });
    for (auto& th : pool) th.join();
  }

  // Ordered reduction over the trial index.
  for (const auto& name : cfg.algorithms) {
    AlgoSeries mean;
    const std::size_t len = agg.per_trial[0].algos.at(name).nmse.size();
    mean.nmse.assign(len, 0.0);
    mean.misses.assign(len, 0.0);
    mean.extras.assign(len, 0.0);
    mean.solver_failures.assign(len, 0);
    std::vector<double> err2(len, 0.0), pow2(len, 0.0);
    for (const auto& tr : agg.per_trial) {
      const AlgoSeries& s = tr.algos.at(name);
      for (std::size_t t = 0; t < len; ++t) {
        err2[t] += s.nmse[t] * tr.signal_power;
        pow2[t] += tr.signal_power;
        mean.misses[t] += s.misses[t];
        mean.extras[t] += s.extras[t];
        mean.solver_failures[t] += s.solver_failures[t];
      }
    }
    for (std::size_t t = 0; t < len; ++t) {
      mean.nmse[t] = err2[t] / pow2[t];
      mean.misses[t] /= cfg.trials;
      mean.extras[t] /= cfg.trials;
    }
    agg.mean[name] = std::move(mean);
  }
  return agg;
}

// Fraction of (trial, t) with ||e||_inf <= ||e||/sqrt(Sa), and the extreme
// values of (||e||/sqrt(Sa)) / ||e||_inf; zero-error steps are excluded.
inline SpreadStats spread_statistic(const std::vector<TrialRecord>& records,
                                    int sa,
                                    const std::string& algorithm = "modcs-aldl") {
  SpreadStats st;
  st.min_ratio = 1e300;
  long satisfied = 0;
  const double root_sa = std::sqrt(static_cast<double>(sa));
  for (const auto& rec : records) {
    auto it = rec.algos.find(algorithm);
    if (it == rec.algos.end()) continue;
    const AlgoSeries& s = it->second;
    for (std::size_t t = 0; t < s.e_norm.size(); ++t) {
      if (s.e_inf[t] <= 0.0) continue;
      ++st.steps_counted;
      const double ratio = (s.e_norm[t] / root_sa) / s.e_inf[t];
      st.max_ratio = std::max(st.max_ratio, ratio);
      st.min_ratio = std::min(st.min_ratio, ratio);
      if (s.e_inf[t] <= s.e_norm[t] / root_sa) ++satisfied;
    }
  }
  if (st.steps_counted == 0)
    throw std::runtime_error(
        "spread_statistic: no detection LS error data recorded for " +
        algorithm);
  st.fraction = static_cast<double>(satisfied) / st.steps_counted;
  return st;
}

// Least-squares slope of y against t over the final half of the series,
// the stability verdict statistic.
inline double final_half_slope(const std::vector<double>& y) {
  const std::size_t begin = y.size() / 2;
  const std::size_t n = y.size() - begin;
  if (n < 2) return 0.0;
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t i = begin; i < y.size(); ++i) {
    const double t = static_cast<double>(i);
    st += t;
    sy += y[i];
    stt += t * t;
    sty += t * y[i];
  }
  const double den = n * stt - st * st;
  return den != 0.0 ? (n * sty - st * sy) / den : 0.0;
}

}  // namespace sparsetrack

#endif  // SPARSETRACK_EXPERIMENT_HPP
