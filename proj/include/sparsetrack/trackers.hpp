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
// Per-time-step recursive reconstruction algorithms. Each step consumes the
// support estimate fed back from the previous step and nothing else, so a
// step rerun with identical inputs is bit-reproducible.

#ifndef SPARSETRACK_TRACKERS_HPP
#define SPARSETRACK_TRACKERS_HPP

#include <cmath>
#include <optional>
#include <utility>

#include "sparsetrack/index_set.hpp"
#include "sparsetrack/l1_solver.hpp"

namespace sparsetrack {

struct Thresholds {
  double alpha = 0.0;      // single threshold (modified-CS / simple CS)
  double alpha_add = 0.0;  // addition threshold
  double alpha_del = 0.0;  // deletion threshold

  // The simulation recipe: alpha_add at the noise level, alpha_del at half
  // the magnitude step, alpha in between.
  static Thresholds recipe(double c, double r) {
    Thresholds th;
    th.alpha_add = c / 2.0;
    th.alpha_del = r / 2.0;
    th.alpha = (c / 2.0 + r / 2.0) / 2.0;
    return th;
  }
};

struct TrackerState {
  IndexSet n_hat;  // support estimate fed back between steps
  int t = 0;
};

struct StepTrace {
  Vector x_stage1;      // modified-CS output, or the CS-residual estimate
  IndexSet t_set;       // T used for this step
  IndexSet t_det;       // post-addition set (add-LS-del variants)
  Vector x_det;         // LS estimate on t_det
  Vector x_final;       // the step's output estimate
  IndexSet n_hat_next;  // fed-back support
  bool solver_converged = true;
  bool ls_overdetermined_flag = false;  // |T_det| > n, min-norm LS used
  // (x_t - x_det) restricted to t_det, available in simulation mode only.
  std::optional<Vector> ls_error_vec;
};

enum class ThresholdMode { kSingle, kAdd, kDelete };

// Single: {i : |x_i| > tau}. Add: base u {i in base^c : |x_i| > tau}.
// Delete: base \ {i in base : |x_i| <= tau}. Comparisons are strict for
// add/single and non-strict for delete.
inline IndexSet support_threshold(const Vector& xhat, double tau,
                                  const IndexSet& base, ThresholdMode mode) {
  IndexSet out;
  switch (mode) {
    case ThresholdMode::kSingle:
      for (int i = 0; i < xhat.size(); ++i)
        if (std::abs(xhat[i]) > tau) out.insert(i);
      break;
    case ThresholdMode::kAdd:
      out = base;
      for (int i = 0; i < xhat.size(); ++i)
        if (!base.count(i) && std::abs(xhat[i]) > tau) out.insert(i);
      break;
    case ThresholdMode::kDelete:
      for (int i : base)
        if (!(std::abs(xhat[i]) <= tau)) out.insert(i);
      break;
  }
  return out;
}

namespace detail {

// Shared add-LS-del tail: threshold-add on x_stage1, LS on the enlarged set,
// threshold-delete on the LS values, final LS on the survivors.
inline void add_ls_del(const PartialL1Solver& solver, const Vector& y,
                       const Thresholds& thr, StepTrace* trace) {
  const Matrix& a = solver.matrix();
  trace->t_det = support_threshold(trace->x_stage1, thr.alpha_add,
                                   trace->t_set, ThresholdMode::kAdd);
  LsResult det = restricted_least_squares(a, y, trace->t_det);
  trace->x_det = det.x;
  trace->ls_overdetermined_flag = det.rank_deficient;

  const IndexSet kept = support_threshold(trace->x_det, thr.alpha_del,
                                          trace->t_det, ThresholdMode::kDelete);
  LsResult fin = restricted_least_squares(a, y, kept);
  trace->x_final = fin.x;
  trace->n_hat_next = kept;
}

inline void attach_ls_error(const Vector& x_true, StepTrace* trace) {
  Vector e = Vector::Zero(x_true.size());
  for (int i : trace->t_det) e[i] = x_true[i] - trace->x_det[i];
  trace->ls_error_vec = std::move(e);
}

}  // namespace detail

// Modified-CS: partial-l1 solve with T = previous support estimate, then a
// single support threshold at alpha. At t = 0 the caller passes the t=0
// matrix and T is forced empty (plain CS bootstrap).
inline std::pair<StepTrace, TrackerState> modcs_step(
    const TrackerState& state, const PartialL1Solver& solver, const Vector& y,
    double eps, const Thresholds& thr, const SolverConfig& cfg,
    const Vector* x_true = nullptr) {
  StepTrace trace;
  trace.t_set = (state.t == 0) ? IndexSet{} : state.n_hat;
  SolveResult sr = solver.solve(y, trace.t_set, eps, cfg);
  trace.solver_converged = sr.converged;
  trace.x_stage1 = sr.beta;
  trace.n_hat_next =
      support_threshold(sr.beta, thr.alpha, {}, ThresholdMode::kSingle);
  trace.x_final = sr.beta;
  (void)x_true;
  TrackerState next{trace.n_hat_next, state.t + 1};
  return {std::move(trace), std::move(next)};
}

// Modified-CS with Add-LS-Del.
inline std::pair<StepTrace, TrackerState> modcs_aldl_step(
    const TrackerState& state, const PartialL1Solver& solver, const Vector& y,
    double eps, const Thresholds& thr, const SolverConfig& cfg,
    const Vector* x_true = nullptr) {
  StepTrace trace;
  trace.t_set = (state.t == 0) ? IndexSet{} : state.n_hat;
  SolveResult sr = solver.solve(y, trace.t_set, eps, cfg);
  trace.solver_converged = sr.converged;
  trace.x_stage1 = sr.beta;
  detail::add_ls_del(solver, y, thr, &trace);
  if (x_true) detail::attach_ls_error(*x_true, &trace);
  TrackerState next{trace.n_hat_next, state.t + 1};
  return {std::move(trace), std::move(next)};
}

// LS-CS: initial LS on T, plain CS on the measurement residual, add back,
// then the same add-LS-del tail. The t = 0 step (T empty) reduces to the
// add-LS-del bootstrap since the initial LS estimate is zero.
inline std::pair<StepTrace, TrackerState> lscs_step(
    const TrackerState& state, const PartialL1Solver& solver, const Vector& y,
    double eps, const Thresholds& thr, const SolverConfig& cfg,
    const Vector* x_true = nullptr) {
  StepTrace trace;
  trace.t_set = (state.t == 0) ? IndexSet{} : state.n_hat;
  const Matrix& a = solver.matrix();

  const Vector x_init = restricted_least_squares(a, y, trace.t_set).x;
  const Vector y_res = y - a * x_init;
  SolveResult sr = solver.solve(y_res, {}, eps, cfg);
  trace.solver_converged = sr.converged;
  trace.x_stage1 = sr.beta + x_init;
  detail::add_ls_del(solver, y, thr, &trace);
  if (x_true) detail::attach_ls_error(*x_true, &trace);
  TrackerState next{trace.n_hat_next, state.t + 1};
  return {std::move(trace), std::move(next)};
}

// Memoryless baseline: plain CS at every step; the thresholded support is
// kept for metrics only.
inline std::pair<StepTrace, TrackerState> simple_cs_step(
    const TrackerState& state, const PartialL1Solver& solver, const Vector& y,
    double eps, const Thresholds& thr, const SolverConfig& cfg,
    const Vector* x_true = nullptr) {
  StepTrace trace;
  trace.t_set = {};
  SolveResult sr = solver.solve(y, {}, eps, cfg);
  trace.solver_converged = sr.converged;
  trace.x_stage1 = sr.beta;
  trace.x_final = sr.beta;
  trace.n_hat_next =
      support_threshold(sr.beta, thr.alpha, {}, ThresholdMode::kSingle);
  (void)x_true;
  TrackerState next{trace.n_hat_next, state.t + 1};
  return {std::move(trace), std::move(next)};
}

}  // namespace sparsetrack

#endif  // SPARSETRACK_TRACKERS_HPP
