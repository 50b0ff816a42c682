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
// Solves   min_beta ||beta_{T^c}||_1   s.t.  ||y - A beta||_2 <= eps
// by operator splitting: beta couples two copies, z = beta (shrinkage with
// zero weight on T) and res = y - A beta (projection onto the eps-ball).
// The quadratic subproblem matrix I + A'A is independent of the penalty, so
// it is factored once per measurement matrix and reused across solves.
// T = empty gives the plain basis-pursuit-denoising program; eps = 0 gives
// the equality-constrained program (the ball projection degenerates to 0).

#ifndef SPARSETRACK_L1_SOLVER_HPP
#define SPARSETRACK_L1_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "sparsetrack/index_set.hpp"
#include "sparsetrack/signal_model.hpp"

namespace sparsetrack {

struct SolverConfig {
  int max_iters = 5000;
  double primal_tol = 1e-6;
  double feas_tol = 1e-8;
  double penalty = 1.0;          // splitting parameter rho
  double over_relaxation = 1.0;  // in [1, 2)
  bool adapt_penalty = true;     // residual balancing, x/÷ 2 at ratio > 10
  bool record_history = false;

  void validate() const {
    if (max_iters < 1) throw std::invalid_argument("solver: max_iters >= 1");
    if (primal_tol <= 0.0 || feas_tol <= 0.0 || penalty <= 0.0)
      throw std::invalid_argument("solver: tolerances and penalty > 0");
    if (over_relaxation < 1.0 || over_relaxation >= 2.0)
      throw std::invalid_argument("solver: over_relaxation in [1,2)");
  }
};

struct SolveResult {
  Vector beta;
  int iterations = 0;
  double feas_violation = 0.0;  // max(0, ||y - A beta|| - eps)
  double objective = 0.0;       // ||beta_{T^c}||_1
  bool converged = false;
  // Fixed-point residual per iteration (monotone for fixed penalty and no
  // over-relaxation); filled when cfg.record_history.
  std::vector<double> history;
};

struct LsResult {
  Vector x;                    // length m, zero off T
  bool rank_deficient = false; // |T| > n, min-norm pseudo-inverse used
};

struct KktDiagnostics {
  double feasibility_gap = 0.0;  // max(0, ||y - A beta|| - eps)
  double stationarity = 0.0;     // distance of best subgradient certificate to 0
};

class PartialL1Solver {
 public:
  explicit PartialL1Solver(const Matrix& a) : a_(a) {
    const int m = static_cast<int>(a.cols());
    const int n = static_cast<int>(a.rows());
    normal_.compute(Matrix::Identity(m, m) + a.transpose() * a);
    gram_.compute(a * a.transpose() +
                  1e-12 * a.squaredNorm() / n * Matrix::Identity(n, n));
  }

  const Matrix& matrix() const { return a_; }

  SolveResult solve(const Vector& y, const IndexSet& t_set, double eps,
                    const SolverConfig& cfg = {}) const {
    cfg.validate();
    if (eps < 0.0) throw std::invalid_argument("solve: eps >= 0");
    const int m = static_cast<int>(a_.cols());
    const int n = static_cast<int>(a_.rows());
    if (y.size() != n) throw std::invalid_argument("solve: y length mismatch");
    for (int i : t_set)
      if (i < 0 || i >= m) throw std::invalid_argument("solve: T out of range");

    // Feasibility: the smallest attainable residual is the projection of y
    // off the range of A.
    {
      const Vector ls = a_.transpose() * gram_.solve(y);
      const double rmin = (y - a_ * ls).norm();
      if (rmin > eps + std::max(1e-9, 1e-9 * y.norm()))
        throw std::runtime_error("solve: no beta satisfies the residual ball");
    }

    std::vector<char> in_t(m, 0);
    for (int i : t_set) in_t[i] = 1;

    Vector beta = Vector::Zero(m), z = Vector::Zero(m), u1 = Vector::Zero(m);
    Vector res = Vector::Zero(n), u2 = Vector::Zero(n);
    double rho = cfg.penalty;
    const double alpha = cfg.over_relaxation;

    SolveResult out;
    if (cfg.record_history) out.history.reserve(cfg.max_iters);

    Vector z_prev = z, res_prev = res;
    for (int it = 0; it < cfg.max_iters; ++it) {
      // beta step: (I + A'A) beta = (z - u1) + A'(y - res + u2)
      beta = normal_.solve((z - u1) + a_.transpose() * (y - res + u2));
      const Vector abeta = a_ * beta;

      // relaxed inputs to the proximal steps
      const Vector beta_r = alpha * beta + (1.0 - alpha) * z;
      const Vector abeta_r = alpha * abeta + (1.0 - alpha) * (y - res);

      z_prev = z;
      res_prev = res;

      // z step: shrinkage with zero weight on T
      const double kappa = 1.0 / rho;
      for (int i = 0; i < m; ++i) {
        const double v = beta_r[i] + u1[i];
        z[i] = in_t[i] ? v : std::copysign(std::max(std::abs(v) - kappa, 0.0), v);
      }

      // res step: project onto the centered eps-ball
      {
        Vector v = y - abeta_r + u2;
        const double nv = v.norm();
        res = (nv > eps && nv > 0.0) ? Vector(v * (eps / nv)) : v;
      }

      u1 += beta_r - z;
      u2 += y - abeta_r - res;

      const double pri =
          std::sqrt((beta - z).squaredNorm() + (y - abeta - res).squaredNorm());
      const double dua = rho * std::sqrt((z - z_prev).squaredNorm() +
                                         (res - res_prev).squaredNorm());
      if (cfg.record_history)
        out.history.push_back(std::sqrt(pri * pri + (dua / rho) * (dua / rho)));

      out.iterations = it + 1;
      const double scale = 1.0 + std::max(beta.norm(), z.norm());
      if (pri <= cfg.primal_tol * scale && dua <= cfg.primal_tol * rho * scale) {
        out.converged = true;
        break;
      }

      if (cfg.adapt_penalty && (it + 1) % 25 == 0) {
        if (pri > 10.0 * dua / rho) {
          rho *= 2.0;
          u1 *= 0.5;
          u2 *= 0.5;
        } else if (dua / rho > 10.0 * pri) {
          rho *= 0.5;
          u1 *= 2.0;
          u2 *= 2.0;
        }
      }
    }

    // Final polish: pull beta onto the constraint set with the minimum-norm
    // correction so the reported iterate is exactly feasible.
    double rnorm = (y - a_ * beta).norm();
    if (rnorm > eps) {
      const Vector q = (y - a_ * beta) * (1.0 - eps / std::max(rnorm, 1e-300));
      beta += a_.transpose() * gram_.solve(q);
      rnorm = (y - a_ * beta).norm();
    }

    out.beta = beta;
    out.feas_violation = std::max(0.0, rnorm - eps);
    out.objective = 0.0;
    for (int i = 0; i < m; ++i)
      if (!in_t[i]) out.objective += std::abs(beta[i]);
    if (out.converged && out.feas_violation > cfg.feas_tol)
      out.converged = false;
    return out;
  }

 private:
  Matrix a_;
  Eigen::LLT<Matrix> normal_;  // I + A'A
  Eigen::LLT<Matrix> gram_;    // A A' (regularized), for projections
};

inline SolveResult solve_partial_l1(const Matrix& a, const Vector& y,
                                    const IndexSet& t_set, double eps,
                                    const SolverConfig& cfg = {}) {
  return PartialL1Solver(a).solve(y, t_set, eps, cfg);
}

// x_T = A_T^+ y (min-norm least squares), zero elsewhere.
inline LsResult restricted_least_squares(const Matrix& a, const Vector& y,
                                         const IndexSet& t_set) {
  const int m = static_cast<int>(a.cols());
  LsResult out;
  out.x = Vector::Zero(m);
  if (t_set.empty()) return out;
  for (int i : t_set)
    if (i < 0 || i >= m)
      throw std::invalid_argument("restricted_least_squares: T out of range");

  const std::vector<int> idx = to_vector(t_set);
  Matrix at(a.rows(), idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) at.col(k) = a.col(idx[k]);

  out.rank_deficient = static_cast<Eigen::Index>(idx.size()) > a.rows();
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(at);
  const Vector xt = cod.solve(y);
  for (std::size_t k = 0; k < idx.size(); ++k) out.x[idx[k]] = xt[k];
  return out;
}

// Feasibility gap plus a stationarity certificate: smallest distance of
// lambda * A'(y - A beta) from the subdifferential of ||.||_1 on T^c over
// lambda >= 0 (golden-section on a piecewise-quadratic scalar function).
inline KktDiagnostics kkt_residual(const Matrix& a, const Vector& y,
                                   const IndexSet& t_set, double eps,
                                   const Vector& beta) {
  if (beta.size() != a.cols())
    throw std::invalid_argument("kkt_residual: beta length mismatch");
  const int m = static_cast<int>(a.cols());
  std::vector<char> in_t(m, 0);
  for (int i : t_set) in_t[i] = 1;

  KktDiagnostics diag;
  const Vector r = y - a * beta;
  diag.feasibility_gap = std::max(0.0, r.norm() - eps);

  const Vector g = a.transpose() * r;  // gradient direction of the constraint
  const double act_tol = 1e-7 * (1.0 + beta.cwiseAbs().maxCoeff());
  auto dist = [&](double lambda) {
    double s2 = 0.0;
    for (int i = 0; i < m; ++i) {
      const double v = lambda * g[i];
      if (in_t[i]) {
        s2 += v * v;
      } else if (std::abs(beta[i]) > act_tol) {
        const double d = v - std::copysign(1.0, beta[i]);
        s2 += d * d;
      } else {
        const double d = std::max(0.0, std::abs(v) - 1.0);
        s2 += d * d;
      }
    }
    return std::sqrt(s2);
  };

  // If the constraint is inactive, lambda must be 0.
  if (r.norm() < eps * (1.0 - 1e-9)) {
    diag.stationarity = dist(0.0);
    return diag;
  }

  double lo = 0.0;
  double hi = (g.norm() > 0.0) ? 2.0 * std::sqrt(double(m)) / g.norm() : 1.0;
  const double gr = 0.6180339887498949;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = dist(x1), f2 = dist(x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = dist(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = dist(x2);
    }
  }
  diag.stationarity = std::min({dist(lo), f1, f2, dist(hi)});
  return diag;
}

}  // namespace sparsetrack

#endif  // SPARSETRACK_L1_SOLVER_HPP
