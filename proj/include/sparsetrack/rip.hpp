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
// Exact restricted isometry and restricted orthogonality constants by
// exhaustive subset enumeration. These are certifier inputs: a sampled lower
// bound cannot certify a sufficient condition, so there is no sampling
// fallback; past the enumeration budget the computation refuses.

#ifndef SPARSETRACK_RIP_HPP
#define SPARSETRACK_RIP_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "sparsetrack/signal_model.hpp"

namespace sparsetrack {

inline constexpr std::uint64_t kEnumerationBudget = 10'000'000;

namespace detail {

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long double acc = 1.0L;
  for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
  const long double cap = 2e18L;
  return static_cast<std::uint64_t>(std::min(acc + 0.5L, cap));
}

// Lexicographic k-combinations of {0..n-1}; visit returns void.
template <typename F>
void for_each_combination(int n, int k, F&& visit) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    visit(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline Matrix columns(const Matrix& a, const std::vector<int>& idx) {
  Matrix out(a.rows(), idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(k) = a.col(idx[k]);
  return out;
}

// 64-bit FNV-1a over the matrix bytes, used to tie saved constants to the
// matrix they were computed from.
inline std::uint64_t matrix_fingerprint(const Matrix& a) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(a.rows()));
  mix(static_cast<std::uint64_t>(a.cols()));
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    std::uint64_t bits;
    const double v = a.data()[i];
    static_assert(sizeof(bits) == sizeof(v));
    __builtin_memcpy(&bits, &v, sizeof(bits));
    mix(bits);
  }
  return h;
}

}  // namespace detail

// delta_S: worst deviation of an S-column Gram spectrum from 1, maximized
// over all S-subsets.
inline double rip_delta(const Matrix& a, int s) {
  const int m = static_cast<int>(a.cols());
  if (s < 1 || s > std::min<int>(a.rows(), m))
    throw std::invalid_argument("rip_delta: require 1 <= S <= min(n, m)");
  const std::uint64_t count = detail::binomial(m, s);
  if (count > kEnumerationBudget)
    throw std::runtime_error("rip_delta: C(" + std::to_string(m) + "," +
                             std::to_string(s) + ") = " +
                             std::to_string(count) +
                             " subsets exceeds the enumeration budget");
  double delta = 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  detail::for_each_combination(m, s, [&](const std::vector<int>& idx) {
    const Matrix at = detail::columns(a, idx);
    eig.compute(at.transpose() * at, Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    delta = std::max({delta, ev[s - 1] - 1.0, 1.0 - ev[0]});
  });
  return delta;
}

// theta_{S,S'}: largest spectral norm of a cross-Gram block A_T' A_{T'}
// over disjoint subsets of sizes S and S'.
inline double roc_theta(const Matrix& a, int s, int sp) {
  const int m = static_cast<int>(a.cols());
  if (s < 1 || sp < 1 || s + sp > m)
    throw std::invalid_argument("roc_theta: require S, S' >= 1, S + S' <= m");
  const std::uint64_t count =
      detail::binomial(m, s) * detail::binomial(m - s, sp);
  if (count > kEnumerationBudget)
    throw std::runtime_error(
        "roc_theta: " + std::to_string(count) +
        " subset pairs exceed the enumeration budget");

  double theta = 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  detail::for_each_combination(m, s, [&](const std::vector<int>& tidx) {
    std::vector<char> used(m, 0);
    for (int i : tidx) used[i] = 1;
    std::vector<int> rest;
    rest.reserve(m - s);
    for (int i = 0; i < m; ++i)
      if (!used[i]) rest.push_back(i);
    const Matrix at = detail::columns(a, tidx);

    detail::for_each_combination(
        static_cast<int>(rest.size()), sp, [&](const std::vector<int>& ridx) {
          std::vector<int> tpidx(sp);
          for (int k = 0; k < sp; ++k) tpidx[k] = rest[ridx[k]];
          const Matrix cross = at.transpose() * detail::columns(a, tpidx);
          if (cross.rows() == 1 || cross.cols() == 1) {
            theta = std::max(theta, cross.norm());
          } else if (cross.rows() <= cross.cols()) {
            eig.compute(cross * cross.transpose(), Eigen::EigenvaluesOnly);
            theta = std::max(theta,
                             std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff())));
          } else {
            eig.compute(cross.transpose() * cross, Eigen::EigenvaluesOnly);
            theta = std::max(theta,
                             std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff())));
          }
        });
  });
  return theta;
}

// Exact constants of one matrix at the orders something downstream asked for.
struct MatrixConstants {
  std::map<int, double> delta;                     // S -> delta_S
  std::map<std::pair<int, int>, double> theta;     // (S, S') -> theta
  std::uint64_t fingerprint = 0;

  bool has_delta(int s) const { return delta.count(s) > 0; }
  bool has_theta(int s, int sp) const { return theta.count({s, sp}) > 0; }

  double get_delta(int s) const {
    auto it = delta.find(s);
    if (it == delta.end())
      throw std::out_of_range("missing delta at order " + std::to_string(s));
    return it->second;
  }
  double get_theta(int s, int sp) const {
    auto it = theta.find({s, sp});
    if (it == theta.end())
      throw std::out_of_range("missing theta at orders (" + std::to_string(s) +
                              "," + std::to_string(sp) + ")");
    return it->second;
  }
};

inline MatrixConstants compute_constants(
    const Matrix& a, const std::vector<int>& delta_orders,
    const std::vector<std::pair<int, int>>& theta_pairs) {
  MatrixConstants mc;
  mc.fingerprint = detail::matrix_fingerprint(a);
  for (int s : delta_orders)
    if (!mc.has_delta(s)) mc.delta[s] = rip_delta(a, s);
  for (auto [s, sp] : theta_pairs)
    if (!mc.has_theta(s, sp)) mc.theta[{s, sp}] = roc_theta(a, s, sp);
  return mc;
}

}  // namespace sparsetrack

#endif  // SPARSETRACK_RIP_HPP
