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
// Generator and auditor for time-varying sparse signal sequences in which the
// support has constant size and composition: at every step Sa new elements
// enter at magnitude r and ramp up to M = d*r, while Sa elements ramp down
// from M and leave the support.

#ifndef SPARSETRACK_SIGNAL_MODEL_HPP
#define SPARSETRACK_SIGNAL_MODEL_HPP

#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sparsetrack/index_set.hpp"
#include "sparsetrack/random.hpp"

namespace sparsetrack {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct ModelParams {
  int m = 0;      // ambient dimension
  int s0 = 0;     // support size (constant over time)
  int sa = 0;     // per-step additions = removals
  int d = 1;      // ramp length; peak magnitude M = d*r
  double r = 1.0; // magnitude step

  double peak() const { return d * r; }

  // Signal power implied by the constant support composition.
  double power() const {
    double ramp = 0.0;
    for (int j = 1; j <= d - 1; ++j) ramp += double(j) * j;
    return (s0 - (2 * d - 2) * sa) * peak() * peak() + 2.0 * sa * ramp * r * r;
  }

  void validate() const {
    if (m <= 0 || s0 <= 0 || d < 1 || r <= 0.0)
      throw std::invalid_argument("signal model: m, s0, d, r must be positive");
    if (sa < 1) throw std::invalid_argument("signal model: require sa >= 1");
    if (s0 < (2 * d - 2) * sa)
      throw std::invalid_argument(
          "signal model: require s0 >= (2d-2)*sa, got s0=" +
          std::to_string(s0) + " < " + std::to_string((2 * d - 2) * sa));
    if (m <= s0 + sa)
      throw std::invalid_argument("signal model: require m > s0 + sa");
  }
};

struct SignalState {
  int t = 0;
  Vector x;          // dense signal, length m
  IndexSet support;  // N_t
  IndexSet inc;      // ramping up, magnitude in {r .. (d-1)r}
  IndexSet dec;      // ramping down, magnitude in {r .. (d-1)r}
  IndexSet con;      // at peak magnitude M
  ModelParams params;

  double magnitude(int i) const { return std::abs(x[i]); }

  // Round |x_i|/r to the nearest integer level; entries are exact multiples
  // of r up to float rounding.
  int level(int i) const {
    return static_cast<int>(std::lround(magnitude(i) / params.r));
  }
};

// Per-step bookkeeping of which indices moved between magnitude levels.
// increased[j] holds the indices that went from (j-1)r to jr (j = 1..d);
// decreased[j] holds those that went from (j+1)r to jr (j = 0..d-1).
struct TransitionSets {
  IndexSet added;    // = increased[1]
  IndexSet removed;  // = decreased[0]
  std::map<int, IndexSet> increased;
  std::map<int, IndexSet> decreased;
};

struct AuditReport {
  bool ok = true;
  std::vector<std::string> failures;

  void fail(std::string what) {
    ok = false;
    failures.push_back(std::move(what));
  }
};

namespace detail {

inline std::vector<int> complement_of(const IndexSet& s, int m) {
  std::vector<int> out;
  out.reserve(m - s.size());
  for (int i = 0; i < m; ++i)
    if (!s.count(i)) out.push_back(i);
  return out;
}

}  // namespace detail

// Initial state: 2*Sa elements at each magnitude j*r for j = 1..d-1 (half of
// them rising, half falling) and the remaining S0-(2d-2)Sa elements at the
// peak. Support indices drawn uniformly without replacement; signs +/-1
// equiprobable.
inline SignalState init_signal(const ModelParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(seed);

  SignalState st;
  st.t = 0;
  st.params = params;
  st.x = Vector::Zero(params.m);

  std::vector<int> all(params.m);
  std::iota(all.begin(), all.end(), 0);
  std::vector<int> chosen = rng.sample_without_replacement(all, params.s0);

  // Layout within the drawn indices: for each ramp level j, Sa rising then
  // Sa falling, then the peak block.
  std::size_t pos = 0;
  for (int j = 1; j <= params.d - 1; ++j) {
    for (int k = 0; k < params.sa; ++k) {
      const int i = chosen[pos++];
      st.x[i] = j * params.r * rng.sign();
      st.inc.insert(i);
    }
    for (int k = 0; k < params.sa; ++k) {
      const int i = chosen[pos++];
      st.x[i] = j * params.r * rng.sign();
      st.dec.insert(i);
    }
  }
  while (pos < chosen.size()) {
    const int i = chosen[pos++];
    st.x[i] = params.peak() * rng.sign();
    st.con.insert(i);
  }
  st.support = IndexSet(chosen.begin(), chosen.end());
  return st;
}

// One step of the generative model:
//   1. magnitudes on inc/dec move by +/- r, con holds;
//   2. Sa fresh indices enter from the support complement at magnitude r and
//      Sa current peak elements start falling to (d-1)r;
//   3. inc/dec/con and the support are recomposed.
// For d = 1 the ramps collapse: entrants arrive directly at the peak and the
// selected fallers leave the support in the same step.
inline std::pair<SignalState, TransitionSets> step_signal(
    const SignalState& prev, Rng& rng) {
  const ModelParams& p = prev.params;
  SignalState st = prev;
  st.t = prev.t + 1;

  // Step 1: ramp the carried-over elements.
  for (int i : prev.inc) st.x[i] += std::copysign(p.r, prev.x[i]);
  for (int i : prev.dec) st.x[i] -= std::copysign(p.r, prev.x[i]);

  // Elements that just reached the peak / just reached zero.
  IndexSet reached_peak;  // I_t(d) for d >= 2
  for (int i : prev.inc)
    if (prev.level(i) == p.d - 1) reached_peak.insert(i);
  IndexSet reached_zero;  // D_t(0) for d >= 2
  for (int i : prev.dec)
    if (prev.level(i) == 1) reached_zero.insert(i);
  for (int i : reached_zero) st.x[i] = 0.0;

  // Step 2: new entrants and new fallers.
  if (static_cast<int>(prev.con.size()) < p.sa)
    throw std::logic_error("signal model: constant set smaller than sa");
  std::vector<int> outside = detail::complement_of(prev.support, p.m);
  std::vector<int> entrants = rng.sample_without_replacement(outside, p.sa);
  std::vector<int> fallers =
      rng.sample_without_replacement(to_vector(prev.con), p.sa);

  IndexSet added(entrants.begin(), entrants.end());
  IndexSet new_dec(fallers.begin(), fallers.end());
  for (int i : entrants) st.x[i] = p.r * rng.sign();
  for (int i : fallers) st.x[i] = (p.d - 1) * p.r * std::copysign(1.0, prev.x[i]);

  // d = 1: entrants arrive at peak magnitude and fallers drop straight to 0.
  if (p.d == 1) {
    reached_peak = added;
    reached_zero = new_dec;
    for (int i : fallers) st.x[i] = 0.0;
  }

  // Step 3: recompose the partition.
  st.inc = set_minus(set_union(prev.inc, added), reached_peak);
  st.dec = set_minus(set_union(prev.dec, new_dec), reached_zero);
  st.con = set_minus(set_union(prev.con, reached_peak), new_dec);
  st.support = set_union(set_union(st.inc, st.dec), st.con);

  // Derive the full level-transition maps from the magnitudes.
  TransitionSets ts;
  ts.added = added;
  ts.removed = reached_zero;
  for (int j = 1; j <= p.d; ++j) ts.increased[j] = {};
  for (int j = 0; j <= p.d - 1; ++j) ts.decreased[j] = {};
  for (int i = 0; i < p.m; ++i) {
    const int before = prev.support.count(i) ? prev.level(i) : 0;
    const int after = st.support.count(i) ? st.level(i) : 0;
    if (after == before + 1) ts.increased[after].insert(i);
    if (after == before - 1) ts.decreased[after].insert(i);
  }
  return {std::move(st), std::move(ts)};
}

// S_t(j) = indices with 0 < |x_i| < j*r.
inline IndexSet small_set(const SignalState& st, int j) {
  if (j < 1 || j > st.params.d)
    throw std::invalid_argument("small_set: j must be in [1, d]");
  IndexSet out;
  for (int i : st.support)
    if (st.level(i) < j) out.insert(i);  // magnitudes are multiples of r
  return out;
}

// Checks the two set-evolution identities that relate consecutive small
// sets through the transition sets:
//   S_t(j)   = S_{t-1}(j) u (A_t u D_t(j-1)) \ (R_t u I_t(j))
//   S_{t-1}(j) u A_t \ R_t = S_t(j) u I_t(j) \ D_t(j-1)
inline AuditReport audit_transition(const SignalState& prev,
                                    const SignalState& next,
                                    const TransitionSets& ts, int j) {
  AuditReport report;
  if (j < 2 || j > prev.params.d) {
    report.fail("audit_transition: j must be in [2, d]");
    return report;
  }
  const IndexSet s_prev = small_set(prev, j);
  const IndexSet s_next = small_set(next, j);
  const IndexSet dec_jm1 = ts.decreased.count(j - 1)
                               ? ts.decreased.at(j - 1)
                               : IndexSet{};
  const IndexSet inc_j =
      ts.increased.count(j) ? ts.increased.at(j) : IndexSet{};

  const IndexSet lhs1 = set_minus(
      set_union(s_prev, set_union(ts.added, dec_jm1)),
      set_union(ts.removed, inc_j));
  if (lhs1 != s_next)
    report.fail("S_t(j) != S_{t-1}(j) u (A u D(j-1)) \\ (R u I(j)) at j=" +
                std::to_string(j));

  const IndexSet lhs2 = set_minus(set_union(s_prev, ts.added), ts.removed);
  const IndexSet rhs2 = set_minus(set_union(s_next, inc_j), dec_jm1);
  if (lhs2 != rhs2)
    report.fail("S_{t-1}(j) u A \\ R != S_t(j) u I(j) \\ D(j-1) at j=" +
                std::to_string(j));

  // Transition-set cardinalities and disjointness.
  if (ts.added.size() != static_cast<std::size_t>(prev.params.sa))
    report.fail("|A_t| != sa");
  if (ts.removed.size() != static_cast<std::size_t>(prev.params.sa))
    report.fail("|R_t| != sa");
  if (!disjoint(ts.added, ts.removed) || !disjoint(ts.added, dec_jm1) ||
      !disjoint(ts.added, inc_j) || !disjoint(ts.removed, dec_jm1) ||
      !disjoint(ts.removed, inc_j) || !disjoint(dec_jm1, inc_j))
    report.fail("transition sets not pairwise disjoint at j=" +
                std::to_string(j));
  return report;
}

// Full state audit: support size, composition histogram, power, partition.
inline AuditReport audit_state(const SignalState& st) {
  AuditReport report;
  const ModelParams& p = st.params;
  if (st.support.size() != static_cast<std::size_t>(p.s0))
    report.fail("|support| != s0");
  if (!disjoint(st.inc, st.dec) || !disjoint(st.inc, st.con) ||
      !disjoint(st.dec, st.con))
    report.fail("inc/dec/con not disjoint");
  if (set_union(set_union(st.inc, st.dec), st.con) != st.support)
    report.fail("inc/dec/con do not partition the support");

  std::map<int, int> histogram;
  double power = 0.0;
  for (int i : st.support) {
    const int lvl = st.level(i);
    if (lvl < 1 || lvl > p.d) report.fail("magnitude outside {r..dr}");
    if (std::abs(st.magnitude(i) - lvl * p.r) > 1e-9 * p.r)
      report.fail("magnitude not a multiple of r");
    histogram[lvl] += 1;
    power += st.x[i] * st.x[i];
  }
  for (int j = 1; j <= p.d - 1; ++j)
    if (histogram[j] != 2 * p.sa)
      report.fail("level " + std::to_string(j) + " count != 2*sa");
  if (histogram[p.d] != p.s0 - (2 * p.d - 2) * p.sa)
    report.fail("peak level count != s0 - (2d-2)*sa");
  if (std::abs(power - p.power()) > 1e-10 * std::max(1.0, p.power()))
    report.fail("signal power drifted");
  return report;
}

}  // namespace sparsetrack

#endif  // SPARSETRACK_SIGNAL_MODEL_HPP
