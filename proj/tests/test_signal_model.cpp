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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sparsetrack/signal_model.hpp"

using namespace sparsetrack;

namespace {

ModelParams base_params() {
  ModelParams p;
  p.m = 200;
  p.s0 = 20;
  p.sa = 2;
  p.d = 3;
  p.r = 1.0;
  return p;
}

}  // namespace

TEST_CASE("parameter validation names the violated inequality") {
  ModelParams p = base_params();
  CHECK_NOTHROW(p.validate());

  p.d = 7;  // s0 < (2d-2) sa
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  p = base_params();
  p.sa = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  p = base_params();
  p.m = 21;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("initial state composition and power") {
  ModelParams p = base_params();
  SignalState st = init_signal(p, 7);

  // 2*Sa entries per ramp level j = 1..d-1, the rest at the peak.
  CHECK(int(st.support.size()) == 20);
  CHECK(int(st.inc.size()) == 4);   // (d-1)*sa
  CHECK(int(st.dec.size()) == 4);
  CHECK(int(st.con.size()) == 12);  // s0 - (2d-2)*sa

  CHECK(p.peak() == doctest::Approx(3.0));
  // 12 entries at M=3 plus 2*2*(1 + 4) at the ramp levels.
  CHECK(p.power() == doctest::Approx(128.0));
  CHECK(st.x.squaredNorm() == doctest::Approx(p.power()));

  AuditReport rep = audit_state(st);
  CHECK(rep.ok);
}

TEST_CASE("initial state is deterministic in the seed") {
  ModelParams p = base_params();
  SignalState a = init_signal(p, 42);
  SignalState b = init_signal(p, 42);
  CHECK(a.x == b.x);
  CHECK(a.support == b.support);
  SignalState c = init_signal(p, 43);
  CHECK(a.x != c.x);
}

TEST_CASE("single step preserves all structural invariants") {
  ModelParams p = base_params();
  SignalState st = init_signal(p, 11);
  Rng rng(99);
  auto [next, ts] = step_signal(st, rng);

  CHECK(next.t == st.t + 1);
  CHECK(int(ts.added.size()) == p.sa);
  CHECK(int(ts.removed.size()) == p.sa);
  CHECK(audit_state(next).ok);

  for (int j = 2; j <= p.d; ++j) {
    AuditReport rep = audit_transition(st, next, ts, j);
    INFO("level ", j, ": ", rep.failures.empty() ? "" : rep.failures.front());
    CHECK(rep.ok);
  }
}

TEST_CASE("d=1 edge case: entrants appear at peak, leavers vanish") {
  ModelParams p = base_params();
  p.d = 1;
  SignalState st = init_signal(p, 3);
  CHECK(int(st.con.size()) == p.s0);
  CHECK(st.inc.empty());
  CHECK(st.dec.empty());

  Rng rng(5);
  auto [next, ts] = step_signal(st, rng);
  CHECK(audit_state(next).ok);
  for (int i : ts.added)
    CHECK(std::abs(next.x[i]) == doctest::Approx(p.peak()));
  for (int i : ts.removed) CHECK(next.x[i] == 0.0);
}

TEST_CASE("long runs keep every invariant for several ramp depths") {
  for (int d : {1, 3, 5}) {
    ModelParams p = base_params();
    p.d = d;
    p.r = 3.0 / d;
    SignalState st = init_signal(p, 1000 + d);
    Rng rng(2000 + d);
    for (int t = 0; t < 120; ++t) {
      auto [next, ts] = step_signal(st, rng);
      REQUIRE(audit_state(next).ok);
      for (int j = 2; j <= p.d; ++j) REQUIRE(audit_transition(st, next, ts, j).ok);
      st = next;
    }
  }
}

TEST_CASE("transition audit flags a corrupted transition") {
  ModelParams p = base_params();
  SignalState st = init_signal(p, 21);
  Rng rng(22);
  auto [next, ts] = step_signal(st, rng);

  TransitionSets bad = ts;
  REQUIRE(!bad.added.empty());
  bad.added.erase(bad.added.begin());
  bool any_fail = false;
  for (int j = 2; j <= p.d; ++j)
    if (!audit_transition(st, next, bad, j).ok) any_fail = true;
  CHECK(any_fail);
}

TEST_CASE("small-set membership follows the magnitude level") {
  ModelParams p = base_params();
  SignalState st = init_signal(p, 33);
  for (int j = 1; j <= p.d - 1; ++j)
    CHECK(int(small_set(st, j).size()) == 2 * (j - 1) * p.sa);
}

TEST_CASE("step replay is deterministic") {
  ModelParams p = base_params();
  SignalState a = init_signal(p, 8);
  SignalState b = a;
  Rng r1(77), r2(77);
  for (int t = 0; t < 10; ++t) {
    a = step_signal(a, r1).first;
    b = step_signal(b, r2).first;
  }
  CHECK(a.x == b.x);
}
