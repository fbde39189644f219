// Copyright 2026 The cpjobshop Authors
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


#include <doctest.h>

#include <random>
#include <set>

#include "jobshop/bench.hpp"
#include "jobshop/search.hpp"
#include "test_util.hpp"

using namespace jobshop;

namespace {

SearchConfig quick(SearchMode mode, double seconds = 10.0) {
  SearchConfig cfg = SearchConfig::classic();
  cfg.mode = mode;
  cfg.time_limit = seconds;
  return cfg;
}

void check_trace(const SearchResult& r) {
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    CHECK(r.trace[i].makespan < r.trace[i - 1].makespan);
    CHECK(r.trace[i].time >= r.trace[i - 1].time);
  }
  if (r.incumbent.best) {
    REQUIRE_FALSE(r.trace.empty());
    CHECK(r.trace.back().makespan == r.incumbent.best->makespan);
  }
}

}  // namespace

TEST_CASE("search mode names") {
  for (SearchMode m : {SearchMode::kExact, SearchMode::kLns, SearchMode::kAuto}) {
    CHECK(parse_search_mode(to_string(m)) == m);
  }
  CHECK_THROWS_AS(parse_search_mode("fast"), std::invalid_argument);
}

TEST_CASE("config validation") {
  SearchConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.relax_fraction = 1.5;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.time_limit = 0;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.workers = 0;
  CHECK_THROWS(cfg.validate());
  CHECK(SearchConfig::classic().time_limit == 1200.0);
  CHECK(SearchConfig::large().time_limit == 21600.0);
}

TEST_CASE("shared incumbent accepts strict improvements only") {
  Instance inst("tiny", 1, {Job{{{0, 2}}}, Job{{{0, 3}}}});
  SharedIncumbent shared(lower_bound(inst), Clock::now());
  Solution a = make_solution(inst, {{0}, {4}});
  Solution b = make_solution(inst, {{0}, {2}});
  CHECK(shared.best_makespan() == kNoMakespan);
  CHECK(shared.publish(a, 0));
  CHECK_FALSE(shared.publish(a, 1));
  CHECK(shared.publish(b, 1));
  CHECK(shared.best_makespan() == 5);
  CHECK(shared.done());  // meets the lower bound
  auto trace = shared.trace();
  REQUIRE(trace.size() == 2);
  CHECK(trace[0].makespan == 7);
  CHECK(trace[1].worker == 1);
  CHECK(shared.snapshot().proven);

  SharedIncumbent capped(0, Clock::now(), 6);
  CHECK_FALSE(capped.publish(a, 0));
  CHECK(capped.publish(b, 0));
}

TEST_CASE("SetTimes picks the earliest op") {
  Instance inst("st", 2, {Job{{{0, 3}, {1, 1}}}, Job{{{1, 2}, {0, 2}}}});
  DomainStore store(inst, 20);
  REQUIRE(store.propagate_all());
  SetTimesBrancher br(inst.num_ops());
  Rng rng(1);
  auto d = br.select(store, rng);
  REQUIRE(d.kind == SetTimesBrancher::Decision::Kind::kBranch);
  CHECK(d.start == 0);
  // Both first ops start at 0; the one with the smaller lct goes first.
  CHECK(d.op == 2);
  br.postpone(d.op, d.start);
  CHECK(br.postponed(d.op, store));
  // Op 2 would still end (at 2) before op 1, the other op of its machine,
  // can start (at 3): the postponed branch is dominated.
  d = br.select(store, rng);
  CHECK(d.kind == SetTimesBrancher::Decision::Kind::kDeadEnd);
  REQUIRE(store.tighten_est(2, 1));
  CHECK_FALSE(br.postponed(2, store));
}

TEST_CASE("exact search matches the enumeration oracle") {
  std::mt19937_64 rng(31);
  SearchConfig cfg = quick(SearchMode::kExact, 5.0);
  for (int trial = 0; trial < 150; ++trial) {
    Instance inst = testing::random_instance(rng, 3, 3, 3, 9, trial % 5 == 0);
    const Time opt = brute_force_optimum(inst).makespan;
    SearchResult r = solve_exact(inst, cfg);
    REQUIRE(r.incumbent.best);
    CHECK(r.incumbent.best->makespan == opt);
    CHECK(r.incumbent.proven);
    CHECK(validate_solution(inst, *r.incumbent.best).ok());
    check_trace(r);
  }
}

TEST_CASE("exact search without the optional rules") {
  std::mt19937_64 rng(32);
  SearchConfig cfg = quick(SearchMode::kExact, 5.0);
  cfg.rules = {};
  cfg.shave_depth = -1;
  for (int trial = 0; trial < 60; ++trial) {
    Instance inst = testing::random_instance(rng, 3, 3, 3, 9);
    SearchResult r = solve_exact(inst, cfg);
    REQUIRE(r.incumbent.best);
    CHECK(r.incumbent.best->makespan == brute_force_optimum(inst).makespan);
    CHECK(r.incumbent.proven);
  }
}

TEST_CASE("branch and bound returns the store to the root") {
  Instance inst = testing::classic("ft06");
  DomainStore store(inst, PropagationOptions{{true, true}});
  REQUIRE(store.propagate_all());
  std::vector<Time> est, lst;
  for (int op = 0; op < store.size(); ++op) {
    est.push_back(store.est(op));
    lst.push_back(store.lst(op));
  }
  SharedIncumbent shared(lower_bound(inst), Clock::now());
  Rng rng(1);
  BranchAndBound bb(store, shared, rng, 0);
  SearchLimits limits;
  limits.fail_limit = 50;
  bb.run(limits);
  CHECK(shared.best_makespan() != kNoMakespan);
  for (int op = 0; op < store.size(); ++op) {
    CHECK(store.est(op) == est[op]);
    CHECK(store.lst(op) == lst[op]);
  }
}

TEST_CASE("ft06 is solved and proven in every mode") {
  Instance inst = testing::classic("ft06");
  for (SearchMode mode : {SearchMode::kExact, SearchMode::kAuto}) {
    SearchResult r = solve(inst, quick(mode, 30.0));
    REQUIRE(r.incumbent.best);
    CHECK(r.incumbent.best->makespan == 55);
    CHECK(r.incumbent.proven);
    check_trace(r);
    CHECK(r.stats.time_to_best <= r.stats.wall_time);
  }
  SearchResult r = solve(inst, quick(SearchMode::kLns, 3.0));
  REQUIRE(r.incumbent.best);
  CHECK(validate_solution(inst, *r.incumbent.best).ok());
  CHECK(r.incumbent.best->makespan >= 55);
  check_trace(r);
}

TEST_CASE("single worker runs are reproducible") {
  Instance inst = testing::classic("la01");
  SearchConfig cfg = quick(SearchMode::kAuto, 30.0);
  cfg.seed = 17;
  SearchResult a = solve(inst, cfg);
  SearchResult b = solve(inst, cfg);
  REQUIRE(a.incumbent.best);
  CHECK(a.incumbent.best->makespan == b.incumbent.best->makespan);
  CHECK(a.incumbent.best->starts == b.incumbent.best->starts);
  CHECK(a.stats.nodes == b.stats.nodes);
  CHECK(a.stats.fails == b.stats.fails);
}

TEST_CASE("portfolio results validate") {
  Instance inst = testing::classic("la03");
  SearchConfig cfg = quick(SearchMode::kAuto, 20.0);
  cfg.workers = 3;
  SearchResult r = solve(inst, cfg);
  REQUIRE(r.incumbent.best);
  CHECK(validate_solution(inst, *r.incumbent.best).ok());
  CHECK(r.incumbent.best->makespan >= 597);
  check_trace(r);
  std::set<int> workers;
  for (const auto& p : r.trace) workers.insert(p.worker);
  CHECK(*workers.rbegin() < 3);
}

TEST_CASE("relaxation sizes and neighborhoods") {
  Instance inst = testing::classic("la01");
  SearchResult base = solve(inst, quick(SearchMode::kAuto, 10.0));
  REQUIRE(base.incumbent.best);
  const Solution& sol = *base.incumbent.best;
  Rng rng(5);
  const int n = inst.num_ops();
  CHECK(lns_relax(inst, sol, 0.0, rng).num_relaxed() == 0);
  CHECK(lns_relax(inst, sol, 1.0, rng).num_relaxed() == n);
  for (Neighborhood kind : {Neighborhood::kRandomOps, Neighborhood::kTimeWindow,
                            Neighborhood::kMachines}) {
    for (double f : {0.1, 0.3, 0.6}) {
      PartialAssignment pa = lns_relax(inst, sol, f, kind, rng);
      CHECK(pa.neighborhood == kind);
      const int target = static_cast<int>(std::lround(f * n));
      if (kind == Neighborhood::kMachines) {
        // Whole machines: at least the target, less than one machine more.
        CHECK(pa.num_relaxed() >= target);
        CHECK(pa.num_relaxed() < target + inst.num_jobs());
        for (const auto& ops : inst.machine_ops()) {
          int relaxed = 0;
          for (int op : ops) relaxed += !pa.frozen[op];
          CHECK((relaxed == 0 || relaxed == static_cast<int>(ops.size())));
        }
      } else {
        CHECK(pa.num_relaxed() == target);
      }
      for (int op = 0; op < n; ++op) {
        if (pa.frozen[op]) {
          CHECK(*pa.frozen[op] == sol.starts[inst.job_of(op)][inst.index_of(op)]);
        }
      }
      if (kind == Neighborhood::kTimeWindow) {
        // No frozen start lies strictly between two relaxed ones.
        Time lo = kNoMakespan, hi = -1;
        for (int op = 0; op < n; ++op) {
          if (pa.frozen[op]) continue;
          const Time s = sol.starts[inst.job_of(op)][inst.index_of(op)];
          lo = std::min(lo, s);
          hi = std::max(hi, s);
        }
        for (int op = 0; op < n; ++op) {
          if (pa.frozen[op]) CHECK((*pa.frozen[op] <= lo || *pa.frozen[op] >= hi));
        }
      }
    }
  }
}

TEST_CASE("re-optimizing never loses the incumbent") {
  std::mt19937_64 gen(41);
  Rng rng(6);
  for (int trial = 0; trial < 40; ++trial) {
    Instance inst = testing::random_instance(gen, 5, 4, 4, 9);
    SearchResult base = solve(inst, quick(SearchMode::kLns, 0.05));
    REQUIRE(base.incumbent.best);
    const Solution& sol = *base.incumbent.best;
    for (FreezeMode mode : {FreezeMode::kStartTimes, FreezeMode::kMachineOrder}) {
      for (double f : {0.0, 0.3, 1.0}) {
        PartialAssignment pa = lns_relax(inst, sol, f, rng);
        ReoptimizeResult r = reoptimize(inst, pa, mode, sol.makespan, 1000,
                                        DisjunctiveRules{true, true}, rng);
        REQUIRE(r.best);
        CHECK(r.best->makespan <= sol.makespan);
        CHECK(validate_solution(inst, *r.best).ok());
        if (f == 0.0 && mode == FreezeMode::kStartTimes) {
          CHECK(r.best->starts == sol.starts);
        }
      }
    }
  }
}
