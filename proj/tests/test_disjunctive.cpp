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

#include "jobshop/disjunctive.hpp"
#include "test_util.hpp"

using namespace jobshop;
using jobshop::testing::pool_oracle;
using jobshop::testing::random_pool;

namespace {

// ect of a task set by definition: max over subsets sharing a start bound.
Time ect_of(const std::vector<TaskWindow>& tasks, const std::vector<int>& set) {
  Time best = ThetaLambdaTree::kMinusInf;
  for (int a : set) {
    Time sum = 0;
    for (int b : set) {
      if (tasks[b].est >= tasks[a].est) sum += tasks[b].duration;
    }
    best = std::max(best, tasks[a].est + sum);
  }
  return best;
}

const DisjunctiveRules kAllRules{true, true};

}  // namespace

TEST_CASE("theta tree ect matches the definition") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    auto tasks = random_pool(rng, 9, 40, 10);
    ThetaLambdaTree tree;
    tree.reset(tasks);
    std::vector<int> in;
    for (int i = 0; i < static_cast<int>(tasks.size()); ++i) {
      if (rng() % 3 == 0) continue;
      tree.insert(i);
      in.push_back(i);
      CHECK(tree.ect() == ect_of(tasks, in));
    }
    if (in.empty()) continue;
    // ect_bar: best ect obtained by adding one gray task.
    const int gray = in.back();
    in.pop_back();
    tree.make_gray(gray);
    CHECK(tree.ect() == (in.empty() ? ThetaLambdaTree::kMinusInf
                                    : ect_of(tasks, in)));
    auto with = in;
    with.push_back(gray);
    const Time expect_bar = ect_of(tasks, with);
    CHECK(tree.ect_bar() == std::max(expect_bar, tree.ect()));
    if (tree.ect_bar() > tree.ect()) CHECK(tree.responsible() == gray);
  }
}

TEST_CASE("overload check on a tight pool") {
  DisjunctiveFilter f;
  std::vector<TaskWindow> ok{{0, 5, 2}, {0, 5, 3}};
  std::vector<TaskWindow> bad{{0, 5, 3}, {0, 5, 3}};
  CHECK(f.overload_check(ok));
  CHECK_FALSE(f.overload_check(bad));
}

TEST_CASE("detectable precedence pushes the later task") {
  // b cannot finish before a must start, so a precedes b.
  std::vector<TaskWindow> tasks{{0, 4, 4}, {1, 20, 3}};
  DisjunctiveFilter f;
  std::vector<Time> est{0, 1};
  f.detectable_precedences(tasks, est);
  CHECK(est[1] == 4);
  CHECK(est[0] == 0);
}

TEST_CASE("edge finding finds a task that must go last") {
  // Classic example: a and b fill [0, 11) almost fully, c must come after.
  std::vector<TaskWindow> tasks{{0, 11, 5}, {1, 11, 5}, {0, 25, 3}};
  DisjunctiveFilter f;
  std::vector<Time> est{0, 1, 0};
  REQUIRE(f.edge_finding(tasks, est));
  CHECK(est[2] == 10);
}

TEST_CASE("not-last lowers the deadline") {
  // c cannot be last after a and b: lst(c) = 9 < ect({a, b}) = 10.
  std::vector<TaskWindow> tasks{{0, 13, 5}, {0, 14, 5}, {6, 12, 3}};
  DisjunctiveFilter f;
  std::vector<Time> lct{13, 14, 12};
  f.not_last(tasks, lct);
  CHECK(lct[2] == 9);  // before the later of lst(a) = 8, lst(b) = 9
}

TEST_CASE("filter never loses a feasible start") {
  std::mt19937_64 rng(5);
  int feasible_pools = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    auto tasks = random_pool(rng, 7, 30, 9);
    const auto oracle = pool_oracle(tasks);
    for (DisjunctiveRules rules :
         {DisjunctiveRules{}, DisjunctiveRules{true, false},
          DisjunctiveRules{false, true}, kAllRules}) {
      auto w = tasks;
      DisjunctiveFilter f;
      const bool ok = f.filter(w, rules);
      if (!oracle.feasible) continue;
      REQUIRE(ok);
      for (std::size_t i = 0; i < w.size(); ++i) {
        CHECK(w[i].est <= oracle.min_start[i]);
        CHECK(w[i].lst() >= oracle.max_start[i]);
      }
    }
    feasible_pools += oracle.feasible;
  }
  CHECK(feasible_pools > 500);
}

TEST_CASE("filter is idempotent and only shrinks windows") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 2000; ++trial) {
    auto tasks = random_pool(rng, 8, 40, 9);
    auto w = tasks;
    DisjunctiveFilter f;
    if (!f.filter(w, kAllRules)) continue;
    for (std::size_t i = 0; i < w.size(); ++i) {
      CHECK(w[i].est >= tasks[i].est);
      CHECK(w[i].lct <= tasks[i].lct);
      CHECK(w[i].ect() <= w[i].lct);
    }
    auto again = w;
    REQUIRE(f.filter(again, kAllRules));
    CHECK(again == w);
  }
}

TEST_CASE("fixed disjoint tasks pass unchanged") {
  std::vector<TaskWindow> w{{0, 3, 3}, {3, 5, 2}, {7, 8, 1}};
  auto before = w;
  DisjunctiveFilter f;
  CHECK(f.filter(w, kAllRules));
  CHECK(w == before);
  std::vector<TaskWindow> clash{{0, 3, 3}, {2, 4, 2}};
  CHECK_FALSE(f.filter(clash, kAllRules));
}
