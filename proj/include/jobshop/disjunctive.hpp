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

#ifndef JOBSHOP_DISJUNCTIVE_HPP_
#define JOBSHOP_DISJUNCTIVE_HPP_

#include <limits>
#include <span>
#include <vector>

#include "jobshop/instance.hpp"

namespace jobshop {

// Time window of one task on a unit-capacity resource. lst = lct - duration.
struct TaskWindow {
  Time est = 0;
  Time lct = 0;
  Time duration = 1;

  Time ect() const { return est + duration; }
  Time lst() const { return lct - duration; }

  friend bool operator==(const TaskWindow&, const TaskWindow&) = default;
};

struct DisjunctiveRules {
  bool edge_finding = false;
  bool not_first_not_last = false;
};

// Balanced binary tree over tasks ordered by est. Each node aggregates the
// total duration and the earliest completion time of the tasks in its
// subtree ("theta" set) and, for edge-finding, the same quantities when at
// most one "lambda" (gray) task is added.
class ThetaLambdaTree {
 public:
  static constexpr Time kMinusInf = std::numeric_limits<Time>::min() / 4;

  // Leaves are laid out by ascending est; all start empty.
  void reset(std::span<const TaskWindow> tasks);
  // Same, with the ascending-est order supplied.
  void reset(std::span<const TaskWindow> tasks, std::span<const int> by_est);
  // Puts every task in theta in linear time.
  void insert_all();
  void insert(int task);         // add to theta
  void make_gray(int task);      // move from theta to lambda
  void remove(int task);         // remove from theta and lambda
  bool in_theta(int task) const { return state_[task] == kWhite; }

  Time ect() const { return nodes_[1].ect; }
  Time sum() const { return nodes_[1].sum; }
  Time ect_bar() const { return gray_ ? nodes_[1].ect_bar : ect(); }
  // Gray task responsible for ect_bar(), or -1.
  int responsible() const { return gray_ ? nodes_[1].resp_ect : -1; }

 private:
  enum State : unsigned char { kEmpty, kWhite, kGray };
  struct Node {
    Time sum = 0;
    Time ect = kMinusInf;
    Time sum_bar = 0;
    Time ect_bar = kMinusInf;
    int resp_sum = -1;
    int resp_ect = -1;
  };
  void set_leaf(int task, State s);
  void write_leaf(int task, State s);
  void pull(int node);

  std::span<const TaskWindow> tasks_;
  std::vector<Node> nodes_;
  std::vector<int> leaf_of_;
  std::vector<State> state_;
  int leaves_ = 1;
  bool gray_ = false;  // lambda values are maintained once a task is gray
};

// Filtering rules for a single no-overlap resource. Every rule is sound: a
// start time that occurs in some feasible sequencing of the tasks is never
// removed. Scratch buffers are reused across calls.
class DisjunctiveFilter {
 public:
  // False when the tasks cannot be sequenced within their windows.
  bool overload_check(std::span<const TaskWindow> tasks);
  // Raises new_est[i] to the completion of the tasks that must precede i
  // because i cannot end before they have to start.
  void detectable_precedences(std::span<const TaskWindow> tasks,
                              std::span<Time> new_est);
  // Lowers new_lct[i] when i cannot be the last of a set of tasks.
  void not_last(std::span<const TaskWindow> tasks, std::span<Time> new_lct);
  // Raises new_est[i] when i must follow a whole set; false on overload.
  bool edge_finding(std::span<const TaskWindow> tasks,
                    std::span<Time> new_est);

  // Runs overload checking and detectable precedences (plus the optional
  // rules) in both time directions until the windows stop changing.
  // Returns false on failure; the windows are then unspecified.
  bool filter(std::span<TaskWindow> tasks, const DisjunctiveRules& rules);

 private:
  // Task indices sorted by each window quantity, ascending.
  struct Orders {
    std::vector<int> est, ect, lst, lct;
    void build(std::span<const TaskWindow> tasks);
    // Orders of the mirrored windows (est' = -lct and so on).
    void mirror_of(const Orders& o);
  };
  bool overload_check(std::span<const TaskWindow> tasks, const Orders& o);
  void detectable_precedences(std::span<const TaskWindow> tasks,
                              const Orders& o, std::span<Time> new_est);
  void not_last(std::span<const TaskWindow> tasks, const Orders& o,
                std::span<Time> new_lct);
  bool edge_finding(std::span<const TaskWindow> tasks, const Orders& o,
                    std::span<Time> new_est);
  bool apply(std::span<TaskWindow> tasks, bool& changed);

  ThetaLambdaTree tree_;
  Orders orders_;
  Orders mirror_orders_;
  std::vector<int> order_a_;
  std::vector<int> order_b_;
  std::vector<TaskWindow> mirror_;
  std::vector<Time> new_est_;
  std::vector<Time> new_lct_;
  std::vector<Time> mirror_est_;
};

}  // namespace jobshop

#endif  // JOBSHOP_DISJUNCTIVE_HPP_
