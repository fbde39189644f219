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

#include "jobshop/disjunctive.hpp"

#include <algorithm>
#include <numeric>

namespace jobshop {

namespace {

// Insertion sort; the task sets on one machine are small.
template <class Key>
void sort_by(std::vector<int>& order, int n, Key key) {
  order.resize(n);
  for (int i = 0; i < n; ++i) {
    const int v = i;
    const Time k = key(v);
    int j = i;
    while (j > 0 && key(order[j - 1]) > k) {
      order[j] = order[j - 1];
      --j;
    }
    order[j] = v;
  }
}

}  // namespace

void ThetaLambdaTree::reset(std::span<const TaskWindow> tasks) {
  std::vector<int> order;
  sort_by(order, static_cast<int>(tasks.size()),
          [&](int a) { return tasks[a].est; });
  reset(tasks, order);
}

void ThetaLambdaTree::reset(std::span<const TaskWindow> tasks,
                            std::span<const int> by_est) {
  tasks_ = tasks;
  const int n = static_cast<int>(tasks.size());
  leaves_ = 1;
  while (leaves_ < n) leaves_ *= 2;
  if (nodes_.size() < static_cast<std::size_t>(2 * leaves_)) {
    nodes_.resize(2 * leaves_);
  }
  std::fill(nodes_.begin(), nodes_.begin() + 2 * leaves_, Node{});
  state_.assign(n, kEmpty);
  gray_ = false;
  leaf_of_.resize(n);
  for (int pos = 0; pos < n; ++pos) leaf_of_[by_est[pos]] = pos;
}

void ThetaLambdaTree::insert_all() {
  const int n = static_cast<int>(tasks_.size());
  for (int t = 0; t < n; ++t) write_leaf(t, kWhite);
  for (int node = leaves_ - 1; node >= 1; --node) pull(node);
}

void ThetaLambdaTree::insert(int task) { set_leaf(task, kWhite); }
void ThetaLambdaTree::make_gray(int task) {
  if (!gray_) {
    // Bring the lambda values in line with theta before the first gray.
    gray_ = true;
    for (int node = leaves_ - 1; node >= 1; --node) pull(node);
  }
  set_leaf(task, kGray);
}
void ThetaLambdaTree::remove(int task) { set_leaf(task, kEmpty); }

void ThetaLambdaTree::write_leaf(int task, State s) {
  state_[task] = s;
  const TaskWindow& t = tasks_[task];
  Node& leaf = nodes_[leaves_ + leaf_of_[task]];
  leaf = Node{};
  if (s == kWhite) {
    leaf.sum = leaf.sum_bar = t.duration;
    leaf.ect = leaf.ect_bar = t.est + t.duration;
  } else if (s == kGray) {
    leaf.sum_bar = t.duration;
    leaf.ect_bar = t.est + t.duration;
    leaf.resp_sum = leaf.resp_ect = task;
  }
}

void ThetaLambdaTree::set_leaf(int task, State s) {
  write_leaf(task, s);
  for (int node = (leaves_ + leaf_of_[task]) / 2; node >= 1; node /= 2) {
    pull(node);
  }
}

void ThetaLambdaTree::pull(int node) {
  const Node& l = nodes_[2 * node];
  const Node& r = nodes_[2 * node + 1];
  Node& p = nodes_[node];
  p.sum = l.sum + r.sum;
  p.ect = std::max(r.ect, l.ect + r.sum);
  if (!gray_) return;

  // Ties prefer the candidate carrying a gray task so that responsible()
  // is always set when ect_bar exceeds ect.
  auto better = [](Time a, int ra, Time b, int rb) {
    return a > b || (a == b && ra >= 0 && rb < 0);
  };
  {
    Time a = l.sum_bar + r.sum;
    Time b = l.sum + r.sum_bar;
    if (better(a, l.resp_sum, b, r.resp_sum)) {
      p.sum_bar = a;
      p.resp_sum = l.resp_sum;
    } else {
      p.sum_bar = b;
      p.resp_sum = r.resp_sum;
    }
  }
  Time best = r.ect_bar;
  int resp = r.resp_ect;
  Time c2 = l.ect + r.sum_bar;
  if (better(c2, r.resp_sum, best, resp)) {
    best = c2;
    resp = r.resp_sum;
  }
  Time c3 = l.ect_bar + r.sum;
  if (better(c3, l.resp_ect, best, resp)) {
    best = c3;
    resp = l.resp_ect;
  }
  p.ect_bar = best;
  p.resp_ect = resp;
}

void DisjunctiveFilter::Orders::build(std::span<const TaskWindow> tasks) {
  const int n = static_cast<int>(tasks.size());
  sort_by(est, n, [&](int a) { return tasks[a].est; });
  sort_by(ect, n, [&](int a) { return tasks[a].ect(); });
  sort_by(lst, n, [&](int a) { return tasks[a].lst(); });
  sort_by(lct, n, [&](int a) { return tasks[a].lct; });
}

void DisjunctiveFilter::Orders::mirror_of(const Orders& o) {
  est.assign(o.lct.rbegin(), o.lct.rend());
  ect.assign(o.lst.rbegin(), o.lst.rend());
  lst.assign(o.ect.rbegin(), o.ect.rend());
  lct.assign(o.est.rbegin(), o.est.rend());
}

bool DisjunctiveFilter::overload_check(std::span<const TaskWindow> tasks) {
  orders_.build(tasks);
  return overload_check(tasks, orders_);
}

void DisjunctiveFilter::detectable_precedences(std::span<const TaskWindow> tasks,
                                               std::span<Time> new_est) {
  orders_.build(tasks);
  detectable_precedences(tasks, orders_, new_est);
}

void DisjunctiveFilter::not_last(std::span<const TaskWindow> tasks,
                                 std::span<Time> new_lct) {
  orders_.build(tasks);
  not_last(tasks, orders_, new_lct);
}

bool DisjunctiveFilter::edge_finding(std::span<const TaskWindow> tasks,
                                     std::span<Time> new_est) {
  orders_.build(tasks);
  return edge_finding(tasks, orders_, new_est);
}

bool DisjunctiveFilter::overload_check(std::span<const TaskWindow> tasks,
                                       const Orders& o) {
  tree_.reset(tasks, o.est);
  for (int j : o.lct) {
    tree_.insert(j);
    if (tree_.ect() > tasks[j].lct) return false;
  }
  return true;
}

void DisjunctiveFilter::detectable_precedences(std::span<const TaskWindow> tasks,
                                               const Orders& o,
                                               std::span<Time> new_est) {
  const int n = static_cast<int>(tasks.size());
  tree_.reset(tasks, o.est);
  int q = 0;
  for (int i : o.ect) {
    while (q < n && tasks[i].ect() > tasks[o.lst[q]].lst()) {
      tree_.insert(o.lst[q]);
      ++q;
    }
    const bool had = tree_.in_theta(i);
    if (had) tree_.remove(i);
    new_est[i] = std::max(new_est[i], tree_.ect());
    if (had) tree_.insert(i);
  }
}

void DisjunctiveFilter::not_last(std::span<const TaskWindow> tasks,
                                 const Orders& o, std::span<Time> new_lct) {
  const int n = static_cast<int>(tasks.size());
  tree_.reset(tasks, o.est);
  int q = 0;
  for (int i : o.lct) {
    while (q < n && tasks[i].lct > tasks[o.lst[q]].lst()) {
      tree_.insert(o.lst[q]);
      ++q;
    }
    const bool had = tree_.in_theta(i);
    if (had) tree_.remove(i);
    if (tree_.ect() > tasks[i].lst()) {
      // Largest lst among theta \ {i}; theta is a prefix of o.lst.
      int last = o.lst[q - 1];
      if (last == i) last = o.lst[q - 2];
      new_lct[i] = std::min(new_lct[i], tasks[last].lst());
    }
    if (had) tree_.insert(i);
  }
}

bool DisjunctiveFilter::edge_finding(std::span<const TaskWindow> tasks,
                                     const Orders& o,
                                     std::span<Time> new_est) {
  const int n = static_cast<int>(tasks.size());
  if (n == 0) return true;
  tree_.reset(tasks, o.est);
  tree_.insert_all();
  int j = o.lct[n - 1];
  for (int q = n - 2; q >= 0; --q) {
    if (tree_.ect() > tasks[j].lct) return false;
    tree_.make_gray(j);
    j = o.lct[q];
    while (tree_.ect_bar() > tasks[j].lct) {
      int i = tree_.responsible();
      if (i < 0) break;
      new_est[i] = std::max(new_est[i], tree_.ect());
      tree_.remove(i);
    }
  }
  return tree_.ect() <= tasks[j].lct;
}

bool DisjunctiveFilter::apply(std::span<TaskWindow> tasks, bool& changed) {
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (new_est_[i] > tasks[i].est) {
      tasks[i].est = new_est_[i];
      changed = true;
    }
    if (new_lct_[i] < tasks[i].lct) {
      tasks[i].lct = new_lct_[i];
      changed = true;
    }
    if (tasks[i].est + tasks[i].duration > tasks[i].lct) return false;
  }
  return true;
}

bool DisjunctiveFilter::filter(std::span<TaskWindow> tasks,
                               const DisjunctiveRules& rules) {
  const std::size_t n = tasks.size();
  for (const TaskWindow& t : tasks) {
    if (t.est + t.duration > t.lct) return false;
  }
  if (n <= 1) return true;
  new_est_.resize(n);
  new_lct_.resize(n);
  mirror_.resize(n);
  mirror_est_.resize(n);
  while (true) {
    orders_.build(tasks);
    if (!overload_check(tasks, orders_)) return false;
    mirror_orders_.mirror_of(orders_);
    for (std::size_t i = 0; i < n; ++i) {
      new_est_[i] = tasks[i].est;
      new_lct_[i] = tasks[i].lct;
      mirror_[i] = {-tasks[i].lct, -tasks[i].est, tasks[i].duration};
      mirror_est_[i] = mirror_[i].est;
    }
    detectable_precedences(tasks, orders_, new_est_);
    detectable_precedences(mirror_, mirror_orders_, mirror_est_);
    if (rules.edge_finding) {
      if (!edge_finding(tasks, orders_, new_est_)) return false;
      if (!edge_finding(mirror_, mirror_orders_, mirror_est_)) return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
      new_lct_[i] = std::min(new_lct_[i], -mirror_est_[i]);
    }
    if (rules.not_first_not_last) {
      not_last(tasks, orders_, new_lct_);
      // Not-last on the mirrored windows is not-first on the originals.
      for (std::size_t i = 0; i < n; ++i) mirror_est_[i] = mirror_[i].lct;
      not_last(mirror_, mirror_orders_, mirror_est_);
      for (std::size_t i = 0; i < n; ++i) {
        new_est_[i] = std::max(new_est_[i], -mirror_est_[i]);
      }
    }
    bool changed = false;
    if (!apply(tasks, changed)) return false;
    if (!changed) return true;
  }
}

}  // namespace jobshop
