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


// Helpers shared by the unit tests and the acceptance binary.

#ifndef JOBSHOP_TESTS_TEST_UTIL_HPP_
#define JOBSHOP_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <random>
#include <vector>

#include "jobshop/disjunctive.hpp"
#include "jobshop/instance.hpp"

namespace jobshop::testing {

inline std::filesystem::path data_dir() { return JOBSHOP_DATA_DIR; }

inline Instance classic(const std::string& name) {
  return read_instance_file(data_dir() / "classic" / (name + ".jss"));
}

// Random instance: each job visits a random sequence of machines, possibly
// with repeats when allow_recirculation is set.
inline Instance random_instance(std::mt19937_64& rng, int max_jobs,
                                int max_machines, int max_ops_per_job,
                                Time max_duration,
                                bool allow_recirculation = false) {
  std::uniform_int_distribution<int> njobs(1, max_jobs);
  std::uniform_int_distribution<int> nmach(1, max_machines);
  std::uniform_int_distribution<Time> dur(1, max_duration);
  const int m = nmach(rng);
  const int n = njobs(rng);
  std::vector<Job> jobs(n);
  for (Job& job : jobs) {
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const int cap = allow_recirculation ? max_ops_per_job
                                        : std::min(max_ops_per_job, m);
    const int k = std::uniform_int_distribution<int>(1, cap)(rng);
    for (int i = 0; i < k; ++i) {
      const int machine =
          allow_recirculation
              ? std::uniform_int_distribution<int>(0, m - 1)(rng)
              : order[i];
      job.ops.push_back({machine, dur(rng)});
    }
  }
  return Instance("random", m, std::move(jobs));
}

// Exhaustive check of one machine pool. For each permutation that fits the
// windows, the starts a task can take form the interval between its
// earliest and latest timing of that order; min_start and max_start are the
// extremes over all fitting permutations. Bounds filtering may only shrink
// windows, so it is sound iff it keeps est <= min_start and
// lst >= max_start.
struct PoolOracle {
  bool feasible = false;
  std::vector<Time> min_start;  // earliest start in any feasible schedule
  std::vector<Time> max_start;  // latest start in any feasible schedule
};

inline PoolOracle pool_oracle(const std::vector<TaskWindow>& tasks) {
  const int n = static_cast<int>(tasks.size());
  PoolOracle out;
  out.min_start.assign(n, std::numeric_limits<Time>::max());
  out.max_start.assign(n, std::numeric_limits<Time>::min());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Time> early(n), late(n);
  do {
    // Earliest timing of this order.
    Time t = std::numeric_limits<Time>::min();
    bool ok = true;
    for (int k = 0; k < n && ok; ++k) {
      const TaskWindow& w = tasks[perm[k]];
      const Time s = std::max(t, w.est);
      if (s + w.duration > w.lct) ok = false;
      early[perm[k]] = s;
      t = s + w.duration;
    }
    if (!ok) continue;
    // Latest timing of the same order.
    t = std::numeric_limits<Time>::max();
    for (int k = n - 1; k >= 0; --k) {
      const TaskWindow& w = tasks[perm[k]];
      const Time e = std::min(t, w.lct);
      late[perm[k]] = e - w.duration;
      t = late[perm[k]];
    }
    out.feasible = true;
    for (int i = 0; i < n; ++i) {
      out.min_start[i] = std::min(out.min_start[i], early[i]);
      out.max_start[i] = std::max(out.max_start[i], late[i]);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

inline std::vector<TaskWindow> random_pool(std::mt19937_64& rng, int max_ops,
                                           Time horizon, Time max_duration) {
  const int n = std::uniform_int_distribution<int>(1, max_ops)(rng);
  std::vector<TaskWindow> tasks(n);
  for (TaskWindow& t : tasks) {
    t.duration = std::uniform_int_distribution<Time>(1, max_duration)(rng);
    const Time a = std::uniform_int_distribution<Time>(0, horizon)(rng);
    const Time b = std::uniform_int_distribution<Time>(0, horizon)(rng);
    t.est = std::min(a, b);
    t.lct = std::max(a, b) + t.duration;
  }
  return tasks;
}

}  // namespace jobshop::testing

#endif  // JOBSHOP_TESTS_TEST_UTIL_HPP_
