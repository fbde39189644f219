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

#ifndef JOBSHOP_ENGINE_HPP_
#define JOBSHOP_ENGINE_HPP_

#include <cstdint>
#include <vector>

#include "jobshop/disjunctive.hpp"
#include "jobshop/instance.hpp"

namespace jobshop {

// Bounds of one operation's interval [start, start + len). Only est and lst
// are stored; ect and lct are derived, so ect = est + len and
// lct = lst + len hold by construction.
struct IntervalVar {
  Time est = 0;
  Time lst = 0;
  Time len = 1;

  Time ect() const { return est + len; }
  Time lct() const { return lst + len; }
  bool fixed() const { return est == lst; }
};

// The operations posted to one machine's no-overlap constraint.
struct MachinePosting {
  int machine = 0;
  std::vector<int> members;  // op ids
};

struct PropagationOptions {
  DisjunctiveRules rules;
  // 0 processes the propagation queue FIFO. Any other value pops queued
  // propagators in a pseudo-random order derived from it (used to check
  // that the fixpoint does not depend on scheduling order).
  std::uint64_t queue_shuffle_seed = 0;
};

struct PropagationStats {
  std::int64_t precedence_calls = 0;
  std::int64_t disjunctive_calls = 0;
  std::int64_t failures = 0;
};

// Mutable search state for one worker: an IntervalVar per operation, the
// trail used to undo bound changes, and the propagation queue.
class DomainStore {
 public:
  struct Mark {
    std::size_t trail_size = 0;
  };

  // All ops start with est = 0 and lct = horizon.
  DomainStore(const Instance& inst, Time horizon,
              PropagationOptions options = {});
  // Horizon defaults to the sum of all durations, which is always feasible.
  explicit DomainStore(const Instance& inst, PropagationOptions options = {});

  const Instance& instance() const { return *inst_; }
  const PropagationOptions& options() const { return options_; }
  Time horizon() const { return horizon_; }
  int size() const { return static_cast<int>(est_.size()); }

  IntervalVar interval(int op) const { return {est_[op], lst_[op], len_[op]}; }
  Time est(int op) const { return est_[op]; }
  Time lst(int op) const { return lst_[op]; }
  Time ect(int op) const { return est_[op] + len_[op]; }
  Time lct(int op) const { return lst_[op] + len_[op]; }
  Time len(int op) const { return len_[op]; }
  bool fixed(int op) const { return est_[op] == lst_[op]; }
  bool failed() const { return failed_; }
  // Largest ect, i.e. the smallest makespan the current bounds allow.
  Time min_makespan() const;

  const std::vector<MachinePosting>& postings() const { return postings_; }
  const PropagationStats& stats() const { return stats_; }

  // Bound tightenings. A value that does not tighten is ignored. Each call
  // returns false iff the store is (now) failed; changes queue the
  // propagators watching the op.
  bool tighten_est(int op, Time v);
  bool tighten_lst(int op, Time v);
  bool tighten_lct(int op, Time v) { return tighten_lst(op, v - len_[op]); }
  bool fix_start(int op, Time s) { return tighten_est(op, s) && tighten_lst(op, s); }
  // lct <= ub for the last op of every job.
  bool impose_makespan_at_most(Time ub);
  // Marks the store failed (used by search-level dead-end rules).
  void fail();

  // Static arc before -> after (before.end <= after.start), on top of the
  // job chains. Not undone by restore().
  void add_precedence(int before, int after);

  Mark mark();
  // Reproduces the bounds recorded at the mark exactly and clears failure.
  void restore(Mark m);

  // One chain: forward est pass and backward lct pass (a chain fixpoint).
  bool propagate_precedence(int job);
  // Disjunctive filtering of one machine to its local fixpoint.
  bool propagate_disjunctive(const MachinePosting& posting);
  // Propagates every constraint; used after construction.
  bool propagate_all();
  // Runs queued propagators until quiescence or failure.
  bool fixpoint();
  // Shaving: removes start values whose fixing fails at the fixpoint,
  // probing each bound by binary search, repeated until nothing changes.
  // Expects a store at its fixpoint.
  bool shave();

 private:
  struct TrailEntry {
    int op;
    Time est;
    Time lst;
  };
  void save(int op);
  void touched(int op);
  bool propagate_arcs(int op);
  int pop_queue(std::vector<int>& queue);

  const Instance* inst_;
  PropagationOptions options_;
  Time horizon_;
  std::vector<Time> est_;
  std::vector<Time> lst_;
  std::vector<Time> len_;
  std::vector<int> op_machine_;
  std::vector<MachinePosting> postings_;
  std::vector<std::vector<int>> arc_succ_;
  std::vector<std::vector<int>> arc_pred_;
  bool has_arcs_ = false;

  std::vector<TrailEntry> trail_;
  std::vector<std::uint64_t> saved_epoch_;
  std::uint64_t epoch_ = 1;
  bool failed_ = false;

  std::vector<int> job_queue_;
  std::vector<int> machine_queue_;
  std::vector<int> arc_queue_;
  std::vector<char> job_queued_;
  std::vector<char> machine_queued_;
  std::vector<char> arc_queued_;
  std::uint64_t shuffle_state_ = 0;

  DisjunctiveFilter filter_;
  std::vector<TaskWindow> windows_;
  PropagationStats stats_;
};

}  // namespace jobshop

#endif  // JOBSHOP_ENGINE_HPP_
