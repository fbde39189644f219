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

#ifndef JOBSHOP_SEARCH_HPP_
#define JOBSHOP_SEARCH_HPP_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "jobshop/engine.hpp"
#include "jobshop/instance.hpp"

namespace jobshop {

using Rng = std::mt19937_64;
using Clock = std::chrono::steady_clock;

inline constexpr Time kNoMakespan = std::numeric_limits<Time>::max();

enum class SearchMode { kExact, kLns, kAuto };

std::string_view to_string(SearchMode mode);
SearchMode parse_search_mode(std::string_view text);

struct SearchConfig {
  double time_limit = 1200.0;  // seconds
  int workers = 1;
  std::uint64_t seed = 1;
  SearchMode mode = SearchMode::kAuto;
  std::int64_t lns_fail_limit = 200;
  double relax_fraction = 0.15;
  // Auto mode leaves the initial branch-and-bound after this many nodes
  // without improvement (once a first solution exists).
  std::int64_t lns_trigger_nodes = 5000;
  // Auto mode leaves LNS for a complete proof search after this many
  // consecutive non-improving iterations. The proof search gets this many
  // fails, doubled on every later round, before LNS resumes. With several
  // workers only worker 0 does this; the rest stay on LNS.
  std::int64_t lns_stall_iterations = 400;
  std::int64_t proof_fail_budget = 5000;
  // Complete searches shave bounds at nodes up to this depth (-1: never),
  // on instances with at most shave_max_ops operations.
  int shave_depth = 20;
  int shave_max_ops = 400;
  DisjunctiveRules rules;

  // 20 minutes per instance, the classic-benchmark protocol.
  static SearchConfig classic();
  // 6 hours per instance, the large-scale protocol.
  static SearchConfig large();

  // Throws std::invalid_argument on out-of-range fields.
  void validate() const;
  // Short stable description, e.g. "auto-w1-s1-t1200".
  std::string digest() const;
};

struct Incumbent {
  std::optional<Solution> best;
  Time bound = 0;
  bool proven = false;
};

struct SearchStats {
  std::int64_t nodes = 0;
  std::int64_t fails = 0;
  std::int64_t lns_iterations = 0;
  double wall_time = 0.0;
  double time_to_best = 0.0;
};

struct TracePoint {
  double time = 0.0;
  Time makespan = 0;
  int worker = 0;
};

struct SearchResult {
  Incumbent incumbent;
  SearchStats stats;
  // Every successful publication, in order.
  std::vector<TracePoint> trace;
};

// Incumbent shared by the workers of one solve. A publication succeeds only
// when strictly better than the current best, so readers may see a stale
// value but never a worse or invalid one.
class SharedIncumbent {
 public:
  // Only solutions with makespan < ceiling are accepted.
  SharedIncumbent(Time lower_bound, Clock::time_point start,
                  Time ceiling = kNoMakespan);

  bool publish(const Solution& sol, int worker);
  Time best_makespan() const { return best_.load(std::memory_order_acquire); }
  Time bound() const { return bound_.load(std::memory_order_acquire); }
  // Records that no solution better than the current best exists.
  void mark_proven();
  bool proven() const { return proven_.load(std::memory_order_acquire); }
  // Proven, or the best meets the lower bound.
  bool done() const;
  void request_stop() { stop_.store(true, std::memory_order_release); }
  bool stop_requested() const;

  std::optional<Solution> best_solution() const;
  Incumbent snapshot() const;
  std::vector<TracePoint> trace() const;
  double time_to_best() const;

 private:
  mutable std::mutex mu_;
  std::atomic<Time> best_{kNoMakespan};
  std::atomic<Time> bound_;
  std::atomic<bool> proven_{false};
  std::atomic<bool> stop_{false};
  std::optional<Solution> best_solution_;
  std::vector<TracePoint> trace_;
  Clock::time_point start_;
  double time_to_best_ = 0.0;
};

// SetTimes branching. The selected op is an unscheduled, selectable op with
// minimal est (ties: minimal lct, then machine index, then a seeded coin).
// The left branch starts it at its est; the right branch postpones it until
// propagation raises its est.
class SetTimesBrancher {
 public:
  struct Decision {
    enum class Kind { kBranch, kAllScheduled, kDeadEnd };
    Kind kind = Kind::kAllScheduled;
    int op = -1;
    Time start = 0;
  };

  explicit SetTimesBrancher(int num_ops);

  Decision select(const DomainStore& store, Rng& rng) const;
  void postpone(int op, Time est);
  bool postponed(int op, const DomainStore& store) const;
  std::size_t mark() const { return trail_.size(); }
  void restore(std::size_t mark);

 private:
  std::vector<Time> postponed_at_;  // -1 when not postponed
  std::vector<std::pair<int, Time>> trail_;
  // Smallest and second smallest est of unscheduled ops on a machine.
  struct MachineMin {
    Time first = std::numeric_limits<Time>::max();
    Time second = std::numeric_limits<Time>::max();
    int first_op = -1;
  };
  mutable std::vector<MachineMin> machine_min_;
};

// Free-function form of SetTimesBrancher::select.
SetTimesBrancher::Decision branch_set_times(const DomainStore& store,
                                            const SetTimesBrancher& brancher,
                                            Rng& rng);

struct SearchLimits {
  Clock::time_point deadline = Clock::time_point::max();
  std::int64_t fail_limit = std::numeric_limits<std::int64_t>::max();
  // Stop after this many nodes without an improving solution, counted from
  // the first solution.
  std::int64_t stall_nodes = std::numeric_limits<std::int64_t>::max();
  // Nodes at depth <= shave_depth are shaved after propagation (-1: none).
  int shave_depth = -1;
};

enum class SearchOutcome { kExhausted, kLimitReached, kStopped };

// Depth-first branch-and-bound over one store. Each solution found is
// published and the makespan bound becomes best - 1 (the shared best, which
// other workers may improve concurrently).
class BranchAndBound {
 public:
  BranchAndBound(DomainStore& store, SharedIncumbent& shared, Rng& rng,
                 int worker);

  SearchOutcome run(const SearchLimits& limits);

  std::int64_t nodes() const { return nodes_; }
  std::int64_t fails() const { return fails_; }
  int solutions() const { return solutions_; }

 private:
  bool apply_bound();
  Solution extract() const;

  DomainStore& store_;
  SharedIncumbent& shared_;
  Rng& rng_;
  int worker_;
  SetTimesBrancher brancher_;
  std::int64_t nodes_ = 0;
  std::int64_t fails_ = 0;
  int solutions_ = 0;
};

// Exact branch-and-bound; proven when the tree is exhausted or the
// incumbent meets lower_bound(inst). Single worker; cfg.workers is ignored.
SearchResult solve_exact(const Instance& inst, const SearchConfig& cfg);

enum class Neighborhood { kRandomOps, kTimeWindow, kMachines };

// Ops keep the start of the incumbent when frozen (engaged optional).
struct PartialAssignment {
  Neighborhood neighborhood = Neighborhood::kRandomOps;
  std::vector<std::optional<Time>> frozen;  // by op id

  int num_relaxed() const;
};

// Picks one of the three neighborhoods uniformly and unfreezes about
// relax_fraction of the ops.
PartialAssignment lns_relax(const Instance& inst, const Solution& sol,
                            double relax_fraction, Rng& rng);
PartialAssignment lns_relax(const Instance& inst, const Solution& sol,
                            double relax_fraction, Neighborhood kind, Rng& rng);

enum class FreezeMode {
  // Frozen ops keep their start times.
  kStartTimes,
  // Frozen ops keep their relative order on each machine and may shift.
  kMachineOrder,
};

struct ReoptimizeResult {
  std::optional<Solution> best;  // best solution found in the sub-problem
  SearchOutcome outcome = SearchOutcome::kExhausted;
  std::int64_t nodes = 0;
  std::int64_t fails = 0;
};

// Re-optimizes the unfrozen part under makespan <= bound with a fail limit.
ReoptimizeResult reoptimize(const Instance& inst, const PartialAssignment& pa,
                            FreezeMode mode, Time bound,
                            std::int64_t fail_limit,
                            const DisjunctiveRules& rules, Rng& rng,
                            Clock::time_point deadline = Clock::time_point::max());

// Full solver: exact, LNS or auto mode with cfg.workers seeded workers
// sharing one incumbent. With workers == 1 everything runs on the calling
// thread and the result is reproducible for a fixed seed.
SearchResult solve(const Instance& inst, const SearchConfig& cfg);

}  // namespace jobshop

#endif  // JOBSHOP_SEARCH_HPP_
