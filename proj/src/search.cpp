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

#include "jobshop/search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace jobshop {

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Clock::time_point deadline_after(Clock::time_point start, double seconds) {
  auto d = std::chrono::duration_cast<Clock::duration>(
      std::chrono::duration<double>(seconds));
  return start + d;
}

// Relax-fraction multipliers that diversify portfolio workers.
constexpr double kRelaxFactors[] = {1.0, 0.7, 1.4, 1.15, 0.85, 1.6, 0.55, 1.3};
constexpr double kMinRelax = 0.02;
constexpr double kMaxRelax = 0.9;

}  // namespace

std::string_view to_string(SearchMode mode) {
  switch (mode) {
    case SearchMode::kExact: return "exact";
    case SearchMode::kLns: return "lns";
    case SearchMode::kAuto: return "auto";
  }
  return "auto";
}

SearchMode parse_search_mode(std::string_view text) {
  if (text == "exact") return SearchMode::kExact;
  if (text == "lns") return SearchMode::kLns;
  if (text == "auto") return SearchMode::kAuto;
  throw std::invalid_argument("unknown search mode '" + std::string(text) + "'");
}

SearchConfig SearchConfig::classic() {
  SearchConfig cfg;
  cfg.time_limit = 1200.0;
  cfg.rules.edge_finding = true;
  cfg.rules.not_first_not_last = true;
  return cfg;
}

SearchConfig SearchConfig::large() {
  SearchConfig cfg;
  cfg.time_limit = 21600.0;
  return cfg;
}

void SearchConfig::validate() const {
  if (!(time_limit > 0)) throw std::invalid_argument("time limit must be > 0");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (!(relax_fraction >= 0.0 && relax_fraction <= 1.0)) {
    throw std::invalid_argument("relax fraction must be in [0, 1]");
  }
  if (lns_fail_limit < 1) throw std::invalid_argument("lns fail limit must be >= 1");
  if (shave_depth < -1) throw std::invalid_argument("shave depth must be >= -1");
  if (proof_fail_budget < 1) throw std::invalid_argument("proof fail budget must be >= 1");
  if (lns_trigger_nodes < 0 || lns_stall_iterations < 0) {
    throw std::invalid_argument("node and iteration budgets must be >= 0");
  }
}

std::string SearchConfig::digest() const {
  std::ostringstream out;
  out << to_string(mode) << "-w" << workers << "-s" << seed << "-t" << time_limit;
  if (rules.edge_finding) out << "-ef";
  if (rules.not_first_not_last) out << "-nfnl";
  if (shave_depth >= 0) out << "-sh" << shave_depth;
  return out.str();
}

SharedIncumbent::SharedIncumbent(Time lower_bound, Clock::time_point start,
                                 Time ceiling)
    : best_(ceiling), bound_(lower_bound), start_(start) {}

bool SharedIncumbent::publish(const Solution& sol, int worker) {
  std::lock_guard lock(mu_);
  if (sol.makespan >= best_.load(std::memory_order_relaxed)) return false;
  best_solution_ = sol;
  time_to_best_ = seconds_since(start_);
  trace_.push_back({time_to_best_, sol.makespan, worker});
  best_.store(sol.makespan, std::memory_order_release);
  return true;
}

void SharedIncumbent::mark_proven() {
  std::lock_guard lock(mu_);
  if (best_solution_) bound_.store(best_solution_->makespan);
  proven_.store(true, std::memory_order_release);
}

bool SharedIncumbent::done() const {
  return proven() || best_makespan() <= bound();
}

bool SharedIncumbent::stop_requested() const {
  return stop_.load(std::memory_order_acquire);
}

std::optional<Solution> SharedIncumbent::best_solution() const {
  std::lock_guard lock(mu_);
  return best_solution_;
}

Incumbent SharedIncumbent::snapshot() const {
  std::lock_guard lock(mu_);
  Incumbent inc;
  inc.best = best_solution_;
  inc.bound = bound_.load();
  inc.proven = best_solution_.has_value() &&
               (proven_.load() || best_solution_->makespan <= inc.bound);
  if (inc.proven) inc.bound = best_solution_->makespan;
  return inc;
}

std::vector<TracePoint> SharedIncumbent::trace() const {
  std::lock_guard lock(mu_);
  return trace_;
}

double SharedIncumbent::time_to_best() const {
  std::lock_guard lock(mu_);
  return time_to_best_;
}

SetTimesBrancher::SetTimesBrancher(int num_ops) : postponed_at_(num_ops, -1) {}

void SetTimesBrancher::postpone(int op, Time est) {
  trail_.emplace_back(op, postponed_at_[op]);
  postponed_at_[op] = est;
}

bool SetTimesBrancher::postponed(int op, const DomainStore& store) const {
  return postponed_at_[op] >= 0 && store.est(op) <= postponed_at_[op];
}

void SetTimesBrancher::restore(std::size_t mark) {
  while (trail_.size() > mark) {
    postponed_at_[trail_.back().first] = trail_.back().second;
    trail_.pop_back();
  }
}

SetTimesBrancher::Decision SetTimesBrancher::select(const DomainStore& store,
                                                    Rng& rng) const {
  using Kind = Decision::Kind;
  const Instance& inst = store.instance();
  std::vector<MachineMin>& mins = machine_min_;
  mins.assign(inst.num_machines(), MachineMin{});
  int best = -1;
  std::uint64_t ties = 0;
  bool any_waiting = false;
  bool unscheduled = false;
  for (int op = 0; op < store.size(); ++op) {
    const bool waiting = postponed(op, store);
    if (store.fixed(op)) {
      // Propagation pinned a postponed op to the start it was refused.
      if (waiting) return {Kind::kDeadEnd};
      continue;
    }
    unscheduled = true;
    MachineMin& mm = mins[inst.op(op).machine];
    const Time e = store.est(op);
    if (e < mm.first) {
      mm.second = mm.first;
      mm.first = e;
      mm.first_op = op;
    } else if (e < mm.second) {
      mm.second = e;
    }
    if (waiting) {
      any_waiting = true;
      continue;
    }
    if (best < 0) {
      best = op;
      ties = 1;
      continue;
    }
    auto key = [&](int o) {
      return std::tuple(store.est(o), store.lct(o), inst.op(o).machine);
    };
    auto a = key(op);
    auto b = key(best);
    if (a < b) {
      best = op;
      ties = 1;
    } else if (a == b) {
      ++ties;
      if (rng() % ties == 0) best = op;
    }
  }
  if (best < 0) return {unscheduled ? Kind::kDeadEnd : Kind::kAllScheduled};
  if (any_waiting) {
    // A postponed op that would still complete before every other
    // unscheduled op of its machine can start is dominated: moving it back
    // to the refused start keeps any completion of this node feasible and
    // no worse, and that schedule lies in the left branch already explored.
    for (int op = 0; op < store.size(); ++op) {
      if (store.fixed(op) || !postponed(op, store)) continue;
      const MachineMin& mm = mins[inst.op(op).machine];
      const Time others = mm.first_op == op ? mm.second : mm.first;
      if (store.ect(op) <= others) return {Kind::kDeadEnd};
    }
  }
  return {Kind::kBranch, best, store.est(best)};
}

SetTimesBrancher::Decision branch_set_times(const DomainStore& store,
                                            const SetTimesBrancher& brancher,
                                            Rng& rng) {
  return brancher.select(store, rng);
}

BranchAndBound::BranchAndBound(DomainStore& store, SharedIncumbent& shared,
                               Rng& rng, int worker)
    : store_(store),
      shared_(shared),
      rng_(rng),
      worker_(worker),
      brancher_(store.size()) {}

bool BranchAndBound::apply_bound() {
  Time best = shared_.best_makespan();
  if (best == kNoMakespan) return !store_.failed();
  return store_.impose_makespan_at_most(best - 1);
}

Solution BranchAndBound::extract() const {
  const Instance& inst = store_.instance();
  std::vector<std::vector<Time>> starts(inst.num_jobs());
  for (int j = 0; j < inst.num_jobs(); ++j) {
    for (int op = inst.first_op(j); op <= inst.last_op(j); ++op) {
      starts[j].push_back(store_.est(op));
    }
  }
  return make_solution(inst, std::move(starts));
}

SearchOutcome BranchAndBound::run(const SearchLimits& limits) {
  struct Frame {
    DomainStore::Mark mark;
    std::size_t brancher_mark;
    int op;
    Time start;
    bool right;
  };
  std::vector<Frame> stack;
  const DomainStore::Mark root = store_.mark();
  const std::size_t brancher_root = brancher_.mark();
  const std::int64_t fails_at_start = fails_;
  std::int64_t last_improvement = -1;  // node count; -1 before any solution

  SearchOutcome outcome = SearchOutcome::kExhausted;
  bool ok = apply_bound() && store_.fixpoint();
  if (ok && limits.shave_depth >= 0) ok = store_.shave();
  if (!ok) ++fails_;
  while (ok) {
    if (shared_.stop_requested() || shared_.done()) {
      outcome = SearchOutcome::kStopped;
      break;
    }
    if (Clock::now() >= limits.deadline ||
        fails_ - fails_at_start >= limits.fail_limit ||
        (last_improvement >= 0 &&
         nodes_ - last_improvement >= limits.stall_nodes)) {
      outcome = SearchOutcome::kLimitReached;
      break;
    }
    bool node_ok = false;
    const auto d = brancher_.select(store_, rng_);
    if (d.kind == SetTimesBrancher::Decision::Kind::kAllScheduled) {
      Solution sol = extract();
      if (shared_.publish(sol, worker_)) {
        ++solutions_;
        last_improvement = nodes_;
      }
    } else if (d.kind == SetTimesBrancher::Decision::Kind::kDeadEnd) {
      ++fails_;
    } else {
      ++nodes_;
      stack.push_back({store_.mark(), brancher_.mark(), d.op, d.start, false});
      node_ok = store_.fix_start(d.op, d.start) && apply_bound() &&
                store_.fixpoint();
      if (node_ok && static_cast<int>(stack.size()) <= limits.shave_depth) {
        node_ok = store_.shave();
      }
      if (!node_ok) ++fails_;
    }
    if (node_ok) continue;

    ok = false;
    while (!stack.empty()) {
      Frame& f = stack.back();
      store_.restore(f.mark);
      brancher_.restore(f.brancher_mark);
      if (!f.right) {
        f.right = true;
        brancher_.postpone(f.op, f.start);
        if (apply_bound() && store_.fixpoint()) {
          ok = true;
          break;
        }
        ++fails_;
        store_.restore(f.mark);
        brancher_.restore(f.brancher_mark);
      }
      stack.pop_back();
    }
  }
  store_.restore(root);
  brancher_.restore(brancher_root);
  return outcome;
}

SearchResult solve_exact(const Instance& inst, const SearchConfig& cfg) {
  SearchConfig single = cfg;
  single.workers = 1;
  single.mode = SearchMode::kExact;
  return solve(inst, single);
}

int PartialAssignment::num_relaxed() const {
  return static_cast<int>(
      std::count_if(frozen.begin(), frozen.end(),
                    [](const std::optional<Time>& t) { return !t; }));
}

PartialAssignment lns_relax(const Instance& inst, const Solution& sol,
                            double relax_fraction, Rng& rng) {
  const auto kind = static_cast<Neighborhood>(
      std::uniform_int_distribution<int>(0, 2)(rng));
  return lns_relax(inst, sol, relax_fraction, kind, rng);
}

PartialAssignment lns_relax(const Instance& inst, const Solution& sol,
                            double relax_fraction, Neighborhood kind,
                            Rng& rng) {
  const int n = inst.num_ops();
  PartialAssignment pa;
  pa.neighborhood = kind;
  pa.frozen.resize(n);
  for (int op = 0; op < n; ++op) {
    pa.frozen[op] = sol.starts[inst.job_of(op)][inst.index_of(op)];
  }
  const int target = std::clamp(
      static_cast<int>(std::lround(relax_fraction * n)), 0, n);
  if (target == 0) return pa;
  if (target == n) {
    std::fill(pa.frozen.begin(), pa.frozen.end(), std::nullopt);
    return pa;
  }
  switch (kind) {
    case Neighborhood::kRandomOps: {
      std::vector<int> ops(n);
      std::iota(ops.begin(), ops.end(), 0);
      std::shuffle(ops.begin(), ops.end(), rng);
      for (int i = 0; i < target; ++i) pa.frozen[ops[i]].reset();
      break;
    }
    case Neighborhood::kTimeWindow: {
      // A window [t, t + w) holding `target` consecutive starts.
      std::vector<int> ops(n);
      std::iota(ops.begin(), ops.end(), 0);
      std::stable_sort(ops.begin(), ops.end(), [&](int a, int b) {
        return *pa.frozen[a] < *pa.frozen[b];
      });
      const int first =
          std::uniform_int_distribution<int>(0, n - target)(rng);
      for (int i = first; i < first + target; ++i) pa.frozen[ops[i]].reset();
      break;
    }
    case Neighborhood::kMachines: {
      std::vector<int> machines(inst.num_machines());
      std::iota(machines.begin(), machines.end(), 0);
      std::shuffle(machines.begin(), machines.end(), rng);
      int relaxed = 0;
      for (int m : machines) {
        if (relaxed >= target) break;
        for (int op : inst.machine_ops()[m]) {
          pa.frozen[op].reset();
          ++relaxed;
        }
      }
      break;
    }
  }
  return pa;
}

ReoptimizeResult reoptimize(const Instance& inst, const PartialAssignment& pa,
                            FreezeMode mode, Time bound,
                            std::int64_t fail_limit,
                            const DisjunctiveRules& rules, Rng& rng,
                            Clock::time_point deadline) {
  ReoptimizeResult result;
  DomainStore store(inst, bound, PropagationOptions{rules});
  if (mode == FreezeMode::kStartTimes) {
    for (int op = 0; op < inst.num_ops(); ++op) {
      if (pa.frozen[op]) store.fix_start(op, *pa.frozen[op]);
    }
  } else {
    const int n = inst.num_ops();
    std::vector<int> machine_next(n, -1);
    std::vector<int> indegree(n, 0);
    for (int m = 0; m < inst.num_machines(); ++m) {
      std::vector<int> frozen;
      for (int op : inst.machine_ops()[m]) {
        if (pa.frozen[op]) frozen.push_back(op);
      }
      std::stable_sort(frozen.begin(), frozen.end(), [&](int a, int b) {
        return *pa.frozen[a] < *pa.frozen[b];
      });
      for (std::size_t i = 0; i + 1 < frozen.size(); ++i) {
        store.add_precedence(frozen[i], frozen[i + 1]);
        machine_next[frozen[i]] = frozen[i + 1];
        ++indegree[frozen[i + 1]];
      }
    }
    // Longest paths through job chains and frozen arcs give the starting
    // windows at once, and reject hopeless neighborhoods without search.
    std::vector<int> order;
    order.reserve(n);
    for (int op = 0; op < n; ++op) {
      if (op != inst.first_op(inst.job_of(op))) ++indegree[op];
      if (indegree[op] == 0) order.push_back(op);
    }
    std::vector<Time> head(n, 0);
    for (std::size_t k = 0; k < order.size(); ++k) {
      const int op = order[k];
      const Time end = head[op] + inst.op(op).duration;
      for (int next : {op < inst.last_op(inst.job_of(op)) ? op + 1 : -1,
                       machine_next[op]}) {
        if (next < 0) continue;
        head[next] = std::max(head[next], end);
        if (--indegree[next] == 0) order.push_back(next);
      }
    }
    std::vector<Time> tail(n, 0);  // work after the op ends
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int op = *it;
      for (int next : {op < inst.last_op(inst.job_of(op)) ? op + 1 : -1,
                       machine_next[op]}) {
        if (next < 0) continue;
        tail[op] = std::max(tail[op], tail[next] + inst.op(next).duration);
      }
    }
    for (int op : order) {
      if (!store.tighten_est(op, head[op]) ||
          !store.tighten_lct(op, bound - tail[op])) {
        return result;
      }
    }
  }
  if (store.failed()) return result;
  SharedIncumbent local(0, Clock::now(), bound + 1);
  BranchAndBound bb(store, local, rng, 0);
  SearchLimits limits;
  limits.deadline = deadline;
  limits.fail_limit = fail_limit;
  result.outcome = bb.run(limits);
  result.best = local.best_solution();
  result.nodes = bb.nodes();
  result.fails = bb.fails();
  return result;
}

namespace {

struct WorkerTotals {
  std::int64_t nodes = 0;
  std::int64_t fails = 0;
  std::int64_t lns_iterations = 0;
};

WorkerTotals run_worker(const Instance& inst, const SearchConfig& cfg,
                        int worker, SharedIncumbent& shared,
                        Clock::time_point deadline) {
  WorkerTotals totals;
  Rng rng(cfg.seed + static_cast<std::uint64_t>(worker));
  double relax = std::clamp(
      cfg.relax_fraction *
          kRelaxFactors[worker % std::size(kRelaxFactors)],
      0.0, 1.0);
  DomainStore store(inst, PropagationOptions{cfg.rules});
  BranchAndBound bb(store, shared, rng, worker);

  auto finish_exact = [&](SearchOutcome outcome) {
    if (outcome == SearchOutcome::kExhausted) {
      shared.mark_proven();
      shared.request_stop();
    }
  };

  const int proof_shave =
      inst.num_ops() <= cfg.shave_max_ops ? cfg.shave_depth : -1;
  SearchLimits limits;
  limits.deadline = deadline;
  if (cfg.mode == SearchMode::kExact) limits.shave_depth = proof_shave;
  if (cfg.mode == SearchMode::kAuto) limits.stall_nodes = cfg.lns_trigger_nodes;
  if (cfg.mode == SearchMode::kLns) limits.stall_nodes = 0;
  SearchOutcome outcome = bb.run(limits);
  finish_exact(outcome);

  auto running = [&] {
    return !shared.done() && !shared.stop_requested() &&
           Clock::now() < deadline;
  };
  if (cfg.mode != SearchMode::kExact &&
      outcome == SearchOutcome::kLimitReached) {
    // Auto mode alternates LNS (until it stalls) with a complete search
    // under a fail budget that doubles every round. Only worker 0 runs the
    // proof rounds; the other workers stay on LNS.
    const bool proves = cfg.mode == SearchMode::kAuto && worker == 0;
    std::int64_t proof_budget = cfg.proof_fail_budget;
    while (running()) {
      std::int64_t stall = 0;
      while (running()) {
        if (proves && stall >= cfg.lns_stall_iterations) {
          break;
        }
        auto base = shared.best_solution();
        if (!base) break;
        PartialAssignment pa = lns_relax(inst, *base, relax, rng);
        const Time bound = shared.best_makespan() - 1;
        ReoptimizeResult r = reoptimize(inst, pa, FreezeMode::kMachineOrder,
                                        bound, cfg.lns_fail_limit, cfg.rules,
                                        rng, deadline);
        ++totals.lns_iterations;
        totals.nodes += r.nodes;
        totals.fails += r.fails;
        if (r.best && shared.publish(*r.best, worker)) {
          stall = 0;
        } else {
          ++stall;
        }
        // Neighborhoods that close without finding anything are too small;
        // ones that hit the fail limit are too large.
        if (r.outcome == SearchOutcome::kExhausted) {
          relax = std::min(kMaxRelax, relax * 1.01 + 0.0005);
        } else if (!r.best) {
          relax = std::max(kMinRelax, relax * 0.95);
        }
      }
      if (!proves || !running()) break;
      limits.stall_nodes = std::numeric_limits<std::int64_t>::max();
      limits.shave_depth = proof_shave;
      limits.fail_limit = proof_budget;
      finish_exact(bb.run(limits));
      proof_budget = proof_budget > std::numeric_limits<std::int64_t>::max() / 2
                         ? proof_budget
                         : 2 * proof_budget;
    }
  }
  totals.nodes += bb.nodes();
  totals.fails += bb.fails();
  return totals;
}

}  // namespace

SearchResult solve(const Instance& inst, const SearchConfig& cfg) {
  cfg.validate();
  const auto start = Clock::now();
  const auto deadline = deadline_after(start, cfg.time_limit);
  SharedIncumbent shared(lower_bound(inst), start);

  std::vector<WorkerTotals> totals(cfg.workers);
  if (cfg.workers == 1) {
    totals[0] = run_worker(inst, cfg, 0, shared, deadline);
  } else {
    std::vector<std::jthread> threads;
    for (int w = 0; w < cfg.workers; ++w) {
      threads.emplace_back([&, w] {
        totals[w] = run_worker(inst, cfg, w, shared, deadline);
      });
    }
  }

  SearchResult result;
  result.incumbent = shared.snapshot();
  result.trace = shared.trace();
  for (const WorkerTotals& t : totals) {
    result.stats.nodes += t.nodes;
    result.stats.fails += t.fails;
    result.stats.lns_iterations += t.lns_iterations;
  }
  result.stats.wall_time = seconds_since(start);
  result.stats.time_to_best = shared.time_to_best();
  return result;
}

}  // namespace jobshop
