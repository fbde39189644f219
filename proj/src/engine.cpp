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

#include "jobshop/engine.hpp"

#include <algorithm>
#include <cassert>

namespace jobshop {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

DomainStore::DomainStore(const Instance& inst, PropagationOptions options)
    : DomainStore(inst, inst.total_duration(), options) {}

DomainStore::DomainStore(const Instance& inst, Time horizon,
                         PropagationOptions options)
    : inst_(&inst),
      options_(options),
      horizon_(horizon),
      shuffle_state_(options.queue_shuffle_seed) {
  const int n = inst.num_ops();
  est_.assign(n, 0);
  lst_.resize(n);
  len_.resize(n);
  op_machine_.resize(n);
  for (int op = 0; op < n; ++op) {
    len_[op] = inst.op(op).duration;
    lst_[op] = horizon - len_[op];
    op_machine_[op] = inst.op(op).machine;
    if (lst_[op] < 0) failed_ = true;
  }
  for (int m = 0; m < inst.num_machines(); ++m) {
    postings_.push_back({m, inst.machine_ops()[m]});
  }
  arc_succ_.resize(n);
  arc_pred_.resize(n);
  saved_epoch_.assign(n, 0);
  job_queued_.assign(inst.num_jobs(), 0);
  machine_queued_.assign(inst.num_machines(), 0);
  arc_queued_.assign(n, 0);
  for (int j = 0; j < inst.num_jobs(); ++j) {
    job_queue_.push_back(j);
    job_queued_[j] = 1;
  }
  for (int m = 0; m < inst.num_machines(); ++m) {
    machine_queue_.push_back(m);
    machine_queued_[m] = 1;
  }
}

Time DomainStore::min_makespan() const {
  Time best = 0;
  for (int j = 0; j < inst_->num_jobs(); ++j) {
    best = std::max(best, ect(inst_->last_op(j)));
  }
  return best;
}

void DomainStore::save(int op) {
  if (saved_epoch_[op] != epoch_) {
    trail_.push_back({op, est_[op], lst_[op]});
    saved_epoch_[op] = epoch_;
  }
}

void DomainStore::touched(int op) {
  const int j = inst_->job_of(op);
  if (!job_queued_[j]) {
    job_queued_[j] = 1;
    job_queue_.push_back(j);
  }
  const int m = op_machine_[op];
  if (!machine_queued_[m]) {
    machine_queued_[m] = 1;
    machine_queue_.push_back(m);
  }
  if (has_arcs_ && !arc_queued_[op] &&
      (!arc_succ_[op].empty() || !arc_pred_[op].empty())) {
    arc_queued_[op] = 1;
    arc_queue_.push_back(op);
  }
}

bool DomainStore::tighten_est(int op, Time v) {
  if (failed_) return false;
  if (v <= est_[op]) return true;
  save(op);
  est_[op] = v;
  if (est_[op] > lst_[op]) {
    fail();
    return false;
  }
  touched(op);
  return true;
}

bool DomainStore::tighten_lst(int op, Time v) {
  if (failed_) return false;
  if (v >= lst_[op]) return true;
  save(op);
  lst_[op] = v;
  if (est_[op] > lst_[op]) {
    fail();
    return false;
  }
  touched(op);
  return true;
}

bool DomainStore::impose_makespan_at_most(Time ub) {
  for (int j = 0; j < inst_->num_jobs(); ++j) {
    if (!tighten_lct(inst_->last_op(j), ub)) return false;
  }
  return !failed_;
}

void DomainStore::fail() {
  if (!failed_) ++stats_.failures;
  failed_ = true;
}

void DomainStore::add_precedence(int before, int after) {
  arc_succ_[before].push_back(after);
  arc_pred_[after].push_back(before);
  has_arcs_ = true;
  if (!arc_queued_[before]) {
    arc_queued_[before] = 1;
    arc_queue_.push_back(before);
  }
}

DomainStore::Mark DomainStore::mark() {
  ++epoch_;
  return {trail_.size()};
}

void DomainStore::restore(Mark m) {
  while (trail_.size() > m.trail_size) {
    const TrailEntry& e = trail_.back();
    est_[e.op] = e.est;
    lst_[e.op] = e.lst;
    trail_.pop_back();
  }
  ++epoch_;
  failed_ = false;
  for (int j : job_queue_) job_queued_[j] = 0;
  for (int m2 : machine_queue_) machine_queued_[m2] = 0;
  for (int op : arc_queue_) arc_queued_[op] = 0;
  job_queue_.clear();
  machine_queue_.clear();
  arc_queue_.clear();
}

bool DomainStore::propagate_precedence(int job) {
  if (failed_) return false;
  ++stats_.precedence_calls;
  // Both passes together reach the chain fixpoint, so the job's own
  // changes do not need to queue it again.
  const char was_queued = job_queued_[job];
  job_queued_[job] = 1;
  const int first = inst_->first_op(job);
  const int last = inst_->last_op(job);
  bool ok = true;
  for (int op = first; ok && op < last; ++op) {
    ok = tighten_est(op + 1, ect(op));
  }
  for (int op = last; ok && op > first; --op) {
    ok = tighten_lct(op - 1, lst(op));
  }
  job_queued_[job] = was_queued;
  return ok;
}

bool DomainStore::propagate_disjunctive(const MachinePosting& posting) {
  if (failed_) return false;
  ++stats_.disjunctive_calls;
  const auto& members = posting.members;
  windows_.resize(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    const int op = members[i];
    windows_[i] = {est_[op], lct(op), len_[op]};
  }
  if (!filter_.filter(windows_, options_.rules)) {
    fail();
    return false;
  }
  const char was_queued = machine_queued_[posting.machine];
  machine_queued_[posting.machine] = 1;
  bool ok = true;
  for (std::size_t i = 0; ok && i < members.size(); ++i) {
    ok = tighten_est(members[i], windows_[i].est) &&
         tighten_lct(members[i], windows_[i].lct);
  }
  machine_queued_[posting.machine] = was_queued;
  return ok;
}

bool DomainStore::propagate_arcs(int op) {
  for (int succ : arc_succ_[op]) {
    if (!tighten_est(succ, ect(op))) return false;
  }
  for (int pred : arc_pred_[op]) {
    if (!tighten_lct(pred, lst(op))) return false;
  }
  return true;
}

bool DomainStore::propagate_all() {
  for (int j = 0; j < inst_->num_jobs(); ++j) {
    if (!job_queued_[j]) {
      job_queued_[j] = 1;
      job_queue_.push_back(j);
    }
  }
  for (int m = 0; m < inst_->num_machines(); ++m) {
    if (!machine_queued_[m]) {
      machine_queued_[m] = 1;
      machine_queue_.push_back(m);
    }
  }
  for (int op = 0; op < size(); ++op) {
    if (has_arcs_ && !arc_queued_[op] && !arc_succ_[op].empty()) {
      arc_queued_[op] = 1;
      arc_queue_.push_back(op);
    }
  }
  return fixpoint();
}

int DomainStore::pop_queue(std::vector<int>& queue) {
  if (options_.queue_shuffle_seed != 0 && queue.size() > 1) {
    std::size_t k = splitmix64(shuffle_state_) % queue.size();
    std::swap(queue[k], queue.back());
  }
  int v = queue.back();
  queue.pop_back();
  return v;
}

bool DomainStore::fixpoint() {
  const bool shuffled = options_.queue_shuffle_seed != 0;
  while (!failed_) {
    // Cheap propagators first; with shuffling the kind is also random.
    int kind = -1;
    if (shuffled) {
      int avail[3];
      int na = 0;
      if (!job_queue_.empty()) avail[na++] = 0;
      if (!arc_queue_.empty()) avail[na++] = 1;
      if (!machine_queue_.empty()) avail[na++] = 2;
      if (na > 0) kind = avail[splitmix64(shuffle_state_) % na];
    } else if (!job_queue_.empty()) {
      kind = 0;
    } else if (!arc_queue_.empty()) {
      kind = 1;
    } else if (!machine_queue_.empty()) {
      kind = 2;
    }
    if (kind < 0) break;
    if (kind == 0) {
      int j = pop_queue(job_queue_);
      job_queued_[j] = 0;
      propagate_precedence(j);
    } else if (kind == 1) {
      int op = pop_queue(arc_queue_);
      arc_queued_[op] = 0;
      propagate_arcs(op);
    } else {
      int m = pop_queue(machine_queue_);
      machine_queued_[m] = 0;
      propagate_disjunctive(postings_[m]);
    }
  }
  if (failed_) {
    for (int j : job_queue_) job_queued_[j] = 0;
    for (int m : machine_queue_) machine_queued_[m] = 0;
    for (int op : arc_queue_) arc_queued_[op] = 0;
    job_queue_.clear();
    machine_queue_.clear();
    arc_queue_.clear();
    return false;
  }
  return true;
}

bool DomainStore::shave() {
  auto probe = [&](int op, bool upper, Time v) {
    const Mark m = mark();
    const bool ok = (upper ? tighten_lst(op, v) : tighten_est(op, v)) &&
                    fixpoint();
    restore(m);
    return ok;
  };
  bool changed = true;
  while (changed && !failed_) {
    changed = false;
    for (int op = 0; op < size() && !failed_; ++op) {
      if (fixed(op)) continue;
      // Smallest s with start <= s consistent. Most probes at the bound
      // itself succeed, so that one is tried first.
      Time lo = est_[op], hi = lst_[op];
      if (probe(op, true, lo)) hi = lo; else ++lo;
      while (lo < hi) {
        const Time mid = lo + (hi - lo) / 2;
        if (probe(op, true, mid)) hi = mid; else lo = mid + 1;
      }
      if (lo > est_[op]) {
        changed = true;
        if (!tighten_est(op, lo) || !fixpoint()) return false;
      }
      lo = est_[op];
      hi = lst_[op];
      if (probe(op, false, hi)) lo = hi; else --hi;
      // Largest s with start >= s consistent.
      while (lo < hi) {
        const Time mid = hi - (hi - lo) / 2;
        if (probe(op, false, mid)) lo = mid; else hi = mid - 1;
      }
      if (hi < lst_[op]) {
        changed = true;
        if (!tighten_lst(op, hi) || !fixpoint()) return false;
      }
    }
  }
  return !failed_;
}

}  // namespace jobshop
