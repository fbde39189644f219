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

#include "jobshop/instance.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace jobshop {

namespace {

std::string at_line(int line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

Time to_int(std::string_view tok, int line) {
  Time v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    throw ParseError(line, at_line(line, "expected an integer, got '" +
                                             std::string(tok) + "'"));
  }
  return v;
}

bool is_skippable(std::string_view line) {
  auto first = line.find_first_not_of(" \t\r\n\f\v");
  return first == std::string_view::npos || line[first] == '#';
}

}  // namespace

ParseError::ParseError(int line, const std::string& what)
    : std::runtime_error(what), line_(line) {}

Instance::Instance(std::string name, int num_machines, std::vector<Job> jobs)
    : name_(std::move(name)), num_machines_(num_machines), jobs_(std::move(jobs)) {
  if (num_machines_ < 0) throw std::invalid_argument("negative machine count");
  machine_ops_.assign(num_machines_, {});
  for (int j = 0; j < num_jobs(); ++j) {
    const Job& job = jobs_[j];
    if (job.ops.empty()) {
      throw std::invalid_argument("job " + std::to_string(j) + " is empty");
    }
    for (std::size_t k = 0; k < job.ops.size(); ++k) {
      const Operation& o = job.ops[k];
      if (o.duration < 1) {
        throw std::invalid_argument("job " + std::to_string(j) + " op " +
                                    std::to_string(k) +
                                    ": duration must be >= 1");
      }
      if (o.machine < 0 || o.machine >= num_machines_) {
        throw std::invalid_argument("job " + std::to_string(j) + " op " +
                                    std::to_string(k) + ": machine " +
                                    std::to_string(o.machine) +
                                    " out of range");
      }
      machine_ops_[o.machine].push_back(static_cast<int>(op_job_.size()));
      op_job_.push_back(j);
    }
    offsets_.push_back(static_cast<int>(op_job_.size()));
  }
}

bool Instance::is_rectangular() const {
  std::vector<int> seen(num_machines_, -1);
  for (int j = 0; j < num_jobs(); ++j) {
    if (static_cast<int>(jobs_[j].ops.size()) != num_machines_) return false;
    for (const Operation& o : jobs_[j].ops) {
      if (seen[o.machine] == j) return false;
      seen[o.machine] = j;
    }
  }
  return true;
}

bool Instance::has_recirculation() const {
  std::vector<int> seen(num_machines_, -1);
  for (int j = 0; j < num_jobs(); ++j) {
    for (const Operation& o : jobs_[j].ops) {
      if (seen[o.machine] == j) return true;
      seen[o.machine] = j;
    }
  }
  return false;
}

Time Instance::total_duration() const {
  Time total = 0;
  for (const Job& job : jobs_)
    for (const Operation& o : job.ops) total += o.duration;
  return total;
}

Instance parse_instance(std::istream& in, std::string name) {
  std::string raw;
  int line_no = 0;
  bool have_header = false;
  Time num_jobs = 0;
  Time num_machines = 0;
  std::vector<Job> jobs;
  while (std::getline(in, raw)) {
    ++line_no;
    if (is_skippable(raw)) continue;
    auto toks = split_ws(raw);
    if (!have_header) {
      if (toks.size() != 2) {
        throw ParseError(line_no,
                         at_line(line_no, "malformed header: expected "
                                          "'numJobs numMachines'"));
      }
      num_jobs = to_int(toks[0], line_no);
      num_machines = to_int(toks[1], line_no);
      if (num_jobs < 0 || num_machines < 1) {
        throw ParseError(line_no,
                         at_line(line_no, "malformed header: job count must "
                                          "be >= 0 and machine count >= 1"));
      }
      have_header = true;
      continue;
    }
    if (static_cast<Time>(jobs.size()) == num_jobs) {
      throw ParseError(line_no,
                       at_line(line_no, "unexpected data after the last job"));
    }
    // Even token count: bare machine/duration pairs. Odd: a count prefix.
    std::size_t first = 0;
    if (toks.size() % 2 == 1) {
      Time n = to_int(toks[0], line_no);
      if (n < 1 || static_cast<std::size_t>(2 * n + 1) != toks.size()) {
        throw ParseError(
            line_no, at_line(line_no, "job line has " +
                                          std::to_string(toks.size()) +
                                          " tokens, expected an even count"));
      }
      first = 1;
    }
    if (toks.size() == first) {
      throw ParseError(line_no, at_line(line_no, "empty job line"));
    }
    Job job;
    for (std::size_t i = first; i < toks.size(); i += 2) {
      Time m = to_int(toks[i], line_no);
      Time d = to_int(toks[i + 1], line_no);
      if (m < 0 || m >= num_machines) {
        throw ParseError(line_no,
                         at_line(line_no, "machine index " + std::to_string(m) +
                                              " out of range [0, " +
                                              std::to_string(num_machines) +
                                              ")"));
      }
      if (d <= 0) {
        throw ParseError(line_no,
                         at_line(line_no, "non-positive duration " +
                                              std::to_string(d)));
      }
      job.ops.push_back({static_cast<int>(m), d});
    }
    jobs.push_back(std::move(job));
  }
  if (!have_header) throw ParseError(0, "malformed header: empty input");
  if (static_cast<Time>(jobs.size()) != num_jobs) {
    throw ParseError(line_no, at_line(line_no, "expected " +
                                                   std::to_string(num_jobs) +
                                                   " job lines, found " +
                                                   std::to_string(jobs.size())));
  }
  return Instance(std::move(name), static_cast<int>(num_machines),
                  std::move(jobs));
}

Instance parse_instance(std::string_view text, std::string name) {
  std::istringstream in{std::string(text)};
  return parse_instance(in, std::move(name));
}

Instance read_instance_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_instance(in, path.stem().string());
}

void write_instance(std::ostream& out, const Instance& inst) {
  const bool prefixed = !inst.is_rectangular();
  out << inst.num_jobs() << ' ' << inst.num_machines() << '\n';
  for (const Job& job : inst.jobs()) {
    bool first = true;
    if (prefixed) {
      out << job.ops.size();
      first = false;
    }
    for (const Operation& o : job.ops) {
      if (!first) out << ' ';
      out << o.machine << ' ' << o.duration;
      first = false;
    }
    out << '\n';
  }
}

std::string write_instance(const Instance& inst) {
  std::ostringstream out;
  write_instance(out, inst);
  return out.str();
}

void write_instance_file(const std::filesystem::path& path,
                         const Instance& inst) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_instance(out, inst);
}

Instance from_successor_arrays(std::string name, int num_machines,
                               const std::vector<std::vector<int>>& machines,
                               const std::vector<std::vector<Time>>& durations,
                               const std::vector<std::vector<int>>& successors) {
  if (machines.size() != durations.size() ||
      machines.size() != successors.size()) {
    throw std::invalid_argument("array shapes differ");
  }
  std::vector<Job> jobs;
  for (std::size_t j = 0; j < machines.size(); ++j) {
    const int n = static_cast<int>(machines[j].size());
    if (durations[j].size() != machines[j].size() ||
        successors[j].size() != machines[j].size()) {
      throw std::invalid_argument("array shapes differ in job " +
                                  std::to_string(j));
    }
    std::vector<int> preds(n, 0);
    for (int k = 0; k < n; ++k) {
      int s = successors[j][k];
      if (s >= 0 && s < n) ++preds[s];
    }
    auto head = std::find(preds.begin(), preds.end(), 0);
    if (n == 0 || head == preds.end() ||
        std::count(preds.begin(), preds.end(), 0) != 1) {
      throw std::invalid_argument("job " + std::to_string(j) +
                                  " does not form a single chain");
    }
    Job job;
    std::vector<bool> visited(n, false);
    for (int k = static_cast<int>(head - preds.begin()); k >= 0 && k < n;
         k = successors[j][k]) {
      if (visited[k]) {
        throw std::invalid_argument("job " + std::to_string(j) +
                                    " successor cycle");
      }
      visited[k] = true;
      job.ops.push_back({machines[j][k], durations[j][k]});
    }
    if (static_cast<int>(job.ops.size()) != n) {
      throw std::invalid_argument("job " + std::to_string(j) +
                                  " does not form a single chain");
    }
    jobs.push_back(std::move(job));
  }
  return Instance(std::move(name), num_machines, std::move(jobs));
}

Time machine_load_bound(const Instance& inst) {
  Time best = 0;
  for (const auto& ops : inst.machine_ops()) {
    Time load = 0;
    for (int id : ops) load += inst.op(id).duration;
    best = std::max(best, load);
  }
  return best;
}

Time job_length_bound(const Instance& inst) {
  Time best = 0;
  for (const Job& job : inst.jobs()) {
    Time len = 0;
    for (const Operation& o : job.ops) len += o.duration;
    best = std::max(best, len);
  }
  return best;
}

Time lower_bound(const Instance& inst) {
  return std::max(machine_load_bound(inst), job_length_bound(inst));
}

Solution make_solution(const Instance& inst,
                       std::vector<std::vector<Time>> starts) {
  Solution sol;
  sol.instance = inst.name();
  sol.starts = std::move(starts);
  for (std::size_t j = 0; j < sol.starts.size() && j < inst.jobs().size(); ++j) {
    const auto& ops = inst.job(static_cast<int>(j)).ops;
    for (std::size_t k = 0; k < sol.starts[j].size() && k < ops.size(); ++k) {
      sol.makespan = std::max(sol.makespan, sol.starts[j][k] + ops[k].duration);
    }
  }
  return sol;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kShape: return "shape";
    case ViolationKind::kNegativeStart: return "negative-start";
    case ViolationKind::kPrecedence: return "precedence";
    case ViolationKind::kOverlap: return "overlap";
    case ViolationKind::kMakespan: return "makespan";
  }
  return "unknown";
}

Verdict validate_solution(const Instance& inst, const Solution& sol) {
  auto fail = [](Violation v) { return Verdict{std::move(v)}; };
  if (static_cast<int>(sol.starts.size()) != inst.num_jobs()) {
    Violation v;
    v.kind = ViolationKind::kShape;
    v.message = "solution has " + std::to_string(sol.starts.size()) +
                " jobs, instance has " + std::to_string(inst.num_jobs());
    return fail(std::move(v));
  }
  for (int j = 0; j < inst.num_jobs(); ++j) {
    if (sol.starts[j].size() != inst.job(j).ops.size()) {
      Violation v;
      v.kind = ViolationKind::kShape;
      v.job = j;
      v.message = "job " + std::to_string(j) + " has " +
                  std::to_string(sol.starts[j].size()) + " start times, expected " +
                  std::to_string(inst.job(j).ops.size());
      return fail(std::move(v));
    }
  }
  for (int j = 0; j < inst.num_jobs(); ++j) {
    for (std::size_t k = 0; k < sol.starts[j].size(); ++k) {
      if (sol.starts[j][k] < 0) {
        Violation v;
        v.kind = ViolationKind::kNegativeStart;
        v.job = j;
        v.op = static_cast<int>(k);
        v.first = sol.starts[j][k];
        v.message = "job " + std::to_string(j) + " op " + std::to_string(k) +
                    " starts at " + std::to_string(v.first);
        return fail(std::move(v));
      }
    }
  }
  for (int j = 0; j < inst.num_jobs(); ++j) {
    const auto& ops = inst.job(j).ops;
    for (std::size_t k = 0; k + 1 < ops.size(); ++k) {
      Time end = sol.starts[j][k] + ops[k].duration;
      if (end > sol.starts[j][k + 1]) {
        Violation v;
        v.kind = ViolationKind::kPrecedence;
        v.job = j;
        v.op = static_cast<int>(k);
        v.other_job = j;
        v.other_op = static_cast<int>(k + 1);
        v.first = end;
        v.second = sol.starts[j][k + 1];
        v.message = "job " + std::to_string(j) + ": op " + std::to_string(k) +
                    " ends at " + std::to_string(end) + " but op " +
                    std::to_string(k + 1) + " starts at " +
                    std::to_string(v.second);
        return fail(std::move(v));
      }
    }
  }
  for (int m = 0; m < inst.num_machines(); ++m) {
    std::vector<int> ops = inst.machine_ops()[m];
    auto start = [&](int id) {
      return sol.starts[inst.job_of(id)][inst.index_of(id)];
    };
    std::stable_sort(ops.begin(), ops.end(),
                     [&](int a, int b) { return start(a) < start(b); });
    for (std::size_t i = 0; i + 1 < ops.size(); ++i) {
      Time end = start(ops[i]) + inst.op(ops[i]).duration;
      if (end > start(ops[i + 1])) {
        Violation v;
        v.kind = ViolationKind::kOverlap;
        v.machine = m;
        v.job = inst.job_of(ops[i]);
        v.op = inst.index_of(ops[i]);
        v.other_job = inst.job_of(ops[i + 1]);
        v.other_op = inst.index_of(ops[i + 1]);
        v.first = start(ops[i]);
        v.second = start(ops[i + 1]);
        v.message = "machine " + std::to_string(m) + ": job " +
                    std::to_string(v.job) + " op " + std::to_string(v.op) +
                    " [" + std::to_string(v.first) + "," + std::to_string(end) +
                    ") overlaps job " + std::to_string(v.other_job) + " op " +
                    std::to_string(v.other_op) + " starting at " +
                    std::to_string(v.second);
        return fail(std::move(v));
      }
    }
  }
  Time makespan = make_solution(inst, sol.starts).makespan;
  if (makespan != sol.makespan) {
    Violation v;
    v.kind = ViolationKind::kMakespan;
    v.first = sol.makespan;
    v.second = makespan;
    v.message = "makespan field is " + std::to_string(sol.makespan) +
                ", recomputed " + std::to_string(makespan);
    return fail(std::move(v));
  }
  return {};
}

std::string solution_to_json(const Solution& sol, int indent) {
  nlohmann::json j;
  j["instance"] = sol.instance;
  j["makespan"] = sol.makespan;
  j["starts"] = sol.starts;
  return j.dump(indent);
}

Solution solution_from_json(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Solution sol;
  sol.instance = j.at("instance").get<std::string>();
  sol.makespan = j.at("makespan").get<Time>();
  sol.starts = j.at("starts").get<std::vector<std::vector<Time>>>();
  return sol;
}

Solution read_solution_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return solution_from_json(buf.str());
}

void write_solution_file(const std::filesystem::path& path,
                         const Solution& sol) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << solution_to_json(sol, 2) << '\n';
}

}  // namespace jobshop
