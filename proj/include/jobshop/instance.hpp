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

#ifndef JOBSHOP_INSTANCE_HPP_
#define JOBSHOP_INSTANCE_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jobshop {

// All times are unitless 64-bit integers. Intervals are half-open:
// an operation started at s occupies [s, s + duration).
using Time = std::int64_t;

struct Operation {
  int machine = 0;
  Time duration = 1;

  friend bool operator==(const Operation&, const Operation&) = default;
};

// A job is the ordered precedence chain of its operations.
struct Job {
  std::vector<Operation> ops;

  friend bool operator==(const Job&, const Job&) = default;
};

// Raised by the text parser; line() is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

// Immutable after construction. Operations are also addressable through a
// dense "op id" (job-major order) used by the engine and search layers.
class Instance {
 public:
  Instance() = default;
  // Throws std::invalid_argument if a job is empty, a duration is < 1 or a
  // machine index is outside [0, num_machines).
  Instance(std::string name, int num_machines, std::vector<Job> jobs);

  const std::string& name() const { return name_; }
  int num_jobs() const { return static_cast<int>(jobs_.size()); }
  int num_machines() const { return num_machines_; }
  int num_ops() const { return static_cast<int>(op_job_.size()); }
  const std::vector<Job>& jobs() const { return jobs_; }
  const Job& job(int j) const { return jobs_[j]; }

  int op_id(int job, int index) const { return offsets_[job] + index; }
  int first_op(int job) const { return offsets_[job]; }
  int last_op(int job) const { return offsets_[job + 1] - 1; }
  int job_of(int op) const { return op_job_[op]; }
  int index_of(int op) const { return op - offsets_[op_job_[op]]; }
  const Operation& op(int id) const {
    return jobs_[op_job_[id]].ops[id - offsets_[op_job_[id]]];
  }

  // Op ids bound to each machine, in op-id order.
  const std::vector<std::vector<int>>& machine_ops() const {
    return machine_ops_;
  }

  // Every job visits every machine exactly once.
  bool is_rectangular() const;
  // Some job visits a machine more than once.
  bool has_recirculation() const;
  Time total_duration() const;

  // Structural equality: machine count and job chains. The name is a label
  // that the text format does not carry.
  friend bool operator==(const Instance& a, const Instance& b) {
    return a.num_machines_ == b.num_machines_ && a.jobs_ == b.jobs_;
  }

 private:
  std::string name_;
  int num_machines_ = 0;
  std::vector<Job> jobs_;
  std::vector<int> offsets_{0};
  std::vector<int> op_job_;
  std::vector<std::vector<int>> machine_ops_;
};

// Standard JSSP text format. See README for the grammar.
Instance parse_instance(std::istream& in, std::string name = {});
Instance parse_instance(std::string_view text, std::string name = {});
// The instance is named after the file stem.
Instance read_instance_file(const std::filesystem::path& path);

void write_instance(std::ostream& out, const Instance& inst);
std::string write_instance(const Instance& inst);
void write_instance_file(const std::filesystem::path& path,
                         const Instance& inst);

// Builds an instance from Algorithm-style per-job arrays in which
// successors[j][k] is the index of the operation following k within job j
// (-1, or any out-of-range value, marks the chain end). Each job must form a
// single chain covering all of its operations.
Instance from_successor_arrays(
    std::string name, int num_machines,
    const std::vector<std::vector<int>>& machines,
    const std::vector<std::vector<Time>>& durations,
    const std::vector<std::vector<int>>& successors);

Time machine_load_bound(const Instance& inst);
Time job_length_bound(const Instance& inst);
// max(machine_load_bound, job_length_bound); never exceeds the optimum.
Time lower_bound(const Instance& inst);

struct Solution {
  std::string instance;
  Time makespan = 0;
  // starts[j][k]: start time of operation k of job j.
  std::vector<std::vector<Time>> starts;

  friend bool operator==(const Solution&, const Solution&) = default;
};

// Fills in the makespan from the start times.
Solution make_solution(const Instance& inst,
                       std::vector<std::vector<Time>> starts);

enum class ViolationKind {
  kShape,          // starts do not cover the instance
  kNegativeStart,
  kPrecedence,
  kOverlap,
  kMakespan,       // makespan field differs from the recomputed value
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind = ViolationKind::kShape;
  int job = -1;
  int op = -1;
  int machine = -1;
  int other_job = -1;
  int other_op = -1;
  Time first = 0;   // kind-specific times (see message)
  Time second = 0;
  std::string message;
};

struct Verdict {
  std::optional<Violation> violation;

  bool ok() const { return !violation.has_value(); }
  explicit operator bool() const { return ok(); }
};

// Reports the first violated constraint: shape, negative starts, job
// precedences (job order), machine overlaps (machine order), makespan.
Verdict validate_solution(const Instance& inst, const Solution& sol);

// {"instance": name, "makespan": int, "starts": [[int, ...], ...]}
std::string solution_to_json(const Solution& sol, int indent = -1);
Solution solution_from_json(std::string_view text);
Solution read_solution_file(const std::filesystem::path& path);
void write_solution_file(const std::filesystem::path& path,
                         const Solution& sol);

}  // namespace jobshop

#endif  // JOBSHOP_INSTANCE_HPP_
