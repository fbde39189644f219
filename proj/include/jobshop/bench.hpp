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

#ifndef JOBSHOP_BENCH_HPP_
#define JOBSHOP_BENCH_HPP_

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jobshop/instance.hpp"
#include "jobshop/search.hpp"

namespace jobshop {

// Size guard of the exhaustive oracle.
inline constexpr int kOracleMaxOps = 10;
inline constexpr double kOracleMaxOrderings = 1e6;

struct OracleResult {
  Time makespan = 0;
  Solution witness;
};

// Exact optimum by enumerating every combination of machine orderings and
// timing each one with earliest starts. Does not use the engine. Throws
// std::invalid_argument unless the instance has <= kOracleMaxOps ops or at
// most kOracleMaxOrderings ordering combinations.
OracleResult brute_force_optimum(const Instance& inst);

struct RunResult {
  std::string instance;
  std::string config;
  std::optional<Time> makespan;  // none: no solution within the limit
  bool proven = false;
  double wall_time = 0.0;
  double time_to_best = 0.0;
  // False when the solver's solution failed validate_solution.
  bool valid = true;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

// Columns: instance,config,makespan,proven,wall_time_s,time_to_best_s,valid
void write_results_csv(std::ostream& out, const std::vector<RunResult>& rows);
void write_results_csv_header(std::ostream& out);
void write_results_csv_row(std::ostream& out, const RunResult& row);
std::vector<RunResult> read_results_csv(std::istream& in);
std::vector<RunResult> read_results_csv_file(const std::filesystem::path& path);

struct ScoreTable {
  std::vector<std::string> configs;       // first-appearance order
  std::map<std::string, double> points;   // config -> total
  // instance -> config -> points earned on that instance
  std::map<std::string, std::map<std::string, double>> per_instance;
};

// Pairwise scoring. Per instance and unordered pair (A, B): strictly better
// makespan, or a solution against none, earns 1; equal makespans split by
// time to best, A taking t_B / (t_A + t_B) (0.5 each when both are zero);
// no solution on both sides earns 0. Invalid rows count as no solution.
// Throws std::invalid_argument when configurations cover different
// instances or a (config, instance) row is repeated.
ScoreTable score_complete(const std::vector<RunResult>& rows);

enum class Preset { kClassic, kLarge };
Preset parse_preset(std::string_view text);
SearchConfig preset_config(Preset preset);

struct BenchConfig {
  std::string name;
  SearchConfig search;
};

struct Manifest {
  std::vector<std::filesystem::path> instances;
  std::vector<BenchConfig> configs;
};

// JSON {"instances": [...], "configs": [{"name": ..., "workers": ...}]} or a
// plain list of instance paths, one per line. Relative paths resolve against
// the manifest's directory. Without configs, the preset's single-worker and
// four-worker configurations are used.
Manifest read_manifest(const std::filesystem::path& path, Preset preset);

using SolverFn =
    std::function<SearchResult(const Instance&, const SearchConfig&)>;

struct BenchOptions {
  std::filesystem::path out_dir;
  SolverFn solver;                                    // defaults to solve()
  std::function<void(const RunResult&)> on_row;      // streamed rows
};

// Runs every (instance, config) cell, re-checks each solution and writes
// results.csv, results.json and table.txt into out_dir. A failing cell is
// recorded and the batch continues.
std::vector<RunResult> run_benchmark(const Manifest& manifest,
                                     const BenchOptions& options);

// Table with one row per instance and one column per config; proven
// makespans carry the time to best in parentheses.
std::string format_table(const std::vector<RunResult>& rows);
std::string format_scores(const ScoreTable& table);

}  // namespace jobshop

#endif  // JOBSHOP_BENCH_HPP_
