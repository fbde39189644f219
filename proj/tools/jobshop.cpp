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

// Command-line front end: solve, bench, gen, score and check.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "jobshop/bench.hpp"
#include "jobshop/generator.hpp"
#include "jobshop/instance.hpp"
#include "jobshop/search.hpp"

namespace fs = std::filesystem;
using namespace jobshop;

namespace {

int run_solve(const std::string& file, const SearchConfig& cfg, bool as_json,
              const std::string& out) {
  const Instance inst = read_instance_file(file);
  const SearchResult res = solve(inst, cfg);
  const Incumbent& inc = res.incumbent;
  if (inc.best && !out.empty()) write_solution_file(out, *inc.best);
  if (as_json) {
    if (inc.best) {
      std::cout << solution_to_json(*inc.best) << '\n';
    } else {
      std::cout << "null\n";
    }
  } else {
    std::cout << "instance      " << inst.name() << " (" << inst.num_jobs()
              << " jobs, " << inst.num_machines() << " machines, "
              << inst.num_ops() << " ops)\n";
    if (inc.best) {
      std::cout << "makespan      " << inc.best->makespan << '\n';
    } else {
      std::cout << "makespan      none\n";
    }
    std::cout << "lower bound   " << inc.bound << '\n'
              << "proven        " << (inc.proven ? "yes" : "no") << '\n'
              << std::fixed << std::setprecision(3)
              << "time to best  " << res.stats.time_to_best << " s\n"
              << "wall time     " << res.stats.wall_time << " s\n"
              << "nodes         " << res.stats.nodes << '\n'
              << "fails         " << res.stats.fails << '\n'
              << "lns iters     " << res.stats.lns_iterations << '\n';
  }
  if (inc.best && !validate_solution(inst, *inc.best)) {
    std::cerr << "error: solver returned an invalid schedule\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constraint-programming job-shop solver and benchmark harness"};
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance file");
  std::string solve_file;
  std::string solve_out;
  double time_limit = 60.0;
  int workers = 1;
  std::uint64_t seed = 1;
  std::string mode = "auto";
  bool as_json = false;
  bool no_ef = false;
  bool no_nfnl = false;
  std::int64_t lns_fail_limit = 200;
  double relax_fraction = 0.15;
  int shave_depth = 20;
  solve_cmd->add_option("file", solve_file, "Instance in JSSP text format")
      ->required()
      ->check(CLI::ExistingFile);
  solve_cmd->add_option("--time-limit", time_limit, "Seconds")->capture_default_str();
  solve_cmd->add_option("--workers", workers, "Portfolio workers")->capture_default_str();
  solve_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
  solve_cmd->add_option("--mode", mode, "exact | lns | auto")
      ->check(CLI::IsMember({"exact", "lns", "auto"}))
      ->capture_default_str();
  solve_cmd->add_option("--lns-fail-limit", lns_fail_limit)->capture_default_str();
  solve_cmd->add_option("--relax-fraction", relax_fraction)->capture_default_str();
  solve_cmd->add_option("--shave-depth", shave_depth,
                        "Shave bounds down to this depth in complete search (-1: off)")
      ->capture_default_str();
  solve_cmd->add_flag("--no-edge-finding", no_ef);
  solve_cmd->add_flag("--no-not-first-not-last", no_nfnl);
  solve_cmd->add_flag("--json", as_json, "Print the solution as JSON");
  solve_cmd->add_option("--out", solve_out, "Write the solution JSON here");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark manifest");
  std::string manifest_path;
  std::string bench_out;
  std::string preset = "classic";
  bench_cmd->add_option("manifest", manifest_path)->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--out", bench_out, "Report directory")->required();
  bench_cmd->add_option("--preset", preset, "classic (1200 s) | large (21600 s)")
      ->check(CLI::IsMember({"classic", "large"}))
      ->capture_default_str();

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "Generate a known-optimum instance");
  GeneratorSpec spec;
  std::string flavor = "long";
  std::string gen_out = ".";
  gen_cmd->add_option("--flavor", flavor, "long | short")
      ->check(CLI::IsMember({"long", "short"}))
      ->capture_default_str();
  gen_cmd->add_option("--machines", spec.num_machines)->required();
  gen_cmd->add_option("--ops", spec.num_ops)->required();
  gen_cmd->add_option("--seed", spec.seed)->capture_default_str();
  gen_cmd->add_option("--optimum", spec.optimum)->capture_default_str();
  gen_cmd->add_option("--min-dur", spec.min_duration)->capture_default_str();
  gen_cmd->add_option("--max-dur", spec.max_duration)->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "Output directory")->capture_default_str();

  // score
  auto* score_cmd = app.add_subcommand("score", "Pairwise scores of result CSVs");
  std::vector<std::string> score_files;
  score_cmd->add_option("results", score_files)->required()->check(CLI::ExistingFile);

  // check
  auto* check_cmd = app.add_subcommand("check", "Validate a solution JSON");
  std::string check_inst;
  std::string check_sol;
  check_cmd->add_option("instance", check_inst)->required()->check(CLI::ExistingFile);
  check_cmd->add_option("solution", check_sol)->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) {
      SearchConfig cfg = SearchConfig::classic();
      cfg.time_limit = time_limit;
      cfg.workers = workers;
      cfg.seed = seed;
      cfg.mode = parse_search_mode(mode);
      cfg.lns_fail_limit = lns_fail_limit;
      cfg.relax_fraction = relax_fraction;
      cfg.shave_depth = shave_depth;
      if (no_ef) cfg.rules.edge_finding = false;
      if (no_nfnl) cfg.rules.not_first_not_last = false;
      cfg.validate();
      return run_solve(solve_file, cfg, as_json, solve_out);
    }
    if (*bench_cmd) {
      Manifest manifest = read_manifest(manifest_path, parse_preset(preset));
      BenchOptions options;
      options.out_dir = bench_out;
      options.on_row = [](const RunResult& r) {
        write_results_csv_row(std::cout, r);
        std::cout.flush();
      };
      write_results_csv_header(std::cout);
      auto rows = run_benchmark(manifest, options);
      std::cout << '\n' << format_table(rows);
      return 0;
    }
    if (*gen_cmd) {
      spec.flavor = parse_flavor(flavor);
      GeneratedInstance gen = generate_instance(spec);
      fs::create_directories(gen_out);
      const fs::path base = fs::path(gen_out) / spec.name();
      write_instance_file(base.string() + ".jss", gen.instance);
      write_solution_file(base.string() + ".cert.json", gen.certificate.schedule);
      std::cout << base.string() << ".jss: " << gen.instance.num_jobs()
                << " jobs, " << gen.instance.num_ops() << " ops, lower bound "
                << lower_bound(gen.instance) << '\n';
      return 0;
    }
    if (*score_cmd) {
      std::vector<RunResult> rows;
      for (const auto& f : score_files) {
        auto part = read_results_csv_file(f);
        rows.insert(rows.end(), part.begin(), part.end());
      }
      std::cout << format_scores(score_complete(rows));
      return 0;
    }
    if (*check_cmd) {
      const Instance inst = read_instance_file(check_inst);
      const Verdict v = validate_solution(inst, read_solution_file(check_sol));
      if (v) {
        std::cout << "ok\n";
        return 0;
      }
      std::cout << "violation (" << to_string(v.violation->kind)
                << "): " << v.violation->message << '\n';
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
