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

#include "jobshop/bench.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace jobshop {

using nlohmann::json;

OracleResult brute_force_optimum(const Instance& inst) {
  const auto& machine_ops = inst.machine_ops();
  double orderings = 1.0;
  for (const auto& ops : machine_ops) {
    for (std::size_t k = 2; k <= ops.size(); ++k) orderings *= static_cast<double>(k);
  }
  if (inst.num_ops() > kOracleMaxOps && orderings > kOracleMaxOrderings) {
    throw std::invalid_argument("instance too large for the exhaustive oracle");
  }

  const int n = inst.num_ops();
  std::vector<std::vector<int>> perm = machine_ops;  // each sorted ascending
  std::vector<int> machine_pred(n);
  std::vector<int> indegree(n);
  std::vector<int> machine_succ(n);
  std::vector<Time> start(n);
  std::vector<int> queue;
  queue.reserve(n);

  Time best = kNoMakespan;
  std::vector<Time> best_start;
  while (true) {
    std::fill(machine_pred.begin(), machine_pred.end(), -1);
    std::fill(machine_succ.begin(), machine_succ.end(), -1);
    for (const auto& order : perm) {
      for (std::size_t i = 1; i < order.size(); ++i) {
        machine_pred[order[i]] = order[i - 1];
        machine_succ[order[i - 1]] = order[i];
      }
    }
    // Kahn's algorithm over job arcs and machine-order arcs.
    queue.clear();
    for (int op = 0; op < n; ++op) {
      const bool job_pred = inst.index_of(op) > 0;
      indegree[op] = (job_pred ? 1 : 0) + (machine_pred[op] >= 0 ? 1 : 0);
      start[op] = 0;
      if (indegree[op] == 0) queue.push_back(op);
    }
    Time makespan = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int op = queue[head];
      const Time end = start[op] + inst.op(op).duration;
      makespan = std::max(makespan, end);
      auto relax = [&](int next) {
        start[next] = std::max(start[next], end);
        if (--indegree[next] == 0) queue.push_back(next);
      };
      if (op != inst.last_op(inst.job_of(op))) relax(op + 1);
      if (machine_succ[op] >= 0) relax(machine_succ[op]);
    }
    if (static_cast<int>(queue.size()) == n && makespan < best) {
      best = makespan;
      best_start = start;
    }
    // Advance the mixed-radix odometer of per-machine permutations.
    std::size_t m = 0;
    while (m < perm.size() && !std::next_permutation(perm[m].begin(), perm[m].end())) {
      ++m;
    }
    if (m == perm.size()) break;
  }

  OracleResult result;
  result.makespan = best;
  std::vector<std::vector<Time>> starts(inst.num_jobs());
  for (int op = 0; op < n; ++op) starts[inst.job_of(op)].push_back(best_start[op]);
  result.witness = make_solution(inst, std::move(starts));
  return result;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

double parse_double(std::string_view s, int line) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ParseError(line, "line " + std::to_string(line) + ": bad number '" +
                               std::string(s) + "'");
  }
  return v;
}

Time parse_time(std::string_view s, int line) {
  Time v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ParseError(line, "line " + std::to_string(line) + ": bad makespan '" +
                               std::string(s) + "'");
  }
  return v;
}

bool parse_bool(std::string_view s, int line) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw ParseError(line, "line " + std::to_string(line) + ": bad flag '" +
                             std::string(s) + "'");
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_results_csv_header(std::ostream& out) {
  out << "instance,config,makespan,proven,wall_time_s,time_to_best_s,valid\n";
}

void write_results_csv_row(std::ostream& out, const RunResult& r) {
  out << r.instance << ',' << r.config << ',';
  if (r.makespan) out << *r.makespan;
  out << ',' << (r.proven ? 1 : 0) << ',' << format_double(r.wall_time) << ','
      << format_double(r.time_to_best) << ',' << (r.valid ? 1 : 0) << '\n';
}

void write_results_csv(std::ostream& out, const std::vector<RunResult>& rows) {
  write_results_csv_header(out);
  for (const RunResult& r : rows) write_results_csv_row(out, r);
}

std::vector<RunResult> read_results_csv(std::istream& in) {
  std::vector<RunResult> rows;
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line.rfind("instance,", 0) != 0) {
        throw ParseError(line_no, "line " + std::to_string(line_no) +
                                      ": missing CSV header");
      }
      header = true;
      continue;
    }
    auto cells = split_csv(line);
    if (cells.size() != 7) {
      throw ParseError(line_no, "line " + std::to_string(line_no) +
                                    ": expected 7 columns");
    }
    RunResult r;
    r.instance = cells[0];
    r.config = cells[1];
    if (!cells[2].empty()) {
      r.makespan = parse_time(cells[2], line_no);
    }
    r.proven = parse_bool(cells[3], line_no);
    r.wall_time = parse_double(cells[4], line_no);
    r.time_to_best = parse_double(cells[5], line_no);
    r.valid = parse_bool(cells[6], line_no);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<RunResult> read_results_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_results_csv(in);
}

ScoreTable score_complete(const std::vector<RunResult>& rows) {
  ScoreTable table;
  std::map<std::string, std::map<std::string, const RunResult*>> by_config;
  std::set<std::string> instances;
  for (const RunResult& r : rows) {
    if (!by_config.count(r.config)) table.configs.push_back(r.config);
    auto& cells = by_config[r.config];
    if (!cells.emplace(r.instance, &r).second) {
      throw std::invalid_argument("duplicate row for config '" + r.config +
                                  "' on instance '" + r.instance + "'");
    }
    instances.insert(r.instance);
  }
  for (const auto& [config, cells] : by_config) {
    if (cells.size() != instances.size()) {
      throw std::invalid_argument("config '" + config +
                                  "' does not cover the same instance set");
    }
  }
  for (const std::string& c : table.configs) table.points[c] = 0.0;

  auto usable = [](const RunResult* r) -> std::optional<Time> {
    if (!r->valid) return std::nullopt;
    return r->makespan;
  };
  for (const std::string& inst : instances) {
    auto& earned = table.per_instance[inst];
    for (const std::string& c : table.configs) earned[c] = 0.0;
    for (std::size_t a = 0; a < table.configs.size(); ++a) {
      for (std::size_t b = a + 1; b < table.configs.size(); ++b) {
        const RunResult* ra = by_config[table.configs[a]][inst];
        const RunResult* rb = by_config[table.configs[b]][inst];
        auto ma = usable(ra);
        auto mb = usable(rb);
        double pa = 0.0;
        double pb = 0.0;
        if (ma && (!mb || *ma < *mb)) {
          pa = 1.0;
        } else if (mb && (!ma || *mb < *ma)) {
          pb = 1.0;
        } else if (ma && mb) {
          const double ta = ra->time_to_best;
          const double tb = rb->time_to_best;
          if (ta + tb <= 0.0) {
            pa = pb = 0.5;
          } else {
            pa = tb / (ta + tb);
            pb = ta / (ta + tb);
          }
        }
        earned[table.configs[a]] += pa;
        earned[table.configs[b]] += pb;
        table.points[table.configs[a]] += pa;
        table.points[table.configs[b]] += pb;
      }
    }
  }
  return table;
}

Preset parse_preset(std::string_view text) {
  if (text == "classic") return Preset::kClassic;
  if (text == "large") return Preset::kLarge;
  throw std::invalid_argument("unknown preset '" + std::string(text) + "'");
}

SearchConfig preset_config(Preset preset) {
  return preset == Preset::kClassic ? SearchConfig::classic()
                                    : SearchConfig::large();
}

namespace {

BenchConfig config_from_json(const json& j, const SearchConfig& base) {
  BenchConfig c;
  c.search = base;
  c.search.time_limit = j.value("time_limit", base.time_limit);
  c.search.workers = j.value("workers", base.workers);
  c.search.seed = j.value("seed", base.seed);
  if (j.contains("mode")) {
    c.search.mode = parse_search_mode(j.at("mode").get<std::string>());
  }
  c.search.lns_fail_limit = j.value("lns_fail_limit", base.lns_fail_limit);
  c.search.relax_fraction = j.value("relax_fraction", base.relax_fraction);
  c.search.lns_trigger_nodes = j.value("lns_trigger_nodes", base.lns_trigger_nodes);
  c.search.lns_stall_iterations =
      j.value("lns_stall_iterations", base.lns_stall_iterations);
  c.search.proof_fail_budget =
      j.value("proof_fail_budget", base.proof_fail_budget);
  c.search.shave_depth = j.value("shave_depth", base.shave_depth);
  c.search.shave_max_ops = j.value("shave_max_ops", base.shave_max_ops);
  c.search.rules.edge_finding = j.value("edge_finding", base.rules.edge_finding);
  c.search.rules.not_first_not_last =
      j.value("not_first_not_last", base.rules.not_first_not_last);
  c.search.validate();
  c.name = j.value("name", c.search.digest());
  return c;
}

}  // namespace

Manifest read_manifest(const std::filesystem::path& path, Preset preset) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto dir = path.parent_path();
  const SearchConfig base = preset_config(preset);
  auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : dir / fp;
  };

  Manifest manifest;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j = json::parse(text);
    for (const auto& p : j.value("instances", json::array())) {
      manifest.instances.push_back(resolve(p.get<std::string>()));
    }
    for (const auto& c : j.value("configs", json::array())) {
      manifest.configs.push_back(config_from_json(c, base));
    }
  } else {
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos || line[b] == '#') continue;
      auto e = line.find_last_not_of(" \t\r");
      manifest.instances.push_back(resolve(line.substr(b, e - b + 1)));
    }
  }
  if (manifest.configs.empty()) {
    BenchConfig single{"single", base};
    BenchConfig quad{"quad", base};
    quad.search.workers = 4;
    manifest.configs = {single, quad};
  }
  return manifest;
}

namespace {

json to_json(const RunResult& r) {
  json j;
  j["instance"] = r.instance;
  j["config"] = r.config;
  j["makespan"] = r.makespan ? json(*r.makespan) : json(nullptr);
  j["proven"] = r.proven;
  j["wall_time_s"] = r.wall_time;
  j["time_to_best_s"] = r.time_to_best;
  j["valid"] = r.valid;
  return j;
}

}  // namespace

std::vector<RunResult> run_benchmark(const Manifest& manifest,
                                     const BenchOptions& options) {
  const SolverFn solver = options.solver ? options.solver : SolverFn(solve);
  std::ofstream csv;
  if (!options.out_dir.empty()) {
    std::filesystem::create_directories(options.out_dir);
    csv.open(options.out_dir / "results.csv");
    if (!csv) throw std::runtime_error("cannot write results.csv");
    write_results_csv_header(csv);
  }

  std::vector<RunResult> rows;
  for (const auto& path : manifest.instances) {
    std::optional<Instance> inst;
    std::string load_error;
    try {
      inst = read_instance_file(path);
    } catch (const std::exception& e) {
      load_error = e.what();
    }
    for (const BenchConfig& config : manifest.configs) {
      RunResult row;
      row.instance = inst ? inst->name() : path.stem().string();
      row.config = config.name;
      if (!inst) {
        row.valid = false;
      } else {
        try {
          SearchResult res = solver(*inst, config.search);
          row.wall_time = res.stats.wall_time;
          row.time_to_best = res.stats.time_to_best;
          if (res.incumbent.best) {
            row.makespan = res.incumbent.best->makespan;
            row.proven = res.incumbent.proven;
            if (!validate_solution(*inst, *res.incumbent.best)) {
              row.valid = false;
              row.proven = false;
            }
          }
        } catch (const std::exception&) {
          row.valid = false;
          row.makespan.reset();
        }
      }
      if (csv.is_open()) {
        write_results_csv_row(csv, row);
        csv.flush();
      }
      if (options.on_row) options.on_row(row);
      rows.push_back(std::move(row));
    }
  }

  if (!options.out_dir.empty()) {
    json report = json::array();
    for (const RunResult& r : rows) report.push_back(to_json(r));
    std::ofstream(options.out_dir / "results.json") << report.dump(2) << '\n';
    std::ofstream(options.out_dir / "table.txt") << format_table(rows);
  }
  return rows;
}

std::string format_table(const std::vector<RunResult>& rows) {
  std::vector<std::string> instances;
  std::vector<std::string> configs;
  std::map<std::pair<std::string, std::string>, std::string> cells;
  for (const RunResult& r : rows) {
    if (std::find(instances.begin(), instances.end(), r.instance) == instances.end()) {
      instances.push_back(r.instance);
    }
    if (std::find(configs.begin(), configs.end(), r.config) == configs.end()) {
      configs.push_back(r.config);
    }
    std::string cell;
    if (!r.valid) {
      cell = "INVALID";
    } else if (!r.makespan) {
      cell = "No Solution";
    } else {
      cell = std::to_string(*r.makespan);
      if (r.proven) {
        std::ostringstream t;
        t << std::fixed << std::setprecision(1) << r.time_to_best;
        cell += " (" + t.str() + ")";
      }
    }
    cells[{r.instance, r.config}] = cell;
  }
  std::size_t w0 = 8;
  for (const auto& i : instances) w0 = std::max(w0, i.size());
  std::vector<std::size_t> widths;
  for (const auto& c : configs) {
    std::size_t w = c.size();
    for (const auto& i : instances) w = std::max(w, cells[{i, c}].size());
    widths.push_back(w);
  }
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(w0)) << "instance";
  for (std::size_t c = 0; c < configs.size(); ++c) {
    out << " | " << std::setw(static_cast<int>(widths[c])) << configs[c];
  }
  out << '\n';
  for (const auto& i : instances) {
    out << std::setw(static_cast<int>(w0)) << i;
    for (std::size_t c = 0; c < configs.size(); ++c) {
      auto it = cells.find({i, configs[c]});
      out << " | " << std::setw(static_cast<int>(widths[c]))
          << (it == cells.end() ? std::string("-") : it->second);
    }
    out << '\n';
  }
  return out.str();
}

std::string format_scores(const ScoreTable& table) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  for (const std::string& c : table.configs) {
    out << c << ": " << table.points.at(c) << '\n';
  }
  return out.str();
}

}  // namespace jobshop
