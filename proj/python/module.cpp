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


#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <tuple>
#include <vector>

#include "jobshop/bench.hpp"
#include "jobshop/generator.hpp"
#include "jobshop/instance.hpp"
#include "jobshop/search.hpp"

namespace py = pybind11;
using namespace jobshop;

namespace {

using PyJob = std::vector<std::pair<int, Time>>;

Instance make_instance(std::string name, int num_machines,
                       const std::vector<PyJob>& jobs) {
  std::vector<Job> out;
  out.reserve(jobs.size());
  for (const PyJob& j : jobs) {
    Job job;
    for (auto [m, d] : j) job.ops.push_back({m, d});
    out.push_back(std::move(job));
  }
  return Instance(std::move(name), num_machines, std::move(out));
}

std::vector<PyJob> jobs_of(const Instance& inst) {
  std::vector<PyJob> out;
  for (const Job& job : inst.jobs()) {
    PyJob j;
    for (const Operation& o : job.ops) j.emplace_back(o.machine, o.duration);
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_cpjobshop, m) {
  m.doc() = "Job-shop scheduling solver";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<Operation>(m, "Operation")
      .def(py::init<int, Time>(), py::arg("machine"), py::arg("duration"))
      .def_readwrite("machine", &Operation::machine)
      .def_readwrite("duration", &Operation::duration)
      .def("__repr__", [](const Operation& o) {
        return "Operation(" + std::to_string(o.machine) + ", " +
               std::to_string(o.duration) + ")";
      });

  py::class_<Instance>(m, "Instance")
      .def(py::init(&make_instance), py::arg("name"), py::arg("num_machines"),
           py::arg("jobs"),
           "jobs: list of jobs, each a list of (machine, duration) pairs")
      .def_property_readonly("name", &Instance::name)
      .def_property_readonly("num_jobs", &Instance::num_jobs)
      .def_property_readonly("num_machines", &Instance::num_machines)
      .def_property_readonly("num_ops", &Instance::num_ops)
      .def_property_readonly("jobs", &jobs_of)
      .def("is_rectangular", &Instance::is_rectangular)
      .def("has_recirculation", &Instance::has_recirculation)
      .def("total_duration", &Instance::total_duration)
      .def(py::self == py::self)
      .def("__repr__", [](const Instance& i) {
        return "<Instance " + i.name() + ": " + std::to_string(i.num_jobs()) +
               " jobs, " + std::to_string(i.num_machines()) + " machines>";
      });

  m.def("parse_instance",
        [](const std::string& text, const std::string& name) {
          return parse_instance(std::string_view(text), name);
        },
        py::arg("text"), py::arg("name") = "");
  m.def("read_instance", &read_instance_file, py::arg("path"));
  m.def("write_instance",
        [](const Instance& i) { return write_instance(i); }, py::arg("instance"));
  m.def("lower_bound", &lower_bound, py::arg("instance"));

  py::class_<Solution>(m, "Solution")
      .def(py::init([](const Instance& inst, std::vector<std::vector<Time>> starts) {
             return make_solution(inst, std::move(starts));
           }),
           py::arg("instance"), py::arg("starts"))
      .def_readonly("instance", &Solution::instance)
      .def_readonly("makespan", &Solution::makespan)
      .def_readonly("starts", &Solution::starts)
      .def("to_json", &solution_to_json, py::arg("indent") = -1)
      .def_static("from_json",
                  [](const std::string& text) { return solution_from_json(text); })
      .def(py::self == py::self);

  m.def("validate_solution",
        [](const Instance& inst, const Solution& sol) -> std::optional<std::string> {
          Verdict v = validate_solution(inst, sol);
          if (v.ok()) return std::nullopt;
          return v.violation->message;
        },
        py::arg("instance"), py::arg("solution"),
        "None when the solution is valid, otherwise the first violation");

  py::class_<SearchConfig>(m, "SearchConfig")
      .def(py::init<>())
      .def_static("classic", &SearchConfig::classic)
      .def_static("large", &SearchConfig::large)
      .def_readwrite("time_limit", &SearchConfig::time_limit)
      .def_readwrite("workers", &SearchConfig::workers)
      .def_readwrite("seed", &SearchConfig::seed)
      .def_property(
          "mode", [](const SearchConfig& c) { return std::string(to_string(c.mode)); },
          [](SearchConfig& c, const std::string& s) { c.mode = parse_search_mode(s); })
      .def_readwrite("lns_fail_limit", &SearchConfig::lns_fail_limit)
      .def_readwrite("relax_fraction", &SearchConfig::relax_fraction)
      .def_readwrite("shave_depth", &SearchConfig::shave_depth)
      .def_property(
          "edge_finding", [](const SearchConfig& c) { return c.rules.edge_finding; },
          [](SearchConfig& c, bool v) { c.rules.edge_finding = v; })
      .def_property(
          "not_first_not_last",
          [](const SearchConfig& c) { return c.rules.not_first_not_last; },
          [](SearchConfig& c, bool v) { c.rules.not_first_not_last = v; })
      .def("validate", &SearchConfig::validate)
      .def("digest", &SearchConfig::digest);

  py::class_<SearchResult>(m, "SearchResult")
      .def_property_readonly("best",
                             [](const SearchResult& r) { return r.incumbent.best; })
      .def_property_readonly("makespan",
                             [](const SearchResult& r) -> std::optional<Time> {
                               if (!r.incumbent.best) return std::nullopt;
                               return r.incumbent.best->makespan;
                             })
      .def_property_readonly("proven",
                             [](const SearchResult& r) { return r.incumbent.proven; })
      .def_property_readonly("bound",
                             [](const SearchResult& r) { return r.incumbent.bound; })
      .def_property_readonly("nodes", [](const SearchResult& r) { return r.stats.nodes; })
      .def_property_readonly("fails", [](const SearchResult& r) { return r.stats.fails; })
      .def_property_readonly("lns_iterations",
                             [](const SearchResult& r) { return r.stats.lns_iterations; })
      .def_property_readonly("wall_time",
                             [](const SearchResult& r) { return r.stats.wall_time; })
      .def_property_readonly("time_to_best",
                             [](const SearchResult& r) { return r.stats.time_to_best; })
      .def_property_readonly("trace", [](const SearchResult& r) {
        std::vector<std::tuple<double, Time, int>> out;
        for (const TracePoint& p : r.trace) out.emplace_back(p.time, p.makespan, p.worker);
        return out;
      });

  m.def("solve",
        [](const Instance& inst, std::optional<SearchConfig> cfg) {
          const SearchConfig c = cfg ? *cfg : SearchConfig::classic();
          py::gil_scoped_release release;
          return solve(inst, c);
        },
        py::arg("instance"), py::arg("config") = std::nullopt);

  m.def("brute_force_optimum",
        [](const Instance& inst) {
          OracleResult r = brute_force_optimum(inst);
          return std::make_pair(r.makespan, r.witness);
        },
        py::arg("instance"));

  m.def("generate",
        [](const std::string& flavor, int machines, int ops, std::uint64_t seed,
           Time optimum) {
          GeneratorSpec spec;
          spec.flavor = parse_flavor(flavor);
          spec.num_machines = machines;
          spec.num_ops = ops;
          spec.seed = seed;
          spec.optimum = optimum;
          GeneratedInstance g = generate_instance(spec);
          return std::make_pair(g.instance, g.certificate.schedule);
        },
        py::arg("flavor"), py::arg("machines"), py::arg("ops"), py::arg("seed") = 1,
        py::arg("optimum") = 600000,
        "Returns (instance, certificate schedule)");

  py::class_<RunResult>(m, "RunResult")
      .def(py::init([](std::string instance, std::string config,
                       std::optional<Time> makespan, double time_to_best, bool proven,
                       bool valid) {
             RunResult r;
             r.instance = std::move(instance);
             r.config = std::move(config);
             r.makespan = makespan;
             r.time_to_best = time_to_best;
             r.proven = proven;
             r.valid = valid;
             return r;
           }),
           py::arg("instance"), py::arg("config"), py::arg("makespan"),
           py::arg("time_to_best") = 0.0, py::arg("proven") = false,
           py::arg("valid") = true)
      .def_readonly("instance", &RunResult::instance)
      .def_readonly("config", &RunResult::config)
      .def_readonly("makespan", &RunResult::makespan)
      .def_readonly("time_to_best", &RunResult::time_to_best)
      .def_readonly("proven", &RunResult::proven)
      .def_readonly("valid", &RunResult::valid);

  m.def("score_complete",
        [](const std::vector<RunResult>& rows) {
          ScoreTable t = score_complete(rows);
          return std::make_pair(t.points, t.per_instance);
        },
        py::arg("rows"), "Returns (points per config, per-instance points)");
}
