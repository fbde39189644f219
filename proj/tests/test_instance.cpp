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


#include <doctest.h>

#include <random>
#include <sstream>

#include "jobshop/instance.hpp"
#include "test_util.hpp"

using namespace jobshop;

namespace {

constexpr const char* kFt06 = R"(# ft06
6 6
2 1 0 3 1 6 3 7 5 3 4 6
1 8 2 5 4 10 5 10 0 10 3 4
2 5 3 4 5 8 0 9 1 1 4 7
1 5 0 5 2 5 3 3 4 8 5 9
2 9 1 3 4 5 5 4 0 3 3 1
1 3 3 3 5 9 0 10 4 4 2 1
)";

Instance two_by_two() {
  return Instance("tiny", 2, {Job{{{0, 3}, {1, 2}}}, Job{{{1, 4}, {0, 1}}}});
}

}  // namespace

TEST_CASE("parse a rectangular instance") {
  Instance inst = parse_instance(std::string_view(kFt06), "ft06");
  CHECK(inst.name() == "ft06");
  CHECK(inst.num_jobs() == 6);
  CHECK(inst.num_machines() == 6);
  CHECK(inst.num_ops() == 36);
  CHECK(inst.is_rectangular());
  CHECK_FALSE(inst.has_recirculation());
  CHECK(inst.job(0).ops[0] == Operation{2, 1});
  CHECK(inst.job(5).ops[5] == Operation{2, 1});
  CHECK(machine_load_bound(inst) == 43);
  CHECK(job_length_bound(inst) == 47);
  CHECK(lower_bound(inst) == 47);
}

TEST_CASE("parse job lines with an operation count") {
  Instance inst = parse_instance(std::string_view("2 3\n2 0 5 2 1\n1 1 4\n"));
  CHECK(inst.num_jobs() == 2);
  CHECK(inst.job(0).ops.size() == 2);
  CHECK(inst.job(1).ops == std::vector<Operation>{{1, 4}});
  CHECK_FALSE(inst.is_rectangular());
}

TEST_CASE("comments and blank lines are ignored") {
  Instance inst = parse_instance(
      std::string_view("# header\n\n1 1\n# more\n\n0 7\n\n"));
  CHECK(inst.num_ops() == 1);
  CHECK(inst.op(0).duration == 7);
}

TEST_CASE("recirculation is accepted") {
  Instance inst = parse_instance(std::string_view("1 2\n0 1 1 2 0 3\n"));
  CHECK(inst.has_recirculation());
  CHECK(inst.machine_ops()[0] == std::vector<int>{0, 2});
  CHECK(lower_bound(inst) == 6);
}

TEST_CASE("parse errors carry line numbers") {
  auto line_of = [](const char* text) {
    try {
      parse_instance(std::string_view(text));
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("") == 0);
  CHECK(line_of("x 2\n") == 1);
  CHECK(line_of("1 2\n0 0\n") == 2);       // zero duration
  CHECK(line_of("1 2\n0 -3\n") == 2);      // negative duration
  CHECK(line_of("1 2\n2 5\n") == 2);       // machine out of range
  CHECK(line_of("1 2\n3 0 5 1 5\n") == 2); // count disagrees with tokens
  CHECK(line_of("1 2\n0 5 1\n") == 2);     // odd tokens without a count
  CHECK(line_of("2 2\n0 5 1 5\n") == 2);   // missing job line
  CHECK(line_of("1 2\n0 5 1 5\n0 1\n") == 3);  // extra data
  CHECK(line_of("1 2\n# note\n0 5 1 5\n") == -1);
  CHECK(line_of("1 2\n0 5 1 5 # not a comment\n") == 2);
}

TEST_CASE("instance constructor validates") {
  CHECK_THROWS_AS(Instance("x", 1, {Job{}}), std::invalid_argument);
  CHECK_THROWS_AS(Instance("x", 1, {Job{{{0, 0}}}}), std::invalid_argument);
  CHECK_THROWS_AS(Instance("x", 1, {Job{{{1, 1}}}}), std::invalid_argument);
  CHECK_THROWS_AS(Instance("x", -1, {}), std::invalid_argument);
}

TEST_CASE("op ids are job-major") {
  Instance inst = two_by_two();
  CHECK(inst.op_id(1, 0) == 2);
  CHECK(inst.first_op(1) == 2);
  CHECK(inst.last_op(0) == 1);
  CHECK(inst.job_of(3) == 1);
  CHECK(inst.index_of(3) == 1);
  CHECK(inst.machine_ops()[1] == std::vector<int>{1, 2});
  CHECK(inst.total_duration() == 10);
}

TEST_CASE("write then parse round-trips random instances") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    Instance inst =
        testing::random_instance(rng, 6, 5, 7, 50, trial % 2 == 0);
    const std::string text = write_instance(inst);
    Instance back = parse_instance(std::string_view(text));
    REQUIRE(back == inst);
    CHECK(write_instance(back) == text);
  }
}

TEST_CASE("rectangular instances are written without counts") {
  Instance inst = parse_instance(std::string_view(kFt06));
  std::istringstream lines(write_instance(inst));
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  CHECK(header == "6 6");
  CHECK(first == "2 1 0 3 1 6 3 7 5 3 4 6");
}

TEST_CASE("successor arrays are normalised into chains") {
  // Job 0 stored out of order: op 1 comes first, then op 0.
  Instance inst = from_successor_arrays(
      "succ", 2, {{0, 1}, {1}}, {{3, 4}, {2}}, {{-1, 0}, {-1}});
  CHECK(inst.job(0).ops == std::vector<Operation>{{1, 4}, {0, 3}});
  CHECK(inst.job(1).ops == std::vector<Operation>{{1, 2}});
  CHECK_THROWS_AS(from_successor_arrays("bad", 1, {{0, 0}}, {{1, 1}},
                                        {{1, 0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(from_successor_arrays("bad", 1, {{0, 0}}, {{1, 1}},
                                        {{-1, -1}}),
                  std::invalid_argument);
}

TEST_CASE("bounds") {
  Instance inst = two_by_two();
  CHECK(machine_load_bound(inst) == 6);
  CHECK(job_length_bound(inst) == 5);
  CHECK(lower_bound(inst) == 6);
}

TEST_CASE("validate_solution reports each violation kind") {
  Instance inst = two_by_two();
  Solution good = make_solution(inst, {{0, 4}, {0, 4}});
  CHECK(good.makespan == 6);
  CHECK(validate_solution(inst, good).ok());

  Solution shape = good;
  shape.starts[1].pop_back();
  CHECK(validate_solution(inst, shape).violation->kind == ViolationKind::kShape);

  Solution negative = make_solution(inst, {{-1, 4}, {0, 4}});
  CHECK(validate_solution(inst, negative).violation->kind ==
        ViolationKind::kNegativeStart);

  Solution prec = make_solution(inst, {{0, 2}, {0, 4}});
  auto v = validate_solution(inst, prec).violation;
  REQUIRE(v);
  CHECK(v->kind == ViolationKind::kPrecedence);
  CHECK(v->job == 0);

  Solution overlap = make_solution(inst, {{0, 3}, {2, 6}});
  v = validate_solution(inst, overlap).violation;
  REQUIRE(v);
  CHECK(v->kind == ViolationKind::kOverlap);
  CHECK(v->machine == 1);

  Solution span = good;
  span.makespan = 7;
  CHECK(validate_solution(inst, span).violation->kind ==
        ViolationKind::kMakespan);
}

TEST_CASE("touching intervals do not overlap") {
  Instance inst("touch", 1, {Job{{{0, 2}}}, Job{{{0, 3}}}});
  CHECK(validate_solution(inst, make_solution(inst, {{0}, {2}})).ok());
  CHECK_FALSE(validate_solution(inst, make_solution(inst, {{0}, {1}})).ok());
}

TEST_CASE("solution JSON round-trip") {
  Instance inst = two_by_two();
  Solution sol = make_solution(inst, {{0, 4}, {0, 4}});
  sol.instance = "tiny";
  const std::string text = solution_to_json(sol);
  CHECK(text.find("\"makespan\"") != std::string::npos);
  CHECK(solution_from_json(text) == sol);
  CHECK_THROWS(solution_from_json("{\"instance\": \"x\"}"));
  CHECK_THROWS(solution_from_json("not json"));
}

TEST_CASE("classic data files parse") {
  int count = 0;
  for (const auto& entry :
       std::filesystem::directory_iterator(testing::data_dir() / "classic")) {
    if (entry.path().extension() != ".jss") continue;
    Instance inst = read_instance_file(entry.path());
    CHECK(inst.name() == entry.path().stem().string());
    CHECK(inst.num_ops() > 0);
    ++count;
  }
  CHECK(count >= 70);
}
