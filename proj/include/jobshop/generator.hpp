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

#ifndef JOBSHOP_GENERATOR_HPP_
#define JOBSHOP_GENERATOR_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "jobshop/instance.hpp"

namespace jobshop {

enum class Flavor { kLongJobs, kShortJobs };

std::string_view to_string(Flavor flavor);  // "long" / "short"
Flavor parse_flavor(std::string_view text);

// Parameters of a known-optimum instance. Every machine is loaded to
// exactly `optimum`, so the machine-load bound proves optimality.
struct GeneratorSpec {
  Flavor flavor = Flavor::kLongJobs;
  int num_machines = 100;
  int num_ops = 10000;
  std::uint64_t seed = 1;
  Time optimum = 600000;
  Time min_duration = 10;
  Time max_duration = 1000;
  // shortJobs only: chance to open a new job although one could be extended.
  double new_chain_probability = 0.5;
  // shortJobs only: maximum ops per job; 0 means ceil(2 * ops / machines).
  int chain_cap = 0;

  // Throws std::invalid_argument when no instance can satisfy the spec.
  void validate() const;
  int effective_chain_cap() const;
  // "<flavor>-<machines>-<ops>-<seed>", also the file stem.
  std::string name() const;
};

// Deterministic, platform-independent generator stream (splitmix64).
class GeneratorRng {
 public:
  explicit GeneratorRng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  double uniform01();

 private:
  std::uint64_t state_;
};

struct Segment {
  int machine = 0;
  Time start = 0;
  Time duration = 1;

  Time end() const { return start + duration; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

// tiling[m]: abutting segments covering [0, optimum) on machine m.
using MachineTiling = std::vector<std::vector<Segment>>;

MachineTiling tile_machine_timelines(const GeneratorSpec& spec,
                                     GeneratorRng& rng);

// Splits the segments into chains (future jobs) whose segments do not
// overlap and appear in time order. Chains are returned by first start.
std::vector<std::vector<Segment>> chain_decompose(const MachineTiling& tiling,
                                                  const GeneratorSpec& spec,
                                                  GeneratorRng& rng);

struct Certificate {
  Solution schedule;
  bool machine_load_ok = false;
};

struct GeneratedInstance {
  Instance instance;
  Certificate certificate;
};

GeneratedInstance generate_instance(const GeneratorSpec& spec);

}  // namespace jobshop

#endif  // JOBSHOP_GENERATOR_HPP_
