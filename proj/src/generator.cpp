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

#include "jobshop/generator.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace jobshop {

std::string_view to_string(Flavor flavor) {
  return flavor == Flavor::kLongJobs ? "long" : "short";
}

Flavor parse_flavor(std::string_view text) {
  if (text == "long" || text == "longJobs") return Flavor::kLongJobs;
  if (text == "short" || text == "shortJobs") return Flavor::kShortJobs;
  throw std::invalid_argument("unknown flavor '" + std::string(text) + "'");
}

void GeneratorSpec::validate() const {
  if (num_machines < 1) throw std::invalid_argument("need at least one machine");
  if (num_ops < num_machines) {
    throw std::invalid_argument("ops (" + std::to_string(num_ops) +
                                ") must be >= machines (" +
                                std::to_string(num_machines) + ")");
  }
  if (min_duration < 1 || min_duration > max_duration) {
    throw std::invalid_argument("need 1 <= min duration <= max duration");
  }
  if (optimum < max_duration) {
    throw std::invalid_argument("optimum must be >= max duration");
  }
  if (!(new_chain_probability >= 0.0 && new_chain_probability <= 1.0)) {
    throw std::invalid_argument("new chain probability must be in [0, 1]");
  }
  if (chain_cap < 0) throw std::invalid_argument("chain cap must be >= 0");
  const Time quota = (num_ops + num_machines - 1) / num_machines;
  if (quota * min_duration > optimum) {
    throw std::invalid_argument(
        "infeasible spec: " + std::to_string(quota) + " ops of duration >= " +
        std::to_string(min_duration) + " exceed optimum " +
        std::to_string(optimum));
  }
}

int GeneratorSpec::effective_chain_cap() const {
  if (chain_cap > 0) return chain_cap;
  return static_cast<int>((2LL * num_ops + num_machines - 1) / num_machines);
}

std::string GeneratorSpec::name() const {
  return std::string(to_string(flavor)) + "-" + std::to_string(num_machines) +
         "-" + std::to_string(num_ops) + "-" + std::to_string(seed);
}

std::uint64_t GeneratorRng::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::int64_t GeneratorRng::uniform(std::int64_t lo, std::int64_t hi) {
  const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
  if (range == 0) return static_cast<std::int64_t>(next());
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return lo + static_cast<std::int64_t>(v % range);
}

double GeneratorRng::uniform01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

namespace {

// Durations in [lo, hi] summing to total, close to the sampled proportions.
// When the bounds cannot hold (total > count * hi) they are relaxed and the
// last segment absorbs the rounding.
std::vector<Time> scale_durations(std::vector<Time> sampled, Time total,
                                  Time lo, Time hi) {
  const Time sum = std::accumulate(sampled.begin(), sampled.end(), Time{0});
  const Time count = static_cast<Time>(sampled.size());
  std::vector<Time> out(sampled.size());
  Time assigned = 0;
  for (std::size_t i = 0; i < sampled.size(); ++i) {
    out[i] = std::max<Time>(1, sampled[i] * total / sum);
    assigned += out[i];
  }
  if (count * lo <= total && total <= count * hi) {
    assigned = 0;
    for (Time& d : out) {
      d = std::clamp(d, lo, hi);
      assigned += d;
    }
    Time residual = total - assigned;
    while (residual != 0) {
      for (Time& d : out) {
        if (residual == 0) break;
        const Time delta =
            residual > 0 ? std::min(residual, hi - d) : std::max(residual, lo - d);
        d += delta;
        residual -= delta;
      }
    }
    return out;
  }
  // total > count * hi here, so out[i] >= sampled[i] >= 1 and the residual
  // is non-negative.
  out.back() += total - assigned;
  return out;
}

}  // namespace

MachineTiling tile_machine_timelines(const GeneratorSpec& spec,
                                     GeneratorRng& rng) {
  spec.validate();
  const int machines = spec.num_machines;
  std::vector<int> quota(machines, spec.num_ops / machines);
  std::vector<int> order(machines);
  std::iota(order.begin(), order.end(), 0);
  for (int i = machines - 1; i > 0; --i) {
    std::swap(order[i], order[rng.uniform(0, i)]);
  }
  for (int i = 0; i < spec.num_ops % machines; ++i) ++quota[order[i]];

  MachineTiling tiling(machines);
  for (int m = 0; m < machines; ++m) {
    std::vector<Time> sampled(quota[m]);
    for (Time& d : sampled) d = rng.uniform(spec.min_duration, spec.max_duration);
    std::vector<Time> durations = scale_durations(
        std::move(sampled), spec.optimum, spec.min_duration, spec.max_duration);
    Time t = 0;
    for (Time d : durations) {
      tiling[m].push_back({m, t, d});
      t += d;
    }
  }
  return tiling;
}

std::vector<std::vector<Segment>> chain_decompose(const MachineTiling& tiling,
                                                  const GeneratorSpec& spec,
                                                  GeneratorRng& rng) {
  std::vector<Segment> segments;
  for (const auto& row : tiling) segments.insert(segments.end(), row.begin(), row.end());
  std::sort(segments.begin(), segments.end(), [](const Segment& a, const Segment& b) {
    return a.start != b.start ? a.start < b.start : a.machine < b.machine;
  });

  const bool short_jobs = spec.flavor == Flavor::kShortJobs;
  const int cap = short_jobs ? spec.effective_chain_cap() : 0;
  std::vector<std::vector<Segment>> chains;
  // Chains still running, keyed by the end of their last segment.
  using Pending = std::pair<Time, int>;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> pending;
  // Chains that can take any segment from now on (segments come in start
  // order). Picking any of them keeps the chain count minimal.
  std::vector<int> ready;

  for (const Segment& s : segments) {
    while (!pending.empty() && pending.top().first <= s.start) {
      ready.push_back(pending.top().second);
      pending.pop();
    }
    int chain = -1;
    const bool force_new =
        short_jobs && rng.uniform01() < spec.new_chain_probability;
    if (!ready.empty() && !force_new) {
      const auto pick = static_cast<std::size_t>(
          rng.uniform(0, static_cast<std::int64_t>(ready.size()) - 1));
      chain = ready[pick];
      ready[pick] = ready.back();
      ready.pop_back();
    } else {
      chain = static_cast<int>(chains.size());
      chains.emplace_back();
    }
    chains[chain].push_back(s);
    if (cap == 0 || static_cast<int>(chains[chain].size()) < cap) {
      pending.emplace(s.end(), chain);
    }
  }
  return chains;
}

GeneratedInstance generate_instance(const GeneratorSpec& spec) {
  spec.validate();
  GeneratorRng rng(spec.seed);
  MachineTiling tiling = tile_machine_timelines(spec, rng);
  auto chains = chain_decompose(tiling, spec, rng);

  std::vector<Job> jobs;
  std::vector<std::vector<Time>> starts;
  for (const auto& chain : chains) {
    Job job;
    std::vector<Time> s;
    for (const Segment& seg : chain) {
      job.ops.push_back({seg.machine, seg.duration});
      s.push_back(seg.start);
    }
    jobs.push_back(std::move(job));
    starts.push_back(std::move(s));
  }
  GeneratedInstance out{Instance(spec.name(), spec.num_machines, std::move(jobs)), {}};
  out.certificate.schedule = make_solution(out.instance, std::move(starts));
  out.certificate.machine_load_ok = true;
  for (const auto& row : tiling) {
    Time load = 0;
    for (const Segment& seg : row) load += seg.duration;
    if (load != spec.optimum) out.certificate.machine_load_ok = false;
  }
  return out;
}

}  // namespace jobshop
