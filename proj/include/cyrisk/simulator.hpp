// Copyright 2026 The cyrisk Authors
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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "cyrisk/model.hpp"
#include "cyrisk/objective.hpp"

namespace cyrisk {

/**
 * SplitMix64 pseudo-random generator (Steele, Lea & Flood's mixing
 * constants). Chosen because it is a named, portable algorithm whose output
 * is fully determined by its 64-bit seed on every platform, and because
 * independent streams can be derived from a master seed by index, which is
 * what makes simulation results independent of how runs are batched across
 * workers.
 */
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), from the top 53 bits of next().
  constexpr double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

/// Identity string recorded in every SimulationSummary.
inline constexpr const char* kGeneratorName = "splitmix64";

/// Derives the sub-stream seed for one run. Run i of a simulation always
/// sees SplitMix64(derive_stream_seed(master_seed, i)) no matter which
/// worker executes it.
inline constexpr std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                                  std::uint64_t stream_index) {
  SplitMix64 mixer(master_seed ^ (0xBF58476D1CE4E5B9ull * (stream_index + 1)));
  return mixer.next();
}

/**
 * Aggregate of a seeded simulation. `std_error` is the sample standard
 * deviation over sqrt(runs); with a single run it is reported as 0 and
 * `degenerate_sample` is set. The three stage means sum to `mean_cost` up
 * to floating-point reassociation.
 */
struct SimulationSummary {
  std::uint64_t runs = 0;
  double mean_cost = 0.0;
  double std_error = 0.0;
  double mean_stage1 = 0.0;
  double mean_stage2 = 0.0;
  double mean_stage3 = 0.0;
  std::uint64_t seed = 0;
  std::string generator = kGeneratorName;
  bool degenerate_sample = false;
};

namespace detail {

struct RealizedStages {
  double stage1 = 0.0;
  double stage2 = 0.0;
  double stage3 = 0.0;
  double total() const { return stage1 + stage2 + stage3; }
};

inline std::size_t sample_index(const auto& outcomes, double u) {
  double cumulative = 0.0;
  for (std::size_t i = 0; i + 1 < outcomes.size(); ++i) {
    cumulative += outcomes[i].probability;
    if (u < cumulative) return i;
  }
  return outcomes.empty() ? 0 : outcomes.size() - 1;
}

/// One pass through the three stages. Draw order per attack: occurrence,
/// then (only if a security package was bought) prevention, then on success
/// the direct-loss index and the indirect-loss index.
inline RealizedStages sample_stages(const RiskInstance& instance,
                                    const Decision& decision,
                                    SplitMix64& rng) {
  RealizedStages r;
  for (std::size_t k = 0; k < instance.attacks.size(); ++k) {
    const Attack& a = instance.attacks[k];
    r.stage1 += chosen_security_fee(a, decision.security[k]) +
                chosen_premium(a, decision.insurance[k]);

    if (rng.next_unit() >= a.occurrence_probability) continue;  // no attack
    if (decision.security[k]) {
      const double prevention = chosen_prevention(a, decision.security[k]);
      if (rng.next_unit() < prevention) continue;  // prevented
    }

    const std::size_t g = sample_index(a.direct_outcomes, rng.next_unit());
    const DirectLossOutcome& d = a.direct_outcomes[g];
    r.stage2 += d.amount + chosen_repair_fee(a, g, decision.repair[k][g]);

    const std::size_t e = sample_index(d.indirect_outcomes, rng.next_unit());
    const double remaining =
        1.0 - chosen_repair_reduction(a, g, decision.repair[k][g]);
    r.stage3 += remaining * d.indirect_outcomes[e].amount;
    r.stage3 -= chosen_coverage(a, decision.insurance[k]) * d.amount;
  }
  return r;
}

}  // namespace detail

/**
 * Simulates one business period for a fixed decision and returns the
 * realized signed total cost: upfront fees, plus per successful attack the
 * direct loss, the chosen repair fee, the residual indirect loss, minus the
 * insurance claim.
 */
inline double sample_run(const RiskInstance& instance, const Decision& decision,
                         SplitMix64& rng) {
  detail::require_well_formed(instance, decision);
  return detail::sample_stages(instance, decision, rng).total();
}

/**
 * Seeded Monte Carlo estimate of the expected total cost over independent
 * runs. Run i draws from its own SplitMix64 sub-stream derived from
 * (seed, i), and runs are accumulated in fixed-size blocks that are reduced
 * in index order, so the summary is byte-identical for a given
 * (instance, decision, runs, seed) regardless of `threads` (0 = hardware
 * concurrency).
 */
inline SimulationSummary simulate(const RiskInstance& instance,
                                  const Decision& decision, std::uint64_t runs,
                                  std::uint64_t seed, unsigned threads = 1) {
  detail::require_well_formed(instance, decision);
  if (runs == 0) throw std::invalid_argument("runs must be >= 1");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  constexpr std::uint64_t kBlock = 8192;
  const std::uint64_t block_count = (runs + kBlock - 1) / kBlock;

  struct BlockSums {
    double total = 0.0, total_sq = 0.0;
    double stage1 = 0.0, stage2 = 0.0, stage3 = 0.0;
  };
  std::vector<BlockSums> blocks(block_count);

  const auto run_block = [&](std::uint64_t b) {
    BlockSums sums;
    const std::uint64_t begin = b * kBlock;
    const std::uint64_t end = std::min(runs, begin + kBlock);
    for (std::uint64_t i = begin; i < end; ++i) {
      SplitMix64 rng(derive_stream_seed(seed, i));
      const detail::RealizedStages r =
          detail::sample_stages(instance, decision, rng);
      const double total = r.total();
      sums.total += total;
      sums.total_sq += total * total;
      sums.stage1 += r.stage1;
      sums.stage2 += r.stage2;
      sums.stage3 += r.stage3;
    }
    blocks[b] = sums;
  };

  if (threads <= 1 || block_count <= 1) {
    for (std::uint64_t b = 0; b < block_count; ++b) run_block(b);
  } else {
    std::vector<std::thread> workers;
    const unsigned worker_count =
        static_cast<unsigned>(std::min<std::uint64_t>(threads, block_count));
    for (unsigned w = 0; w < worker_count; ++w)
      workers.emplace_back([&, w] {
        for (std::uint64_t b = w; b < block_count; b += worker_count)
          run_block(b);
      });
    for (auto& t : workers) t.join();
  }

  BlockSums sums;
  for (const BlockSums& b : blocks) {
    sums.total += b.total;
    sums.total_sq += b.total_sq;
    sums.stage1 += b.stage1;
    sums.stage2 += b.stage2;
    sums.stage3 += b.stage3;
  }

  SimulationSummary s;
  s.runs = runs;
  s.seed = seed;
  s.mean_cost = sums.total / static_cast<double>(runs);
  s.mean_stage1 = sums.stage1 / static_cast<double>(runs);
  s.mean_stage2 = sums.stage2 / static_cast<double>(runs);
  s.mean_stage3 = sums.stage3 / static_cast<double>(runs);
  if (runs == 1) {
    s.std_error = 0.0;
    s.degenerate_sample = true;
  } else {
    const double n = static_cast<double>(runs);
    const double variance =
        std::max(0.0, (sums.total_sq - n * s.mean_cost * s.mean_cost) / (n - 1.0));
    s.std_error = std::sqrt(variance / n);
  }
  return s;
}

}  // namespace cyrisk
