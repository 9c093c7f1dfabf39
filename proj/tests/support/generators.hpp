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

// Seeded random instances and decisions for property tests.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cyrisk/model.hpp"
#include "cyrisk/simulator.hpp"

namespace cyrisk::test {

struct GeneratorLimits {
  std::size_t max_attacks = 3;
  std::size_t max_security = 3;
  std::size_t max_insurance = 3;
  std::size_t max_repair = 3;
  std::size_t max_direct = 3;
  std::size_t max_indirect = 3;
  double max_amount = 10.0;
  double max_fee = 3.0;
  double max_budget = 8.0;
  // Redraw until the full-mode decision space is at most this large, so
  // brute-force cross-checks stay fast.
  double max_decision_space = 1e6;
};

inline std::size_t pick(SplitMix64& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.next_unit() *
                                       static_cast<double>(hi - lo + 1));
}

inline double uniform(SplitMix64& rng, double lo, double hi) {
  return lo + rng.next_unit() * (hi - lo);
}

/// Positive weights normalized to sum to 1.
inline std::vector<double> random_distribution(SplitMix64& rng, std::size_t n) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (double& x : w) {
    x = 0.05 + rng.next_unit();
    sum += x;
  }
  for (double& x : w) x /= sum;
  return w;
}

inline RiskInstance random_instance(SplitMix64& rng,
                                    const GeneratorLimits& limits = {}) {
  while (true) {
    RiskInstance instance;
    instance.budget = uniform(rng, 0.0, limits.max_budget);
    const std::size_t attack_count = pick(rng, 1, limits.max_attacks);
    double decision_space = 1.0;
    for (std::size_t k = 0; k < attack_count; ++k) {
      Attack a;
      a.name = "a" + std::to_string(k + 1);
      a.occurrence_probability = rng.next_unit();
      const std::size_t direct_count = pick(rng, 1, limits.max_direct);
      const std::size_t indirect_count = pick(rng, 1, limits.max_indirect);
      const std::size_t security_count = pick(rng, 0, limits.max_security);
      const std::size_t insurance_count = pick(rng, 0, limits.max_insurance);
      const std::size_t repair_count = pick(rng, 0, limits.max_repair);

      const std::vector<double> direct_probs = random_distribution(rng, direct_count);
      for (std::size_t g = 0; g < direct_count; ++g) {
        DirectLossOutcome d;
        d.probability = direct_probs[g];
        d.amount = uniform(rng, 0.0, limits.max_amount);
        const std::vector<double> indirect_probs =
            random_distribution(rng, indirect_count);
        for (std::size_t e = 0; e < indirect_count; ++e)
          d.indirect_outcomes.push_back(
              {indirect_probs[e], uniform(rng, 0.0, limits.max_amount)});
        a.direct_outcomes.push_back(std::move(d));

        std::vector<RepairPackage> catalog;
        for (std::size_t u = 0; u < repair_count; ++u)
          catalog.push_back({uniform(rng, 0.0, limits.max_fee), rng.next_unit()});
        a.repair_options.push_back(std::move(catalog));
      }
      for (std::size_t n = 0; n < security_count; ++n)
        a.security_options.push_back(
            {uniform(rng, 0.0, limits.max_fee), rng.next_unit()});
      for (std::size_t m = 0; m < insurance_count; ++m)
        a.insurance_options.push_back(
            {uniform(rng, 0.0, limits.max_fee), rng.next_unit()});

      double per_attack = (security_count + 1.0) * (insurance_count + 1.0);
      for (std::size_t g = 0; g < direct_count; ++g)
        per_attack *= repair_count + 1.0;
      decision_space *= per_attack;

      instance.attacks.push_back(std::move(a));
    }
    if (decision_space <= limits.max_decision_space) return instance;
  }
}

/// Uniform choice per slot, "none" included. Well-formed by construction
/// but not necessarily feasible.
inline Decision random_decision(const RiskInstance& instance, SplitMix64& rng) {
  Decision d = Decision::all_none(instance);
  for (std::size_t k = 0; k < instance.attacks.size(); ++k) {
    const Attack& a = instance.attacks[k];
    std::size_t c = pick(rng, 0, a.security_options.size());
    if (c > 0) d.security[k] = c - 1;
    c = pick(rng, 0, a.insurance_options.size());
    if (c > 0) d.insurance[k] = c - 1;
    for (std::size_t g = 0; g < a.direct_outcomes.size(); ++g) {
      c = pick(rng, 0, a.repair_options[g].size());
      if (c > 0) d.repair[k][g] = c - 1;
    }
  }
  return d;
}

}  // namespace cyrisk::test
