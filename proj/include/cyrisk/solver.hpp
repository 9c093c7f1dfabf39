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
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cyrisk/model.hpp"
#include "cyrisk/objective.hpp"

namespace cyrisk {

/// Restrictions on the purchase plan, used for baseline comparisons.
/// Repair packages remain allowed in every mode.
enum class BaselineMode {
  kFull,                     // all package types allowed
  kNoInsurance,              // insurance choices forced to none
  kNoSecurity,               // security choices forced to none
  kNoSecurityNoInsurance,    // only repair choices allowed
};

inline constexpr BaselineMode kAllBaselineModes[] = {
    BaselineMode::kFull, BaselineMode::kNoInsurance, BaselineMode::kNoSecurity,
    BaselineMode::kNoSecurityNoInsurance};

inline std::string_view to_string(BaselineMode mode) {
  switch (mode) {
    case BaselineMode::kFull: return "full";
    case BaselineMode::kNoInsurance: return "no-insurance";
    case BaselineMode::kNoSecurity: return "no-security";
    case BaselineMode::kNoSecurityNoInsurance: return "none";
  }
  return "?";
}

inline std::optional<BaselineMode> baseline_mode_from_string(std::string_view s) {
  for (BaselineMode m : kAllBaselineModes)
    if (to_string(m) == s) return m;
  return std::nullopt;
}

/**
 * One attack's slice of a decision together with its budget and objective
 * contributions. The objective and the budget constraint are both additive
 * over attacks, so a full decision is exactly one bundle per attack and the
 * problem is a multiple-choice knapsack over bundle lists.
 */
struct Bundle {
  std::size_t attack_index = 0;
  OptionChoice security;
  OptionChoice insurance;
  std::vector<OptionChoice> repairs;
  double spend_contribution = 0.0;
  double cost_contribution = 0.0;
};

/// Result of an exact solve. `objective` equals
/// total_cost(instance, decision).total up to floating-point reassociation,
/// and the decision always satisfies is_feasible.
struct SolveResult {
  Decision decision;
  double objective = 0.0;
  CostBreakdown breakdown;
  double spend = 0.0;
  std::uint64_t nodes_explored = 0;
  std::string solver_name;
};

/// Default cap on the total decision count of solve_bruteforce.
inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/**
 * All attack-local choice combinations permitted by the mode, in
 * lexicographic order of (security, insurance, repair[0], ..., repair[G-1])
 * with "none" ordered first in every position. The all-none bundle is
 * therefore always element 0.
 */
inline std::vector<Bundle> enumerate_bundles(const RiskInstance& instance,
                                             std::size_t attack_index,
                                             BaselineMode mode = BaselineMode::kFull) {
  const Attack& a = instance.attacks.at(attack_index);
  const bool allow_security = mode == BaselineMode::kFull ||
                              mode == BaselineMode::kNoInsurance;
  const bool allow_insurance = mode == BaselineMode::kFull ||
                               mode == BaselineMode::kNoSecurity;

  std::vector<OptionChoice> security_choices{std::nullopt};
  if (allow_security)
    for (std::size_t n = 0; n < a.security_options.size(); ++n)
      security_choices.push_back(n);
  std::vector<OptionChoice> insurance_choices{std::nullopt};
  if (allow_insurance)
    for (std::size_t m = 0; m < a.insurance_options.size(); ++m)
      insurance_choices.push_back(m);

  const std::size_t direct_count = a.direct_outcomes.size();
  std::vector<Bundle> out;
  std::vector<OptionChoice> repairs(direct_count, std::nullopt);

  // Odometer over repair choices, least-significant digit last.
  const auto repair_digit_count = [&](std::size_t g) {
    return g < a.repair_options.size() ? a.repair_options[g].size() + 1 : 1;
  };
  for (OptionChoice sec : security_choices) {
    for (OptionChoice ins : insurance_choices) {
      std::fill(repairs.begin(), repairs.end(), std::nullopt);
      while (true) {
        Bundle b;
        b.attack_index = attack_index;
        b.security = sec;
        b.insurance = ins;
        b.repairs = repairs;
        b.spend_contribution = detail::attack_spend(a, sec, ins, repairs);
        b.cost_contribution = detail::attack_total(a, sec, ins, repairs);
        out.push_back(std::move(b));

        std::size_t g = direct_count;
        bool done = direct_count == 0;
        while (g > 0) {
          --g;
          const std::size_t digits = repair_digit_count(g);
          const std::size_t next = repairs[g] ? *repairs[g] + 2 : 1;
          if (next < digits) {
            repairs[g] = next - 1;
            break;
          }
          repairs[g] = std::nullopt;
          if (g == 0) done = true;
        }
        if (done) break;
      }
    }
  }
  return out;
}

namespace detail {

inline Decision decision_from_bundles(
    const RiskInstance& instance,
    const std::vector<std::vector<Bundle>>& bundles,
    const std::vector<std::size_t>& picks) {
  Decision d = Decision::all_none(instance);
  for (std::size_t k = 0; k < picks.size(); ++k) {
    const Bundle& b = bundles[k][picks[k]];
    d.security[k] = b.security;
    d.insurance[k] = b.insurance;
    d.repair[k] = b.repairs;
  }
  return d;
}

inline SolveResult finish_result(const RiskInstance& instance,
                                 const std::vector<std::vector<Bundle>>& bundles,
                                 const std::vector<std::size_t>& picks,
                                 double objective, std::uint64_t nodes,
                                 std::string solver_name) {
  SolveResult r;
  r.decision = decision_from_bundles(instance, bundles, picks);
  r.objective = objective;
  r.breakdown = total_cost(instance, r.decision);
  r.spend = spend(instance, r.decision);
  r.nodes_explored = nodes;
  r.solver_name = std::move(solver_name);
  return r;
}

}  // namespace detail

/**
 * Globally optimal feasible decision by exhaustive enumeration of all
 * bundle combinations. Ties are broken toward the lexicographically
 * smallest bundle-index vector, i.e. none-choices preferred, which the
 * enumeration order provides for free. Intended as the reference oracle;
 * throws EnumerationTooLarge when the decision count exceeds `cap`.
 */
inline SolveResult solve_bruteforce(const RiskInstance& instance,
                                    BaselineMode mode = BaselineMode::kFull,
                                    std::uint64_t cap = kDefaultEnumerationCap) {
  const std::size_t k_count = instance.attacks.size();
  std::vector<std::vector<Bundle>> bundles;
  bundles.reserve(k_count);
  double decision_count = 1.0;
  for (std::size_t k = 0; k < k_count; ++k) {
    bundles.push_back(enumerate_bundles(instance, k, mode));
    decision_count *= static_cast<double>(bundles.back().size());
    if (decision_count > static_cast<double>(cap))
      throw EnumerationTooLarge("decision count exceeds cap of " +
                                std::to_string(cap));
  }

  std::vector<std::size_t> picks(k_count, 0);
  std::vector<std::size_t> best_picks(k_count, 0);
  double best_cost = std::numeric_limits<double>::infinity();
  std::uint64_t leaves = 0;

  const auto visit = [&](const auto& self, std::size_t k, double acc_spend,
                         double acc_cost) -> void {
    if (k == k_count) {
      ++leaves;
      if (acc_spend <= instance.budget + kTolerance && acc_cost < best_cost) {
        best_cost = acc_cost;
        best_picks = picks;
      }
      return;
    }
    for (std::size_t i = 0; i < bundles[k].size(); ++i) {
      picks[k] = i;
      self(self, k + 1, acc_spend + bundles[k][i].spend_contribution,
           acc_cost + bundles[k][i].cost_contribution);
    }
  };
  visit(visit, 0, 0.0, 0.0);

  return detail::finish_result(instance, bundles, best_picks, best_cost,
                               leaves, "bruteforce");
}

/**
 * Same optimum as solve_bruteforce (objective within 1e-9; the decision may
 * differ only among exact ties), via depth-first branch-and-bound over
 * attacks. The lower bound of a partial assignment adds each unassigned
 * attack's cheapest bundle ignoring the budget; a node is pruned when its
 * bound cannot beat the incumbent by more than 1e-12 or when no completion
 * can fit the budget. The incumbent starts at the always-feasible all-none
 * decision. Single-threaded; parallel node processing would only need a
 * shared incumbent.
 */
inline SolveResult solve_bnb(const RiskInstance& instance,
                             BaselineMode mode = BaselineMode::kFull) {
  const std::size_t k_count = instance.attacks.size();
  std::vector<std::vector<Bundle>> bundles;
  bundles.reserve(k_count);
  for (std::size_t k = 0; k < k_count; ++k)
    bundles.push_back(enumerate_bundles(instance, k, mode));

  // Suffix sums of per-attack minima, used for bounds at depth k.
  std::vector<double> min_cost_suffix(k_count + 1, 0.0);
  std::vector<double> min_spend_suffix(k_count + 1, 0.0);
  for (std::size_t k = k_count; k-- > 0;) {
    double min_cost = std::numeric_limits<double>::infinity();
    double min_spend = std::numeric_limits<double>::infinity();
    for (const Bundle& b : bundles[k]) {
      if (b.cost_contribution < min_cost) min_cost = b.cost_contribution;
      if (b.spend_contribution < min_spend) min_spend = b.spend_contribution;
    }
    min_cost_suffix[k] = min_cost + min_cost_suffix[k + 1];
    min_spend_suffix[k] = min_spend + min_spend_suffix[k + 1];
  }

  // All-none incumbent: picks 0 everywhere, spend 0, always feasible.
  std::vector<std::size_t> best_picks(k_count, 0);
  double best_cost = 0.0;
  for (std::size_t k = 0; k < k_count; ++k)
    best_cost += bundles[k][0].cost_contribution;

  std::vector<std::size_t> picks(k_count, 0);
  std::uint64_t nodes = 0;

  const auto visit = [&](const auto& self, std::size_t k, double acc_spend,
                         double acc_cost) -> void {
    for (std::size_t i = 0; i < bundles[k].size(); ++i) {
      ++nodes;
      const Bundle& b = bundles[k][i];
      if (acc_spend + b.spend_contribution + min_spend_suffix[k + 1] >
          instance.budget + kTolerance)
        continue;
      const double bound =
          acc_cost + b.cost_contribution + min_cost_suffix[k + 1];
      if (bound >= best_cost - 1e-12) continue;
      picks[k] = i;
      if (k + 1 == k_count) {
        best_cost = acc_cost + b.cost_contribution;
        best_picks = picks;
      } else {
        self(self, k + 1, acc_spend + b.spend_contribution,
             acc_cost + b.cost_contribution);
      }
    }
  };
  if (k_count > 0) visit(visit, 0, 0.0, 0.0);

  return detail::finish_result(instance, bundles, best_picks, best_cost, nodes,
                               "bnb");
}

/// Optimal solve per baseline mode. Full's feasible set contains every
/// baseline's, so its objective is never larger than theirs.
inline std::map<BaselineMode, SolveResult> solve_baselines(
    const RiskInstance& instance) {
  std::map<BaselineMode, SolveResult> out;
  for (BaselineMode mode : kAllBaselineModes)
    out.emplace(mode, solve_bnb(instance, mode));
  return out;
}

}  // namespace cyrisk
