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

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cyrisk/model.hpp"

namespace cyrisk {

/// Raised when a joint enumeration would exceed its configured cap.
class EnumerationTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a decision does not fit the instance it is evaluated against.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Default cap on the joint scenario count of expand_scenarios.
inline constexpr std::uint64_t kDefaultScenarioCap = 1'000'000;

/**
 * Expected cost per stage and their sum. `stage1` is the upfront package
 * spend, `stage2` the expected direct losses plus expectation-weighted
 * repair fees, `stage3` the expected residual indirect losses minus expected
 * insurance claims. `stage3`, and hence `total`, may be negative; `total` is
 * always the exact floating-point sum of the three stages.
 */
struct CostBreakdown {
  double stage1 = 0.0;
  double stage2 = 0.0;
  double stage3 = 0.0;
  double total = 0.0;
};

/**
 * What happened to one attack in a joint scenario: it did not occur, it
 * occurred but the purchased security package prevented it, or it succeeded
 * with direct-loss outcome `direct_index` followed by indirect-loss outcome
 * `indirect_index`.
 */
struct AttackRealization {
  enum class Kind { kNotOccurred, kPrevented, kLoss };
  Kind kind = Kind::kNotOccurred;
  std::size_t direct_index = 0;
  std::size_t indirect_index = 0;

  friend bool operator==(const AttackRealization&,
                         const AttackRealization&) = default;
};

/**
 * One joint realization across all attacks. The probability is the product
 * of the per-attack branch probabilities (attack occurrences are sampled
 * independently); over a full scenario set the probabilities sum to 1.
 */
struct Scenario {
  std::vector<AttackRealization> realizations;
  double probability = 0.0;
};

namespace detail {

inline void require_well_formed(const RiskInstance& instance,
                                const Decision& decision) {
  if (!decision_is_well_formed(instance, decision))
    throw ShapeError("decision shape does not match instance");
}

inline double chosen_security_fee(const Attack& a, OptionChoice c) {
  return c ? a.security_options[*c].fee : 0.0;
}
inline double chosen_prevention(const Attack& a, OptionChoice c) {
  return c ? a.security_options[*c].prevention_probability : 0.0;
}
inline double chosen_premium(const Attack& a, OptionChoice c) {
  return c ? a.insurance_options[*c].premium : 0.0;
}
inline double chosen_coverage(const Attack& a, OptionChoice c) {
  return c ? a.insurance_options[*c].coverage_fraction : 0.0;
}
inline double chosen_repair_fee(const Attack& a, std::size_t g, OptionChoice c) {
  return c ? a.repair_options[g][*c].fee : 0.0;
}
inline double chosen_repair_reduction(const Attack& a, std::size_t g,
                                      OptionChoice c) {
  return c ? a.repair_options[g][*c].reduction_fraction : 0.0;
}

/// Upfront fees of attack k's slice of the decision (security + insurance).
inline double attack_stage1(const Attack& a, OptionChoice sec, OptionChoice ins) {
  return chosen_security_fee(a, sec) + chosen_premium(a, ins);
}

/// Expected direct losses plus expectation-weighted repair fees of attack k.
template <typename RepairChoices>
double attack_stage2(const Attack& a, OptionChoice sec,
                     const RepairChoices& repairs) {
  const double factor =
      a.occurrence_probability * (1.0 - chosen_prevention(a, sec));
  double losses = 0.0;
  for (std::size_t g = 0; g < a.direct_outcomes.size(); ++g) {
    const DirectLossOutcome& d = a.direct_outcomes[g];
    losses += d.probability * (d.amount + chosen_repair_fee(a, g, repairs[g]));
  }
  return factor * losses;
}

/// Expected residual indirect losses minus expected claims of attack k.
template <typename RepairChoices>
double attack_stage3(const Attack& a, OptionChoice sec, OptionChoice ins,
                     const RepairChoices& repairs) {
  const double factor =
      a.occurrence_probability * (1.0 - chosen_prevention(a, sec));
  const double coverage = chosen_coverage(a, ins);
  double residual_indirect = 0.0;
  double covered_direct = 0.0;
  for (std::size_t g = 0; g < a.direct_outcomes.size(); ++g) {
    const DirectLossOutcome& d = a.direct_outcomes[g];
    residual_indirect += d.probability *
                         (1.0 - chosen_repair_reduction(a, g, repairs[g])) *
                         d.expected_indirect_loss();
    covered_direct += d.probability * d.amount;
  }
  return factor * (residual_indirect - coverage * covered_direct);
}

/// The attack's summand of stage1 + stage2 + stage3.
template <typename RepairChoices>
double attack_total(const Attack& a, OptionChoice sec, OptionChoice ins,
                    const RepairChoices& repairs) {
  return attack_stage1(a, sec, ins) + attack_stage2(a, sec, repairs) +
         attack_stage3(a, sec, ins, repairs);
}

/// Nominal spend of attack k's slice, with every chosen repair fee charged
/// in full regardless of whether the loss it covers is realized.
template <typename RepairChoices>
double attack_spend(const Attack& a, OptionChoice sec, OptionChoice ins,
                    const RepairChoices& repairs) {
  double s = chosen_security_fee(a, sec) + chosen_premium(a, ins);
  for (std::size_t g = 0; g < a.direct_outcomes.size(); ++g)
    s += chosen_repair_fee(a, g, repairs[g]);
  return s;
}

}  // namespace detail

/**
 * Total expenditure charged against the budget: all chosen security fees,
 * insurance premiums, and repair fees at nominal (unweighted) value. Note
 * the asymmetry with cost_stage2: the budget reserves every chosen repair
 * fee simultaneously, while the objective weights each by the probability
 * of the loss it repairs.
 */
inline double spend(const RiskInstance& instance, const Decision& decision) {
  detail::require_well_formed(instance, decision);
  double total = 0.0;
  for (std::size_t k = 0; k < instance.attacks.size(); ++k)
    total += detail::attack_spend(instance.attacks[k], decision.security[k],
                                  decision.insurance[k], decision.repair[k]);
  return total;
}

/// True iff the decision's spend fits the budget (inclusive, tolerance
/// kTolerance). The at-most-one constraints hold structurally.
inline bool is_feasible(const RiskInstance& instance, const Decision& decision) {
  return spend(instance, decision) <= instance.budget + kTolerance;
}

/// Upfront cost: chosen security fees plus insurance premiums.
inline double cost_stage1(const RiskInstance& instance, const Decision& decision) {
  detail::require_well_formed(instance, decision);
  double total = 0.0;
  for (std::size_t k = 0; k < instance.attacks.size(); ++k)
    total += detail::attack_stage1(instance.attacks[k], decision.security[k],
                                   decision.insurance[k]);
  return total;
}

/// Expected service-stage cost: direct losses plus expectation-weighted
/// repair fees, discounted by occurrence and prevention probabilities.
inline double cost_stage2(const RiskInstance& instance, const Decision& decision) {
  detail::require_well_formed(instance, decision);
  double total = 0.0;
  for (std::size_t k = 0; k < instance.attacks.size(); ++k)
    total += detail::attack_stage2(instance.attacks[k], decision.security[k],
                                   decision.repair[k]);
  return total;
}

/// Expected assessment-stage cost: residual indirect losses minus insurance
/// claims (claims refund the chosen coverage fraction of each realized
/// direct loss). May be negative.
inline double cost_stage3(const RiskInstance& instance, const Decision& decision) {
  detail::require_well_formed(instance, decision);
  double total = 0.0;
  for (std::size_t k = 0; k < instance.attacks.size(); ++k)
    total += detail::attack_stage3(instance.attacks[k], decision.security[k],
                                   decision.insurance[k], decision.repair[k]);
  return total;
}

/// The closed-form expected total cost of a decision, by stage.
inline CostBreakdown total_cost(const RiskInstance& instance,
                                const Decision& decision) {
  CostBreakdown b;
  b.stage1 = cost_stage1(instance, decision);
  b.stage2 = cost_stage2(instance, decision);
  b.stage3 = cost_stage3(instance, decision);
  b.total = b.stage1 + b.stage2 + b.stage3;
  return b;
}

/// The attack-k summand of the expected total cost; summing over all k
/// reproduces total_cost(...).total up to floating-point reassociation.
inline double per_attack_cost(const RiskInstance& instance,
                              const Decision& decision, std::size_t k) {
  detail::require_well_formed(instance, decision);
  if (k >= instance.attacks.size())
    throw std::out_of_range("attack index " + std::to_string(k) +
                            " out of range");
  return detail::attack_total(instance.attacks[k], decision.security[k],
                              decision.insurance[k], decision.repair[k]);
}

/// The attack-k summand of spend().
inline double per_attack_spend(const RiskInstance& instance,
                               const Decision& decision, std::size_t k) {
  detail::require_well_formed(instance, decision);
  if (k >= instance.attacks.size())
    throw std::out_of_range("attack index " + std::to_string(k) +
                            " out of range");
  return detail::attack_spend(instance.attacks[k], decision.security[k],
                              decision.insurance[k], decision.repair[k]);
}

namespace detail {

struct Branch {
  AttackRealization realization;
  double probability = 0.0;
  double cost = 0.0;
};

/// Per-attack scenario branches. The prevented branch is materialized only
/// when a security package was purchased, so decisions without security
/// yield 1 + G*E branches per attack and decisions with security 2 + G*E.
inline std::vector<Branch> attack_branches(const Attack& a, OptionChoice sec,
                                           OptionChoice ins,
                                           const std::vector<OptionChoice>& repairs) {
  std::vector<Branch> out;
  const double p = a.occurrence_probability;
  const double prevention = chosen_prevention(a, sec);
  const double coverage = chosen_coverage(a, ins);

  out.push_back({{AttackRealization::Kind::kNotOccurred, 0, 0}, 1.0 - p, 0.0});
  if (sec)
    out.push_back({{AttackRealization::Kind::kPrevented, 0, 0}, p * prevention, 0.0});
  for (std::size_t g = 0; g < a.direct_outcomes.size(); ++g) {
    const DirectLossOutcome& d = a.direct_outcomes[g];
    const double fee = chosen_repair_fee(a, g, repairs[g]);
    const double remaining = 1.0 - chosen_repair_reduction(a, g, repairs[g]);
    for (std::size_t e = 0; e < d.indirect_outcomes.size(); ++e) {
      const IndirectLossOutcome& i = d.indirect_outcomes[e];
      const double prob = p * (1.0 - prevention) * d.probability * i.probability;
      const double cost =
          d.amount + fee + remaining * i.amount - coverage * d.amount;
      out.push_back({{AttackRealization::Kind::kLoss, g, e}, prob, cost});
    }
  }
  return out;
}

}  // namespace detail

/**
 * Exhaustively enumerates the joint scenario set of a decision and the
 * realized cost of each scenario. Per attack the branches are: no
 * occurrence; occurrence prevented (present only when a security package was
 * purchased); and occurrence with each (direct, indirect) outcome pair. A
 * scenario's cost is the upfront fees plus, per successful attack, the
 * direct loss, the chosen repair fee, the residual indirect loss, and minus
 * the insurance claim. Throws EnumerationTooLarge if the joint scenario
 * count exceeds `scenario_cap`.
 */
inline std::vector<std::pair<Scenario, double>> expand_scenarios(
    const RiskInstance& instance, const Decision& decision,
    std::uint64_t scenario_cap = kDefaultScenarioCap) {
  detail::require_well_formed(instance, decision);

  std::vector<std::vector<detail::Branch>> branches;
  branches.reserve(instance.attacks.size());
  double count = 1.0;
  for (std::size_t k = 0; k < instance.attacks.size(); ++k) {
    branches.push_back(detail::attack_branches(
        instance.attacks[k], decision.security[k], decision.insurance[k],
        decision.repair[k]));
    count *= static_cast<double>(branches.back().size());
    if (count > static_cast<double>(scenario_cap))
      throw EnumerationTooLarge(
          "joint scenario count exceeds cap of " + std::to_string(scenario_cap));
  }

  const double upfront = cost_stage1(instance, decision);
  std::vector<std::pair<Scenario, double>> out;
  out.reserve(static_cast<std::size_t>(count));

  std::vector<std::size_t> odometer(instance.attacks.size(), 0);
  while (true) {
    Scenario s;
    s.realizations.reserve(instance.attacks.size());
    s.probability = 1.0;
    double cost = upfront;
    for (std::size_t k = 0; k < instance.attacks.size(); ++k) {
      const detail::Branch& b = branches[k][odometer[k]];
      s.realizations.push_back(b.realization);
      s.probability *= b.probability;
      cost += b.cost;
    }
    out.emplace_back(std::move(s), cost);

    std::size_t k = instance.attacks.size();
    while (k > 0) {
      --k;
      if (++odometer[k] < branches[k].size()) break;
      odometer[k] = 0;
      if (k == 0) return out;
    }
    if (instance.attacks.empty()) return out;
  }
}

/**
 * The expected cost computed the long way: probability-weighted sum of
 * realized scenario costs. Agrees with total_cost(...).total to within
 * kTolerance on every valid instance; used as the equivalence oracle for
 * the closed form.
 */
inline double total_cost_by_expansion(
    const RiskInstance& instance, const Decision& decision,
    std::uint64_t scenario_cap = kDefaultScenarioCap) {
  double sum = 0.0;
  for (const auto& [scenario, cost] : expand_scenarios(instance, decision, scenario_cap))
    sum += scenario.probability * cost;
  return sum;
}

}  // namespace cyrisk
