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

#include <cmath>
#include <cstddef>
#include <iterator>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cyrisk/model.hpp"
#include "cyrisk/objective.hpp"
#include "cyrisk/solver.hpp"

namespace cyrisk {

/// Raised when a sweep parameter path cannot be resolved or a grid value is
/// out of range.
class SweepConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for direct-loss sweeps on attacks with other than two outcomes,
/// where the complement rule is undefined.
class UnsupportedSweepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Which instance parameter a sweep varies.
enum class SweepParameter {
  kAttackProbability,      // occurrence probability of a named attack
  kDirectLossProbability,  // probability of one direct-loss outcome
};

/**
 * A one-dimensional experiment: vary one parameter over `grid` and solve the
 * restricted problem for each mode at every point. For a direct-loss sweep
 * the attack must have exactly two outcomes; the complementary outcome's
 * probability is set to 1 - value so the distribution stays normalized.
 */
struct SweepSpec {
  SweepParameter parameter = SweepParameter::kAttackProbability;
  std::string attack_name;
  std::size_t outcome_index = 0;  // direct-loss sweeps only
  std::vector<double> grid;
  std::vector<BaselineMode> modes{std::begin(kAllBaselineModes),
                                  std::end(kAllBaselineModes)};
  bool cross_check = true;  // verify bnb against bruteforce when under cap
};

/// Per-attack decomposition of the expected total cost. The signed sum
/// direct + indirect - claims + fees over all attacks equals the objective.
struct AttackLossComponents {
  double expected_direct_loss = 0.0;
  double expected_indirect_loss = 0.0;
  double expected_claims = 0.0;
  double fees = 0.0;  // upfront fees plus expectation-weighted repair fees
};

/// One grid point of a sweep: the per-mode optima, the full-mode solve, and
/// its rendered policy and loss decomposition.
struct SweepRow {
  double value = 0.0;
  std::vector<std::pair<BaselineMode, double>> objectives;
  SolveResult full;
  std::vector<std::string> policy_labels;               // per attack
  std::vector<std::vector<std::string>> repair_labels;  // per attack, per outcome
  std::vector<AttackLossComponents> components;
};

/// Copy of `instance` with the named attack's occurrence probability set.
inline RiskInstance with_attack_probability(const RiskInstance& instance,
                                            std::string_view attack_name,
                                            double probability) {
  if (!(probability >= 0.0 && probability <= 1.0))
    throw SweepConfigError("attack probability " + std::to_string(probability) +
                           " outside [0, 1]");
  const auto k = instance.attack_index(attack_name);
  if (!k)
    throw SweepConfigError("no attack named \"" + std::string(attack_name) + "\"");
  RiskInstance out = instance;
  out.attacks[*k].occurrence_probability = probability;
  return out;
}

/// Copy of `instance` with the named attack's direct-loss outcome
/// `outcome_index` set to `probability` and the other outcome to its
/// complement. Defined only for attacks with exactly two outcomes.
inline RiskInstance with_direct_loss_probability(const RiskInstance& instance,
                                                 std::string_view attack_name,
                                                 std::size_t outcome_index,
                                                 double probability) {
  if (!(probability >= 0.0 && probability <= 1.0))
    throw SweepConfigError("direct-loss probability " +
                           std::to_string(probability) + " outside [0, 1]");
  const auto k = instance.attack_index(attack_name);
  if (!k)
    throw SweepConfigError("no attack named \"" + std::string(attack_name) + "\"");
  const Attack& a = instance.attacks[*k];
  if (a.direct_outcomes.size() != 2)
    throw UnsupportedSweepError(
        "direct-loss sweeps require exactly 2 outcomes; attack \"" +
        std::string(attack_name) + "\" has " +
        std::to_string(a.direct_outcomes.size()));
  if (outcome_index >= 2)
    throw SweepConfigError("direct-loss outcome index " +
                           std::to_string(outcome_index) + " out of range");
  RiskInstance out = instance;
  out.attacks[*k].direct_outcomes[outcome_index].probability = probability;
  out.attacks[*k].direct_outcomes[1 - outcome_index].probability =
      1.0 - probability;
  return out;
}

/// "0", "SP2", "IP1", or "SP2+IP1": the packages chosen for attack k.
inline std::string security_policy_label(const Decision& decision,
                                         std::size_t k) {
  std::string label;
  if (decision.security[k])
    label += "SP" + std::to_string(*decision.security[k] + 1);
  if (decision.insurance[k]) {
    if (!label.empty()) label += "+";
    label += "IP" + std::to_string(*decision.insurance[k] + 1);
  }
  return label.empty() ? "0" : label;
}

/// "0" or "Rep1": the repair package chosen for (attack k, outcome g).
inline std::string repair_policy_label(const Decision& decision, std::size_t k,
                                       std::size_t g) {
  const OptionChoice c = decision.repair[k][g];
  return c ? "Rep" + std::to_string(*c + 1) : "0";
}

namespace detail {

inline OptionChoice parse_indexed_label(std::string_view token,
                                        std::string_view prefix) {
  if (token.substr(0, prefix.size()) != prefix)
    throw std::invalid_argument("bad policy token \"" + std::string(token) + "\"");
  const std::string digits(token.substr(prefix.size()));
  const std::size_t index = std::stoul(digits);
  if (index == 0) throw std::invalid_argument("policy labels are 1-based");
  return index - 1;
}

}  // namespace detail

/**
 * Builds a decision from rendered policy labels: one "0"/"SPn"/"IPn"/
 * "SPn+IPm" string per attack and one "0"/"Repu" string per (attack,
 * outcome). Inverse of the label renderers; throws std::invalid_argument on
 * malformed labels and ShapeError if the shape or an index does not fit the
 * instance.
 */
inline Decision decision_from_policy_labels(
    const RiskInstance& instance, const std::vector<std::string>& policies,
    const std::vector<std::vector<std::string>>& repairs) {
  if (policies.size() != instance.attacks.size() ||
      repairs.size() != instance.attacks.size())
    throw ShapeError("one policy label and one repair row per attack required");
  Decision d = Decision::all_none(instance);
  for (std::size_t k = 0; k < instance.attacks.size(); ++k) {
    const std::string& label = policies[k];
    if (label != "0") {
      std::size_t start = 0;
      while (start < label.size()) {
        std::size_t plus = label.find('+', start);
        if (plus == std::string::npos) plus = label.size();
        const std::string_view token =
            std::string_view(label).substr(start, plus - start);
        if (token.substr(0, 2) == "SP")
          d.security[k] = detail::parse_indexed_label(token, "SP");
        else if (token.substr(0, 2) == "IP")
          d.insurance[k] = detail::parse_indexed_label(token, "IP");
        else
          throw std::invalid_argument("bad policy token \"" +
                                      std::string(token) + "\"");
        start = plus + 1;
      }
    }
    if (repairs[k].size() != instance.attacks[k].direct_outcomes.size())
      throw ShapeError("repair label count mismatch for attack " +
                       std::to_string(k));
    for (std::size_t g = 0; g < repairs[k].size(); ++g)
      if (repairs[k][g] != "0")
        d.repair[k][g] = detail::parse_indexed_label(repairs[k][g], "Rep");
  }
  if (!decision_is_well_formed(instance, d))
    throw ShapeError("policy labels reference packages the instance lacks");
  return d;
}

/**
 * Splits the expected total cost of a decision into per-attack direct,
 * indirect, claim, and fee components (fees include the expectation-weighted
 * repair fees). Emitted by the sweep writers as plot data.
 */
inline std::vector<AttackLossComponents> expected_loss_components(
    const RiskInstance& instance, const Decision& decision) {
  detail::require_well_formed(instance, decision);
  std::vector<AttackLossComponents> out(instance.attacks.size());
  for (std::size_t k = 0; k < instance.attacks.size(); ++k) {
    const Attack& a = instance.attacks[k];
    const double factor =
        a.occurrence_probability *
        (1.0 - detail::chosen_prevention(a, decision.security[k]));
    AttackLossComponents& c = out[k];
    c.fees = detail::attack_stage1(a, decision.security[k], decision.insurance[k]);
    for (std::size_t g = 0; g < a.direct_outcomes.size(); ++g) {
      const DirectLossOutcome& d = a.direct_outcomes[g];
      c.expected_direct_loss += factor * d.probability * d.amount;
      c.fees += factor * d.probability *
                detail::chosen_repair_fee(a, g, decision.repair[k][g]);
      c.expected_indirect_loss +=
          factor * d.probability *
          (1.0 - detail::chosen_repair_reduction(a, g, decision.repair[k][g])) *
          d.expected_indirect_loss();
    }
    c.expected_claims = factor *
                        detail::chosen_coverage(a, decision.insurance[k]) *
                        a.expected_direct_loss();
  }
  return out;
}

namespace detail {

inline RiskInstance instance_at(const RiskInstance& base, const SweepSpec& spec,
                                double value) {
  switch (spec.parameter) {
    case SweepParameter::kAttackProbability:
      return with_attack_probability(base, spec.attack_name, value);
    case SweepParameter::kDirectLossProbability:
      return with_direct_loss_probability(base, spec.attack_name,
                                          spec.outcome_index, value);
  }
  throw SweepConfigError("unknown sweep parameter");
}

inline double bundle_space_size(const RiskInstance& instance, BaselineMode mode) {
  double count = 1.0;
  for (std::size_t k = 0; k < instance.attacks.size(); ++k) {
    const Attack& a = instance.attacks[k];
    const bool sec = mode == BaselineMode::kFull || mode == BaselineMode::kNoInsurance;
    const bool ins = mode == BaselineMode::kFull || mode == BaselineMode::kNoSecurity;
    double per = (sec ? a.security_options.size() + 1.0 : 1.0) *
                 (ins ? a.insurance_options.size() + 1.0 : 1.0);
    for (std::size_t g = 0; g < a.direct_outcomes.size(); ++g)
      per *= g < a.repair_options.size() ? a.repair_options[g].size() + 1.0 : 1.0;
    count *= per;
  }
  return count;
}

}  // namespace detail

/**
 * Runs a sweep: for each grid value, modifies the base instance, solves every
 * requested mode with branch-and-bound, and records the full-mode policy and
 * loss decomposition. When `cross_check` is set, every point whose decision
 * space fits the brute-force cap is re-solved exhaustively and a mismatch
 * beyond 1e-9 raises std::logic_error. Rows come back in grid order.
 */
inline std::vector<SweepRow> run_sweep(const RiskInstance& base,
                                       const SweepSpec& spec) {
  std::vector<SweepRow> rows;
  rows.reserve(spec.grid.size());
  for (double value : spec.grid) {
    const RiskInstance instance = detail::instance_at(base, spec, value);
    SweepRow row;
    row.value = value;
    row.full = solve_bnb(instance, BaselineMode::kFull);
    for (BaselineMode mode : spec.modes) {
      const SolveResult result = mode == BaselineMode::kFull
                                     ? row.full
                                     : solve_bnb(instance, mode);
      if (spec.cross_check &&
          detail::bundle_space_size(instance, mode) <=
              static_cast<double>(kDefaultEnumerationCap)) {
        const SolveResult exact = solve_bruteforce(instance, mode);
        if (std::abs(exact.objective - result.objective) > kTolerance)
          throw std::logic_error(
              "solver disagreement at grid value " + std::to_string(value) +
              ": bnb=" + std::to_string(result.objective) +
              " bruteforce=" + std::to_string(exact.objective));
      }
      row.objectives.emplace_back(mode, result.objective);
    }
    for (std::size_t k = 0; k < instance.attacks.size(); ++k) {
      row.policy_labels.push_back(security_policy_label(row.full.decision, k));
      std::vector<std::string> per_outcome;
      for (std::size_t g = 0; g < instance.attacks[k].direct_outcomes.size(); ++g)
        per_outcome.push_back(repair_policy_label(row.full.decision, k, g));
      row.repair_labels.push_back(std::move(per_outcome));
    }
    row.components = expected_loss_components(instance, row.full.decision);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace cyrisk
