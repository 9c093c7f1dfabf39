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
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace cyrisk {

/// Absolute tolerance used for all probability/monetary comparisons.
inline constexpr double kTolerance = 1e-9;

/**
 * One entry of a discrete indirect-loss distribution: with `probability`,
 * a successful attack's direct loss is followed by an indirect loss of
 * `amount` (e.g. reputation damage). Amounts are in normalized monetary
 * units.
 */
struct IndirectLossOutcome {
  double probability = 0.0;
  double amount = 0.0;
};

/**
 * One entry of a discrete direct-loss distribution: with `probability`, a
 * successful attack inflicts a direct loss of `amount` (e.g. business
 * interruption), which is then followed by one of `indirect_outcomes`.
 * The indirect probabilities of a valid outcome sum to 1.
 */
struct DirectLossOutcome {
  double probability = 0.0;
  double amount = 0.0;
  std::vector<IndirectLossOutcome> indirect_outcomes;

  /// Mean indirect loss conditional on this direct loss.
  double expected_indirect_loss() const {
    double sum = 0.0;
    for (const auto& o : indirect_outcomes) sum += o.probability * o.amount;
    return sum;
  }
};

/// Upfront purchase that prevents the attack outright with the given
/// probability.
struct SecurityPackage {
  double fee = 0.0;
  double prevention_probability = 0.0;
};

/// Upfront premium that reimburses `coverage_fraction` of any realized
/// direct loss of the attack it covers.
struct InsurancePackage {
  double premium = 0.0;
  double coverage_fraction = 0.0;
};

/// Recourse purchase tied to one (attack, direct loss) pair: removes
/// `reduction_fraction` of the ensuing indirect loss for its fee, so a
/// fraction (1 - reduction_fraction) of the indirect loss remains.
struct RepairPackage {
  double fee = 0.0;
  double reduction_fraction = 0.0;
};

/**
 * One attack type: its per-period occurrence probability, its loss
 * distributions, and the catalogs of packages available against it.
 * `repair_options[g]` is the repair catalog for direct-loss outcome g; in a
 * valid attack all these catalogs have the same length.
 */
struct Attack {
  std::string name;
  double occurrence_probability = 0.0;
  std::vector<DirectLossOutcome> direct_outcomes;
  std::vector<SecurityPackage> security_options;
  std::vector<InsurancePackage> insurance_options;
  std::vector<std::vector<RepairPackage>> repair_options;

  /// Mean direct loss of a successful, unprevented attack.
  double expected_direct_loss() const {
    double sum = 0.0;
    for (const auto& o : direct_outcomes) sum += o.probability * o.amount;
    return sum;
  }
};

/**
 * A full problem instance: the attack catalog and the purchase budget.
 * Instances are treated as immutable after construction; no operation in
 * this library mutates one, so they can be shared freely across threads.
 */
struct RiskInstance {
  std::vector<Attack> attacks;
  double budget = 0.0;

  /// Index of the attack with the given name, or nullopt.
  std::optional<std::size_t> attack_index(std::string_view name) const {
    for (std::size_t k = 0; k < attacks.size(); ++k)
      if (attacks[k].name == name) return k;
    return std::nullopt;
  }
};

/// A choice among an option list: either "buy nothing" or an index into the
/// list. The at-most-one-package-per-slot constraints hold by construction.
using OptionChoice = std::optional<std::size_t>;

/**
 * A purchase plan: per attack a security choice and an insurance choice,
 * and per (attack, direct-loss outcome) a repair choice. `repair[k][g]`
 * refers to `attacks[k].repair_options[g]`.
 */
struct Decision {
  std::vector<OptionChoice> security;
  std::vector<OptionChoice> insurance;
  std::vector<std::vector<OptionChoice>> repair;

  friend bool operator==(const Decision&, const Decision&) = default;

  /// The empty plan (buy nothing anywhere), shaped to match `instance`.
  static Decision all_none(const RiskInstance& instance) {
    Decision d;
    d.security.assign(instance.attacks.size(), std::nullopt);
    d.insurance.assign(instance.attacks.size(), std::nullopt);
    d.repair.resize(instance.attacks.size());
    for (std::size_t k = 0; k < instance.attacks.size(); ++k)
      d.repair[k].assign(instance.attacks[k].direct_outcomes.size(),
                         std::nullopt);
    return d;
  }
};

/// One broken invariant, identifying where (`path`) and what (`message`).
struct Violation {
  std::string path;
  std::string message;
};

namespace detail {

inline std::string attack_path(std::size_t k, const Attack& a) {
  std::ostringstream os;
  os << "attacks[" << k << "]";
  if (!a.name.empty()) os << "(" << a.name << ")";
  return os.str();
}

inline void check_fraction(std::vector<Violation>& out, const std::string& path,
                           const char* field, double v) {
  if (!(v >= -kTolerance && v <= 1.0 + kTolerance)) {
    std::ostringstream os;
    os << field << " = " << v << " is outside [0, 1]";
    out.push_back({path, os.str()});
  }
}

inline void check_nonnegative(std::vector<Violation>& out,
                              const std::string& path, const char* field,
                              double v) {
  if (!(v >= -kTolerance)) {
    std::ostringstream os;
    os << field << " = " << v << " is negative";
    out.push_back({path, os.str()});
  }
}

}  // namespace detail

/**
 * Checks every structural and probabilistic invariant of an instance:
 * fractions in [0, 1], amounts and fees nonnegative, direct- and
 * indirect-loss distributions each summing to 1, and rectangular
 * indirect/repair list shapes within each attack. Returns one record per
 * broken invariant; an empty report means the instance is valid. All
 * comparisons use the absolute tolerance `kTolerance`.
 */
inline std::vector<Violation> validate_instance(const RiskInstance& instance) {
  std::vector<Violation> out;
  detail::check_nonnegative(out, "budget", "budget", instance.budget);
  for (std::size_t k = 0; k < instance.attacks.size(); ++k) {
    const Attack& a = instance.attacks[k];
    const std::string base = detail::attack_path(k, a);
    detail::check_fraction(out, base, "occurrence_probability",
                           a.occurrence_probability);

    for (std::size_t n = 0; n < a.security_options.size(); ++n) {
      const std::string p = base + ".security_options[" + std::to_string(n) + "]";
      detail::check_nonnegative(out, p, "fee", a.security_options[n].fee);
      detail::check_fraction(out, p, "prevention_probability",
                             a.security_options[n].prevention_probability);
    }
    for (std::size_t m = 0; m < a.insurance_options.size(); ++m) {
      const std::string p = base + ".insurance_options[" + std::to_string(m) + "]";
      detail::check_nonnegative(out, p, "premium", a.insurance_options[m].premium);
      detail::check_fraction(out, p, "coverage_fraction",
                             a.insurance_options[m].coverage_fraction);
    }

    if (a.repair_options.size() != a.direct_outcomes.size()) {
      std::ostringstream os;
      os << "repair_options has " << a.repair_options.size()
         << " catalogs for " << a.direct_outcomes.size()
         << " direct-loss outcomes";
      out.push_back({base + ".repair_options", os.str()});
    }

    if (a.direct_outcomes.empty()) {
      out.push_back({base + ".direct_outcomes",
                     "direct-loss distribution of attack \"" + a.name +
                         "\" is empty; probabilities cannot sum to 1"});
    } else {
      double direct_sum = 0.0;
      const std::size_t indirect_len = a.direct_outcomes[0].indirect_outcomes.size();
      for (std::size_t g = 0; g < a.direct_outcomes.size(); ++g) {
        const DirectLossOutcome& d = a.direct_outcomes[g];
        const std::string p = base + ".direct_outcomes[" + std::to_string(g) + "]";
        detail::check_fraction(out, p, "probability", d.probability);
        detail::check_nonnegative(out, p, "amount", d.amount);
        direct_sum += d.probability;

        if (d.indirect_outcomes.size() != indirect_len) {
          std::ostringstream os;
          os << "indirect list length " << d.indirect_outcomes.size()
             << " differs from outcome 0's length " << indirect_len;
          out.push_back({p + ".indirect_outcomes", os.str()});
        }
        if (d.indirect_outcomes.empty()) {
          out.push_back({p + ".indirect_outcomes",
                         "indirect-loss distribution is empty; probabilities "
                         "cannot sum to 1"});
        } else {
          double indirect_sum = 0.0;
          for (std::size_t e = 0; e < d.indirect_outcomes.size(); ++e) {
            const IndirectLossOutcome& i = d.indirect_outcomes[e];
            const std::string q = p + ".indirect_outcomes[" + std::to_string(e) + "]";
            detail::check_fraction(out, q, "probability", i.probability);
            detail::check_nonnegative(out, q, "amount", i.amount);
            indirect_sum += i.probability;
          }
          if (std::abs(indirect_sum - 1.0) > kTolerance) {
            std::ostringstream os;
            os << "indirect-loss probabilities sum to " << indirect_sum
               << ", expected 1";
            out.push_back({p + ".indirect_outcomes", os.str()});
          }
        }
      }
      if (std::abs(direct_sum - 1.0) > kTolerance) {
        std::ostringstream os;
        os << "direct-loss probabilities of attack \"" << a.name
           << "\" sum to " << direct_sum << ", expected 1";
        out.push_back({base + ".direct_outcomes", os.str()});
      }
    }

    if (!a.repair_options.empty()) {
      const std::size_t repair_len = a.repair_options[0].size();
      for (std::size_t g = 0; g < a.repair_options.size(); ++g) {
        const std::string p = base + ".repair_options[" + std::to_string(g) + "]";
        if (a.repair_options[g].size() != repair_len) {
          std::ostringstream os;
          os << "repair catalog length " << a.repair_options[g].size()
             << " differs from outcome 0's length " << repair_len;
          out.push_back({p, os.str()});
        }
        for (std::size_t u = 0; u < a.repair_options[g].size(); ++u) {
          const std::string q = p + "[" + std::to_string(u) + "]";
          detail::check_nonnegative(out, q, "fee", a.repair_options[g][u].fee);
          detail::check_fraction(out, q, "reduction_fraction",
                                 a.repair_options[g][u].reduction_fraction);
        }
      }
    }
  }
  return out;
}

/**
 * True iff the decision's shape matches the instance (one security,
 * insurance, and per-outcome repair slot per attack) and every chosen index
 * is in range for its option list.
 */
inline bool decision_is_well_formed(const RiskInstance& instance,
                                    const Decision& decision) {
  const std::size_t k_count = instance.attacks.size();
  if (decision.security.size() != k_count ||
      decision.insurance.size() != k_count ||
      decision.repair.size() != k_count)
    return false;
  for (std::size_t k = 0; k < k_count; ++k) {
    const Attack& a = instance.attacks[k];
    if (decision.security[k] &&
        *decision.security[k] >= a.security_options.size())
      return false;
    if (decision.insurance[k] &&
        *decision.insurance[k] >= a.insurance_options.size())
      return false;
    if (decision.repair[k].size() != a.direct_outcomes.size()) return false;
    for (std::size_t g = 0; g < decision.repair[k].size(); ++g) {
      if (!decision.repair[k][g]) continue;
      if (g >= a.repair_options.size() ||
          *decision.repair[k][g] >= a.repair_options[g].size())
        return false;
    }
  }
  return true;
}

}  // namespace cyrisk
