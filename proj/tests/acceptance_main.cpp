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

// Acceptance suite: one line per criterion, [PASS]/[FAIL], nonzero exit on
// any failure. Each criterion pins its tolerance and runtime budget in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cyrisk/cyrisk.hpp"
#include "support/bundled_instance.hpp"
#include "support/generators.hpp"

using namespace cyrisk;
using test::bundled_instance;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct ReferenceColumn {
  const char* a1;
  const char* a1_d1;
  const char* a1_d2;
  const char* a2;
  const char* a2_d1;
  const char* a2_d2;
};

// Reference policy table for the occurrence-probability sweep (grid 0.1..0.9).
constexpr ReferenceColumn kOccurrenceReference[9] = {
    {"0", "0", "Rep1", "IP1", "Rep2", "Rep1"},
    {"IP1", "0", "Rep1", "IP2", "Rep1", "Rep1"},
    {"IP2", "Rep1", "Rep1", "SP2", "0", "0"},
    {"IP2", "Rep1", "Rep1", "SP2", "0", "0"},
    {"IP2", "Rep1", "Rep1", "SP2", "0", "0"},
    {"SP2", "0", "Rep1", "SP2", "0", "0"},
    {"SP2", "0", "0", "IP1", "Rep1", "Rep1"},
    {"SP2", "0", "0", "IP1", "Rep1", "Rep1"},
    {"SP2+IP1", "0", "0", "SP2", "0", "0"},
};

// Reference policy table for the direct-loss sweep (first attack pinned at
// probability 0.4, grid 0.1..0.9 on the second attack's first outcome).
constexpr ReferenceColumn kLossReference[9] = {
    {"IP2", "Rep1", "Rep1", "IP1", "0", "Rep1"},
    {"IP2", "Rep1", "Rep1", "SP2", "0", "0"},
    {"IP2", "Rep1", "Rep1", "SP2", "0", "0"},
    {"IP2", "Rep1", "Rep1", "SP2", "0", "0"},
    {"IP2", "0", "Rep1", "IP1", "Rep2", "0"},
    {"IP2", "0", "Rep1", "IP1", "Rep2", "0"},
    {"IP2", "Rep1", "Rep1", "0", "Rep2", "0"},
    {"IP2", "Rep1", "Rep1", "0", "Rep2", "0"},
    {"IP2", "Rep1", "Rep1", "0", "Rep2", "0"},
};

Decision reference_decision(const RiskInstance& instance,
                            const ReferenceColumn& column) {
  return decision_from_policy_labels(
      instance, {column.a1, column.a2},
      {{column.a1_d1, column.a1_d2}, {column.a2_d1, column.a2_d2}});
}

/// Shared logic of criteria 1 and 2: exact solves along a sweep compared
/// against the reference policy table.
Outcome check_reference_table(const ReferenceColumn (&reference)[9],
                              const std::vector<RiskInstance>& instances) {
  Outcome outcome;
  int matches = 0;
  std::ostringstream gaps;
  for (int i = 0; i < 9; ++i) {
    const RiskInstance& instance = instances[i];
    const SolveResult fast = solve_bnb(instance);
    const SolveResult exact = solve_bruteforce(instance);
    if (std::abs(fast.objective - exact.objective) > 1e-9) {
      outcome.pass = false;
      outcome.detail += " solver mismatch at point " + std::to_string(i + 1) + ";";
      continue;
    }
    const Decision reference_plan = reference_decision(instance, reference[i]);
    if (!is_feasible(instance, reference_plan)) {
      outcome.pass = false;
      outcome.detail += " reference policy infeasible at point " +
                        std::to_string(i + 1) + ";";
      continue;
    }
    const double reference_objective =
        total_cost(instance, reference_plan).total;
    if (fast.objective > reference_objective + 1e-9) {
      outcome.pass = false;
      outcome.detail += " solver worse than reference at point " +
                        std::to_string(i + 1) + ";";
    }
    if (fast.decision == reference_plan) {
      ++matches;
    } else {
      char buffer[64];
      std::snprintf(buffer, sizeof buffer, " gap@%.1f=%+.2e",
                    0.1 * (i + 1), reference_objective - fast.objective);
      gaps << buffer;
    }
  }
  if (matches < 7) outcome.pass = false;
  outcome.detail =
      "exact match " + std::to_string(matches) + "/9" + gaps.str() + outcome.detail;
  return outcome;
}

Outcome criterion1() {
  std::vector<RiskInstance> instances;
  for (int i = 1; i <= 9; ++i) instances.push_back(bundled_instance(i / 10.0));
  return check_reference_table(kOccurrenceReference, instances);
}

Outcome criterion2() {
  std::vector<RiskInstance> instances;
  for (int i = 1; i <= 9; ++i)
    instances.push_back(bundled_instance(0.4, i / 10.0));
  return check_reference_table(kLossReference, instances);
}

Outcome criterion3() {
  Outcome outcome;

  SweepSpec occurrence;
  occurrence.parameter = SweepParameter::kAttackProbability;
  occurrence.attack_name = "a1";
  for (int i = 1; i <= 9; ++i) occurrence.grid.push_back(i / 10.0);
  const auto occurrence_rows = run_sweep(bundled_instance(), occurrence);

  SweepSpec loss;
  loss.parameter = SweepParameter::kDirectLossProbability;
  loss.attack_name = "a2";
  loss.outcome_index = 0;
  loss.grid = occurrence.grid;
  const auto loss_rows = run_sweep(bundled_instance(0.4), loss);

  for (const auto* rows : {&occurrence_rows, &loss_rows})
    for (const SweepRow& row : *rows)
      for (const auto& [mode, objective] : row.objectives)
        if (row.full.objective > objective + 1e-9) {
          outcome.pass = false;
          outcome.detail += " dominance violated at " +
                            std::to_string(row.value) + "/" +
                            std::string(to_string(mode)) + ";";
        }

  for (std::size_t m = 0; m < 4; ++m)
    for (std::size_t i = 1; i < occurrence_rows.size(); ++i)
      if (occurrence_rows[i].objectives[m].second <
          occurrence_rows[i - 1].objectives[m].second - 1e-9) {
        outcome.pass = false;
        outcome.detail += " monotonicity violated for mode " +
                          std::string(to_string(occurrence_rows[i].objectives[m].first)) +
                          ";";
      }

  if (outcome.pass)
    outcome.detail = "dominance at 18 points x 4 modes, monotone along occurrence sweep";
  return outcome;
}

Outcome criterion4() {
  Outcome outcome;
  SplitMix64 rng(0xACCE97);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const RiskInstance instance = test::random_instance(rng);
    const Decision decision = test::random_decision(instance, rng);
    const double closed = total_cost(instance, decision).total;
    const double expanded = total_cost_by_expansion(instance, decision);
    worst = std::max(worst, std::abs(expanded - closed));
    if (std::abs(expanded - closed) > 1e-9) {
      outcome.pass = false;
      outcome.detail = " mismatch at trial " + std::to_string(trial);
      break;
    }
  }
  std::ostringstream os;
  os << "1000 random instances, max |expansion - closed| = "
     << std::scientific << worst << outcome.detail;
  outcome.detail = os.str();
  return outcome;
}

Outcome criterion5() {
  Outcome outcome;
  SplitMix64 rng(0x50153);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const RiskInstance instance = test::random_instance(rng);
    const SolveResult exact = solve_bruteforce(instance);
    const SolveResult fast = solve_bnb(instance);
    const double gap = std::abs(exact.objective - fast.objective);
    worst = std::max(worst, gap);
    const double replayed = total_cost(instance, fast.decision).total;
    if (gap > 1e-9 || std::abs(replayed - exact.objective) > 1e-9 ||
        !is_feasible(instance, fast.decision)) {
      outcome.pass = false;
      outcome.detail = " mismatch at trial " + std::to_string(trial);
      break;
    }
  }
  std::ostringstream os;
  os << "200 random instances, max objective gap = " << std::scientific << worst
     << outcome.detail;
  outcome.detail = os.str();
  return outcome;
}

Outcome criterion6() {
  Outcome outcome;
  const RiskInstance instance = bundled_instance();

  std::vector<std::pair<std::string, Decision>> decisions;
  decisions.emplace_back("all-none", Decision::all_none(instance));
  decisions.emplace_back("optimum@0.1", solve_bnb(bundled_instance(0.1)).decision);
  decisions.emplace_back("optimum@0.5", solve_bnb(bundled_instance(0.5)).decision);
  Decision insurance_only = Decision::all_none(instance);
  insurance_only.insurance[0] = 0;
  insurance_only.insurance[1] = 0;
  decisions.emplace_back("insurance-only", insurance_only);
  Decision security_only = Decision::all_none(instance);
  security_only.security[0] = 0;
  security_only.security[1] = 0;
  decisions.emplace_back("security-only", security_only);

  constexpr std::uint64_t kRuns = 1'000'000;
  constexpr int kSeeds = 100;
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());

  std::ostringstream detail;
  for (const auto& [name, decision] : decisions) {
    if (!is_feasible(instance, decision)) {
      outcome.pass = false;
      detail << " " << name << ": infeasible;";
      continue;
    }
    const double closed = total_cost(instance, decision).total;

    std::vector<std::future<int>> futures;
    for (unsigned w = 0; w < workers; ++w)
      futures.push_back(std::async(std::launch::async, [&, w] {
        int within = 0;
        for (int seed = static_cast<int>(w); seed < kSeeds;
             seed += static_cast<int>(workers)) {
          const SimulationSummary s =
              simulate(instance, decision, kRuns, static_cast<std::uint64_t>(seed));
          if (std::abs(s.mean_cost - closed) <= 3.0 * s.std_error) ++within;
        }
        return within;
      }));
    int within = 0;
    for (auto& f : futures) within += f.get();

    detail << " " << name << ":" << within << "/100";
    if (within < 99) {
      outcome.pass = false;
      detail << "(<99)";
    }
  }
  outcome.detail = "3-sigma coverage," + detail.str();
  return outcome;
}

Outcome criterion7() {
  Outcome outcome;
  RiskInstance instance = bundled_instance();
  double previous = std::numeric_limits<double>::infinity();
  std::ostringstream os;
  for (int i = 0; i <= 16; ++i) {
    instance.budget = 0.5 * i;
    const double objective = solve_bnb(instance).objective;
    if (objective > previous + 1e-9) {
      outcome.pass = false;
      outcome.detail += " increase at budget " + std::to_string(instance.budget) + ";";
    }
    previous = objective;
  }
  if (outcome.pass)
    outcome.detail = "objective non-increasing over budgets 0..8 step 0.5";
  return outcome;
}

Outcome criterion8() {
  Outcome outcome;

  // Solver outputs satisfy the structural and budget constraints. The
  // option-index representation makes the at-most-one constraints (checked
  // here through well-formedness) hold by construction.
  SplitMix64 rng(0xFEA51B1E);
  for (int trial = 0; trial < 50; ++trial) {
    const RiskInstance instance = test::random_instance(rng);
    for (const SolveResult& r : {solve_bnb(instance), solve_bruteforce(instance)}) {
      if (!decision_is_well_formed(instance, r.decision) ||
          spend(instance, r.decision) > instance.budget + 1e-9) {
        outcome.pass = false;
        outcome.detail += " constraint violation at trial " +
                          std::to_string(trial) + ";";
      }
    }
  }

  // Normalization validation accepts the bundled instance and rejects
  // perturbed copies, naming the broken distribution.
  if (!validate_instance(bundled_instance()).empty()) {
    outcome.pass = false;
    outcome.detail += " bundled instance rejected;";
  }
  RiskInstance direct_off = bundled_instance();
  direct_off.attacks[0].direct_outcomes[0].probability = 0.4;
  const auto direct_report = validate_instance(direct_off);
  if (direct_report.size() != 1 ||
      direct_report[0].path.find("direct_outcomes") == std::string::npos) {
    outcome.pass = false;
    outcome.detail += " direct-loss perturbation not caught;";
  }
  RiskInstance indirect_off = bundled_instance();
  indirect_off.attacks[1].direct_outcomes[0].indirect_outcomes[1].probability = 0.5;
  const auto indirect_report = validate_instance(indirect_off);
  if (indirect_report.size() != 1 ||
      indirect_report[0].path.find("indirect_outcomes") == std::string::npos) {
    outcome.pass = false;
    outcome.detail += " indirect-loss perturbation not caught;";
  }

  if (outcome.pass)
    outcome.detail =
        "100 solver outputs within budget and well-formed; perturbed "
        "distributions rejected";
  return outcome;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double time_budget_seconds;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"1: policy-table reproduction, occurrence sweep", 1.0, criterion1},
      {"2: policy-table reproduction, direct-loss sweep", 1.0, criterion2},
      {"3: baseline dominance and monotonicity", 10.0, criterion3},
      {"4: closed form equals scenario expansion", 30.0, criterion4},
      {"5: branch-and-bound equals brute force", 60.0, criterion5},
      {"6: Monte Carlo 3-sigma consistency", 120.0, criterion6},
      {"7: budget monotonicity", 1.0, criterion7},
      {"8: feasibility and constraint suite", 10.0, criterion8},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome = criterion.run();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (seconds > criterion.time_budget_seconds) {
      outcome.pass = false;
      outcome.detail += " [over time budget of " +
                        std::to_string(criterion.time_budget_seconds) + " s]";
    }
    std::printf("[%s] criterion %s (%s) [%.2f s]\n",
                outcome.pass ? "PASS" : "FAIL", criterion.name,
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
