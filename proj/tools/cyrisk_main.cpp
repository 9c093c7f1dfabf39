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

// Command-line front end.
//
// Exit codes (stable contract):
//   0  success
//   1  `validate` found invariant violations
//   2  unreadable/malformed instance or decision file
//   3  enumeration or scenario cap exceeded (CYRISK_ENUM_CAP,
//      CYRISK_SCENARIO_CAP override the defaults)
//   4  sweep configuration or unsupported sweep (e.g. direct-loss sweep on
//      an attack without exactly two outcomes)
//   5  infeasible decision passed to `simulate`

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cyrisk/cyrisk.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidInstance = 1;
constexpr int kExitParse = 2;
constexpr int kExitCapExceeded = 3;
constexpr int kExitSweepConfig = 4;
constexpr int kExitInfeasible = 5;

std::uint64_t env_cap(const char* name, std::uint64_t fallback) {
  const char* value = std::getenv(name);
  if (!value || !*value) return fallback;
  try {
    return std::stoull(value);
  } catch (const std::exception&) {
    std::cerr << "warning: ignoring non-numeric " << name << "=" << value << "\n";
    return fallback;
  }
}

std::string feasibility_note(const cyrisk::RiskInstance& instance,
                             const cyrisk::Decision& decision) {
  const double s = cyrisk::spend(instance, decision);
  std::ostringstream os;
  os << "spend: " << cyrisk::format_fixed(s) << " / budget "
     << cyrisk::format_fixed(instance.budget) << " ("
     << (cyrisk::is_feasible(instance, decision) ? "feasible" : "infeasible")
     << ")";
  return os.str();
}

void print_policy_table(const cyrisk::RiskInstance& instance,
                        const cyrisk::Decision& decision) {
  std::cout << "policy:\n";
  std::size_t name_width = 6;
  for (const auto& a : instance.attacks)
    name_width = std::max(name_width, a.name.size());
  for (std::size_t k = 0; k < instance.attacks.size(); ++k) {
    const auto& a = instance.attacks[k];
    std::cout << "  " << a.name
              << std::string(name_width - a.name.size() + 2, ' ')
              << cyrisk::security_policy_label(decision, k);
    for (std::size_t g = 0; g < a.direct_outcomes.size(); ++g)
      std::cout << "  d" << g + 1 << ":"
                << cyrisk::repair_policy_label(decision, k, g);
    std::cout << "\n";
  }
}

void write_solve_csv(const std::filesystem::path& path,
                     const cyrisk::RiskInstance& instance,
                     const cyrisk::SolveResult& result) {
  cyrisk::CsvWriter csv;
  csv.cell("attack").cell("policy").cell("repairs").cell("cost").cell("spend").end_row();
  for (std::size_t k = 0; k < instance.attacks.size(); ++k) {
    std::string repairs;
    for (std::size_t g = 0; g < instance.attacks[k].direct_outcomes.size(); ++g) {
      if (g > 0) repairs += ' ';
      repairs += cyrisk::repair_policy_label(result.decision, k, g);
    }
    csv.cell(instance.attacks[k].name)
        .cell(cyrisk::security_policy_label(result.decision, k))
        .cell(repairs)
        .cell(cyrisk::per_attack_cost(instance, result.decision, k))
        .cell(cyrisk::per_attack_spend(instance, result.decision, k))
        .end_row();
  }
  csv.write_atomic(path);
}

int run_solve(const std::string& file, const std::string& mode_name,
              const std::string& solver_name, const std::string& csv_path,
              const std::string& decision_out) {
  const auto mode = cyrisk::baseline_mode_from_string(mode_name);
  if (!mode) {
    std::cerr << "error: unknown mode \"" << mode_name << "\"\n";
    return kExitSweepConfig;
  }
  cyrisk::RiskInstance instance;
  try {
    instance = cyrisk::load_instance_file(file);
  } catch (const cyrisk::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }

  cyrisk::SolveResult result;
  try {
    if (solver_name == "bruteforce") {
      result = cyrisk::solve_bruteforce(
          instance, *mode,
          env_cap("CYRISK_ENUM_CAP", cyrisk::kDefaultEnumerationCap));
    } else {
      result = cyrisk::solve_bnb(instance, *mode);
    }
  } catch (const cyrisk::EnumerationTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapExceeded;
  }

  std::cout << "instance: " << file << "\n"
            << "solver: " << result.solver_name << "  mode: "
            << cyrisk::to_string(*mode) << "\n"
            << "objective: " << cyrisk::format_fixed(result.objective) << "\n"
            << "  stage1 (fees + premiums):        "
            << cyrisk::format_fixed(result.breakdown.stage1) << "\n"
            << "  stage2 (direct + repair fees):   "
            << cyrisk::format_fixed(result.breakdown.stage2) << "\n"
            << "  stage3 (indirect - claims):      "
            << cyrisk::format_fixed(result.breakdown.stage3) << "\n"
            << feasibility_note(instance, result.decision) << "\n"
            << "nodes explored: " << result.nodes_explored << "\n";
  print_policy_table(instance, result.decision);

  if (!csv_path.empty()) write_solve_csv(csv_path, instance, result);
  if (!decision_out.empty()) {
    std::ofstream out(decision_out, std::ios::binary | std::ios::trunc);
    if (!out) {
      std::cerr << "error: cannot write " << decision_out << "\n";
      return kExitParse;
    }
    out << cyrisk::serialize_decision(result.decision);
  }
  return kExitOk;
}

struct SweepArgs {
  std::string param;
  std::string grid;
  std::vector<std::string> fixes;
  std::string out_dir;
};

std::vector<double> parse_grid(const std::string& text) {
  // "a:b:step" inclusive of both ends (within half a step), or "v" alone.
  std::vector<double> out;
  const auto first_colon = text.find(':');
  if (first_colon == std::string::npos) {
    out.push_back(std::stod(text));
    return out;
  }
  const auto second_colon = text.find(':', first_colon + 1);
  if (second_colon == std::string::npos)
    throw cyrisk::SweepConfigError("grid must be <start>:<stop>:<step>");
  const double start = std::stod(text.substr(0, first_colon));
  const double stop = std::stod(text.substr(first_colon + 1,
                                            second_colon - first_colon - 1));
  const double step = std::stod(text.substr(second_colon + 1));
  if (!(step > 0)) throw cyrisk::SweepConfigError("grid step must be positive");
  for (double v = start; v <= stop + step / 2; v += step) out.push_back(v);
  return out;
}

// "attack-prob:<name>" or "direct-loss-prob:<attack>/<outcome>", where
// <outcome> is a 1-based index, optionally written d1, d2, ...
void parse_param_path(const std::string& text, cyrisk::SweepSpec& spec) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw cyrisk::SweepConfigError("parameter path needs a kind prefix");
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  if (kind == "attack-prob") {
    spec.parameter = cyrisk::SweepParameter::kAttackProbability;
    spec.attack_name = rest;
    if (rest.empty()) throw cyrisk::SweepConfigError("missing attack name");
    return;
  }
  if (kind == "direct-loss-prob") {
    spec.parameter = cyrisk::SweepParameter::kDirectLossProbability;
    const auto slash = rest.find('/');
    if (slash == std::string::npos)
      throw cyrisk::SweepConfigError(
          "direct-loss-prob path must be <attack>/<outcome>");
    spec.attack_name = rest.substr(0, slash);
    std::string outcome = rest.substr(slash + 1);
    if (!outcome.empty() && (outcome[0] == 'd' || outcome[0] == 'D'))
      outcome = outcome.substr(1);
    try {
      const unsigned long index = std::stoul(outcome);
      if (index == 0) throw cyrisk::SweepConfigError("outcomes are 1-based");
      spec.outcome_index = index - 1;
    } catch (const std::logic_error&) {
      throw cyrisk::SweepConfigError("bad outcome \"" + outcome + "\"");
    }
    return;
  }
  throw cyrisk::SweepConfigError("unknown parameter kind \"" + kind + "\"");
}

int run_sweep_command(const std::string& file, const SweepArgs& args) {
  cyrisk::RiskInstance instance;
  try {
    instance = cyrisk::load_instance_file(file);
  } catch (const cyrisk::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }

  try {
    cyrisk::SweepSpec spec;
    parse_param_path(args.param, spec);
    spec.grid = parse_grid(args.grid);

    for (const std::string& fix : args.fixes) {
      const auto eq = fix.rfind('=');
      if (eq == std::string::npos)
        throw cyrisk::SweepConfigError("--fix needs <path>=<value>");
      cyrisk::SweepSpec fix_spec;
      parse_param_path(fix.substr(0, eq), fix_spec);
      const double value = std::stod(fix.substr(eq + 1));
      if (fix_spec.parameter != cyrisk::SweepParameter::kAttackProbability)
        throw cyrisk::SweepConfigError("--fix supports attack-prob paths only");
      instance = cyrisk::with_attack_probability(instance, fix_spec.attack_name,
                                                 value);
    }

    const std::vector<cyrisk::SweepRow> rows = cyrisk::run_sweep(instance, spec);

    std::filesystem::create_directories(args.out_dir);
    const std::filesystem::path dir(args.out_dir);

    cyrisk::CsvWriter costs;
    costs.cell("value");
    for (cyrisk::BaselineMode mode : spec.modes)
      costs.cell(cyrisk::to_string(mode));
    costs.end_row();
    for (const cyrisk::SweepRow& row : rows) {
      costs.cell(row.value);
      for (const auto& [mode, objective] : row.objectives) costs.cell(objective);
      costs.end_row();
    }
    costs.write_atomic(dir / "costs.csv");

    cyrisk::CsvWriter policies;
    policies.cell("value");
    for (const auto& a : instance.attacks) {
      policies.cell(a.name + "_policy");
      for (std::size_t g = 0; g < a.direct_outcomes.size(); ++g)
        policies.cell(a.name + "_d" + std::to_string(g + 1));
    }
    policies.cell("objective").cell("spend").end_row();
    for (const cyrisk::SweepRow& row : rows) {
      policies.cell(row.value);
      for (std::size_t k = 0; k < instance.attacks.size(); ++k) {
        policies.cell(row.policy_labels[k]);
        for (const std::string& label : row.repair_labels[k])
          policies.cell(label);
      }
      policies.cell(row.full.objective).cell(row.full.spend).end_row();
    }
    policies.write_atomic(dir / "policies.csv");

    cyrisk::CsvWriter components;
    components.cell("value");
    for (const auto& a : instance.attacks)
      components.cell(a.name + "_direct")
          .cell(a.name + "_indirect")
          .cell(a.name + "_claims")
          .cell(a.name + "_fees");
    components.end_row();
    for (const cyrisk::SweepRow& row : rows) {
      components.cell(row.value);
      for (const auto& c : row.components)
        components.cell(c.expected_direct_loss)
            .cell(c.expected_indirect_loss)
            .cell(c.expected_claims)
            .cell(c.fees);
      components.end_row();
    }
    components.write_atomic(dir / "components.csv");

    std::cout << "wrote " << (dir / "costs.csv").string() << ", "
              << (dir / "policies.csv").string() << ", "
              << (dir / "components.csv").string() << " (" << rows.size()
              << " rows)\n";
    return kExitOk;
  } catch (const cyrisk::UnsupportedSweepError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSweepConfig;
  } catch (const cyrisk::SweepConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSweepConfig;
  } catch (const cyrisk::EnumerationTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapExceeded;
  }
}

int load_pair(const std::string& instance_file, const std::string& decision_file,
              cyrisk::RiskInstance& instance, cyrisk::Decision& decision) {
  try {
    instance = cyrisk::load_instance_file(instance_file);
    decision = cyrisk::load_decision_file(decision_file);
  } catch (const cyrisk::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  if (!cyrisk::decision_is_well_formed(instance, decision)) {
    std::cerr << "error: decision shape or indices do not match the instance\n";
    return kExitParse;
  }
  return kExitOk;
}

int run_simulate(const std::string& file, const std::string& decision_file,
                 std::uint64_t runs, std::uint64_t seed, unsigned threads) {
  cyrisk::RiskInstance instance;
  cyrisk::Decision decision;
  if (const int rc = load_pair(file, decision_file, instance, decision)) return rc;

  if (!cyrisk::is_feasible(instance, decision)) {
    std::cerr << "error: decision is infeasible: spend "
              << cyrisk::format_fixed(cyrisk::spend(instance, decision))
              << " exceeds budget "
              << cyrisk::format_fixed(instance.budget) << "\n";
    return kExitInfeasible;
  }

  const cyrisk::SimulationSummary summary =
      cyrisk::simulate(instance, decision, runs, seed, threads);
  const cyrisk::CostBreakdown closed = cyrisk::total_cost(instance, decision);
  const double diff = std::abs(summary.mean_cost - closed.total);

  std::cout << "simulation:\n"
            << "  runs: " << summary.runs << "  seed: " << summary.seed
            << "  generator: " << summary.generator << "\n"
            << "  mean cost: " << cyrisk::format_fixed(summary.mean_cost)
            << "  std error: " << cyrisk::format_fixed(summary.std_error);
  if (summary.degenerate_sample) std::cout << "  (degenerate sample)";
  std::cout << "\n  stage means: " << cyrisk::format_fixed(summary.mean_stage1)
            << " " << cyrisk::format_fixed(summary.mean_stage2) << " "
            << cyrisk::format_fixed(summary.mean_stage3) << "\n"
            << "closed form:\n"
            << "  total: " << cyrisk::format_fixed(closed.total) << "\n"
            << "|mean - closed|: " << cyrisk::format_fixed(diff);
  if (summary.std_error > 0) {
    const double ratio = diff / summary.std_error;
    std::cout << "  ratio to std error: " << cyrisk::format_fixed(ratio)
              << "  (within 3: " << (ratio <= 3.0 ? "yes" : "no") << ")";
  } else {
    std::cout << "  ratio to std error: n/a";
  }
  std::cout << "\n";
  return kExitOk;
}

int run_evaluate(const std::string& file, const std::string& decision_file) {
  cyrisk::RiskInstance instance;
  cyrisk::Decision decision;
  if (const int rc = load_pair(file, decision_file, instance, decision)) return rc;

  const cyrisk::CostBreakdown b = cyrisk::total_cost(instance, decision);
  std::cout << "cost breakdown:\n"
            << "  stage1: " << cyrisk::format_fixed(b.stage1)
            << "  stage2: " << cyrisk::format_fixed(b.stage2)
            << "  stage3: " << cyrisk::format_fixed(b.stage3)
            << "  total: " << cyrisk::format_fixed(b.total) << "\n"
            << feasibility_note(instance, decision) << "\n";
  print_policy_table(instance, decision);

  try {
    const auto scenarios = cyrisk::expand_scenarios(
        instance, decision,
        env_cap("CYRISK_SCENARIO_CAP", cyrisk::kDefaultScenarioCap));
    double probability_sum = 0.0;
    double expanded = 0.0;
    for (const auto& [scenario, cost] : scenarios) {
      probability_sum += scenario.probability;
      expanded += scenario.probability * cost;
    }
    const double diff = std::abs(expanded - b.total);
    std::ostringstream sci;
    sci << std::scientific << std::setprecision(3) << diff;
    std::cout << "expansion cross-check:\n"
              << "  scenarios: " << scenarios.size()
              << "  probability sum: " << cyrisk::format_fixed(probability_sum)
              << "\n  expanded total: " << cyrisk::format_fixed(expanded)
              << "  |difference|: " << sci.str() << "  (within 1e-9: "
              << (diff <= 1e-9 ? "yes" : "no") << ")\n";
  } catch (const cyrisk::EnumerationTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapExceeded;
  }
  return kExitOk;
}

int run_validate(const std::string& file) {
  std::string text;
  cyrisk::RiskInstance instance;
  try {
    text = cyrisk::detail::read_file(file);
    instance = cyrisk::parse_instance_unchecked(text);
  } catch (const cyrisk::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  const std::vector<cyrisk::Violation> violations =
      cyrisk::validate_instance(instance);
  if (violations.empty()) {
    std::cout << "instance is valid (" << instance.attacks.size()
              << " attacks, budget " << cyrisk::format_fixed(instance.budget)
              << ")\n";
    return kExitOk;
  }
  std::cout << violations.size() << " violation"
            << (violations.size() == 1 ? "" : "s") << ":\n";
  for (const auto& v : violations)
    std::cout << "  " << v.path << ": " << v.message << "\n";
  return kExitInvalidInstance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"three-stage cyber-risk budget allocation toolkit"};
  app.require_subcommand(1);

  std::string file, mode_name = "full", solver_name = "bnb";
  std::string csv_path, decision_out, decision_file;
  SweepArgs sweep_args;
  std::uint64_t runs = 100000, seed = 0;
  unsigned threads = 1;

  CLI::App* solve = app.add_subcommand("solve", "find the optimal purchase plan");
  solve->add_option("file", file, "instance file")->required();
  solve->add_option("--mode", mode_name,
                    "full|no-insurance|no-security|none (default full)");
  solve->add_option("--solver", solver_name, "bnb|bruteforce (default bnb)")
      ->check(CLI::IsMember({"bnb", "bruteforce"}));
  solve->add_option("--csv", csv_path, "write the policy table as CSV");
  solve->add_option("--save-decision", decision_out,
                    "write the optimal decision as a decision document");

  CLI::App* sweep = app.add_subcommand("sweep", "solve along a parameter grid");
  sweep->add_option("file", file, "instance file")->required();
  sweep->add_option("--param", sweep_args.param,
                    "attack-prob:<name> or direct-loss-prob:<attack>/<outcome>")
      ->required();
  sweep->add_option("--grid", sweep_args.grid, "<start>:<stop>:<step>")->required();
  sweep->add_option("--fix", sweep_args.fixes,
                    "pin another parameter, e.g. attack-prob:a1=0.4");
  sweep->add_option("--out", sweep_args.out_dir, "output directory")->required();

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo check of a decision against the closed form");
  simulate->add_option("file", file, "instance file")->required();
  simulate->add_option("--decision", decision_file, "decision file")->required();
  simulate->add_option("--runs", runs, "number of runs (default 100000)");
  simulate->add_option("--seed", seed, "master seed (default 0)");
  simulate->add_option("--threads", threads,
                       "worker threads; any count gives identical results");

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "closed-form cost of a decision plus expansion cross-check");
  evaluate->add_option("file", file, "instance file")->required();
  evaluate->add_option("--decision", decision_file, "decision file")->required();

  CLI::App* validate = app.add_subcommand("validate", "check instance invariants");
  validate->add_option("file", file, "instance file")->required();

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed())
    return run_solve(file, mode_name, solver_name, csv_path, decision_out);
  if (sweep->parsed()) return run_sweep_command(file, sweep_args);
  if (simulate->parsed())
    return run_simulate(file, decision_file, runs, seed, threads);
  if (evaluate->parsed()) return run_evaluate(file, decision_file);
  if (validate->parsed()) return run_validate(file);
  return kExitOk;
}
