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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cyrisk/model.hpp"

namespace cyrisk {

/// Raised for unreadable files, JSON syntax errors, schema violations, and
/// instance-validation failures. The message carries the location (line or
/// JSON path) of the first problem and, for validation, every violation.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

using Json = nlohmann::ordered_json;

inline std::string line_of_byte(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

inline double number_at(const Json& node, const std::string& path,
                        const char* key) {
  if (!node.contains(key))
    throw ParseError(path + ": missing required field \"" + key + "\"");
  const Json& v = node.at(key);
  if (!v.is_number())
    throw ParseError(path + "." + key + ": expected a number");
  return v.get<double>();
}

inline const Json& array_at(const Json& node, const std::string& path,
                            const char* key, bool required) {
  static const Json kEmpty = Json::array();
  if (!node.contains(key)) {
    if (required)
      throw ParseError(path + ": missing required field \"" + key + "\"");
    return kEmpty;
  }
  const Json& v = node.at(key);
  if (!v.is_array())
    throw ParseError(path + "." + key + ": expected an array");
  return v;
}

inline std::vector<RepairPackage> parse_repair_catalog(const Json& array,
                                                       const std::string& path) {
  std::vector<RepairPackage> out;
  for (std::size_t u = 0; u < array.size(); ++u) {
    const std::string p = path + "[" + std::to_string(u) + "]";
    if (!array[u].is_object()) throw ParseError(p + ": expected an object");
    out.push_back({number_at(array[u], p, "fee"),
                   number_at(array[u], p, "reduction")});
  }
  return out;
}

}  // namespace detail

/**
 * Parses an instance document without running validate_instance. Accepts the
 * JSON schema described in docs/instance_format.md: a top-level budget, an
 * attack list, and optionally a shared "repair_packages" catalog that is
 * expanded to every (attack, direct loss) pair lacking its own catalog.
 */
inline RiskInstance parse_instance_unchecked(std::string_view text) {
  detail::Json doc;
  try {
    doc = detail::Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("syntax error at " + detail::line_of_byte(text, e.byte) +
                     ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("document: expected a JSON object");

  RiskInstance instance;
  instance.budget = detail::number_at(doc, "document", "budget");

  std::vector<RepairPackage> shared_repairs;
  if (doc.contains("repair_packages"))
    shared_repairs = detail::parse_repair_catalog(
        detail::array_at(doc, "document", "repair_packages", false),
        "repair_packages");

  const detail::Json& attacks = detail::array_at(doc, "document", "attacks", true);
  for (std::size_t k = 0; k < attacks.size(); ++k) {
    const std::string base = "attacks[" + std::to_string(k) + "]";
    const detail::Json& node = attacks[k];
    if (!node.is_object()) throw ParseError(base + ": expected an object");

    Attack a;
    if (node.contains("name")) {
      if (!node.at("name").is_string())
        throw ParseError(base + ".name: expected a string");
      a.name = node.at("name").get<std::string>();
    } else {
      a.name = "a" + std::to_string(k + 1);
    }
    a.occurrence_probability = detail::number_at(node, base, "probability");

    const detail::Json& security =
        detail::array_at(node, base, "security_packages", false);
    for (std::size_t n = 0; n < security.size(); ++n) {
      const std::string p = base + ".security_packages[" + std::to_string(n) + "]";
      if (!security[n].is_object()) throw ParseError(p + ": expected an object");
      a.security_options.push_back({detail::number_at(security[n], p, "fee"),
                                    detail::number_at(security[n], p, "prevention")});
    }
    const detail::Json& insurance =
        detail::array_at(node, base, "insurance_packages", false);
    for (std::size_t m = 0; m < insurance.size(); ++m) {
      const std::string p = base + ".insurance_packages[" + std::to_string(m) + "]";
      if (!insurance[m].is_object()) throw ParseError(p + ": expected an object");
      a.insurance_options.push_back({detail::number_at(insurance[m], p, "premium"),
                                     detail::number_at(insurance[m], p, "coverage")});
    }

    const detail::Json& direct = detail::array_at(node, base, "direct_losses", true);
    for (std::size_t g = 0; g < direct.size(); ++g) {
      const std::string p = base + ".direct_losses[" + std::to_string(g) + "]";
      if (!direct[g].is_object()) throw ParseError(p + ": expected an object");
      DirectLossOutcome d;
      d.probability = detail::number_at(direct[g], p, "probability");
      d.amount = detail::number_at(direct[g], p, "amount");
      const detail::Json& indirect =
          detail::array_at(direct[g], p, "indirect_losses", true);
      for (std::size_t e = 0; e < indirect.size(); ++e) {
        const std::string q = p + ".indirect_losses[" + std::to_string(e) + "]";
        if (!indirect[e].is_object()) throw ParseError(q + ": expected an object");
        d.indirect_outcomes.push_back(
            {detail::number_at(indirect[e], q, "probability"),
             detail::number_at(indirect[e], q, "amount")});
      }
      a.direct_outcomes.push_back(std::move(d));

      if (direct[g].contains("repair_packages")) {
        a.repair_options.push_back(detail::parse_repair_catalog(
            detail::array_at(direct[g], p, "repair_packages", false),
            p + ".repair_packages"));
      } else {
        a.repair_options.push_back(shared_repairs);
      }
    }
    instance.attacks.push_back(std::move(a));
  }
  return instance;
}

/**
 * Parses and validates an instance document. Validation violations are
 * collected into a single ParseError, one line per violation.
 */
inline RiskInstance parse_instance(std::string_view text) {
  RiskInstance instance = parse_instance_unchecked(text);
  const std::vector<Violation> violations = validate_instance(instance);
  if (!violations.empty()) {
    std::ostringstream os;
    os << "instance is invalid (" << violations.size() << " violation"
       << (violations.size() == 1 ? "" : "s") << "):";
    for (const Violation& v : violations)
      os << "\n  " << v.path << ": " << v.message;
    throw ParseError(os.str());
  }
  return instance;
}

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace detail

inline RiskInstance load_instance_file(const std::filesystem::path& path) {
  try {
    return parse_instance(detail::read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

/// Serializes an instance to the document format, with shared repair
/// catalogs written out per (attack, direct loss) pair. Re-parsing the
/// output reproduces the instance exactly (numbers round-trip bit-for-bit).
inline std::string serialize_instance(const RiskInstance& instance) {
  detail::Json doc;
  doc["budget"] = instance.budget;
  doc["attacks"] = detail::Json::array();
  for (const Attack& a : instance.attacks) {
    detail::Json node;
    node["name"] = a.name;
    node["probability"] = a.occurrence_probability;
    node["security_packages"] = detail::Json::array();
    for (const SecurityPackage& s : a.security_options)
      node["security_packages"].push_back(
          {{"fee", s.fee}, {"prevention", s.prevention_probability}});
    node["insurance_packages"] = detail::Json::array();
    for (const InsurancePackage& i : a.insurance_options)
      node["insurance_packages"].push_back(
          {{"premium", i.premium}, {"coverage", i.coverage_fraction}});
    node["direct_losses"] = detail::Json::array();
    for (std::size_t g = 0; g < a.direct_outcomes.size(); ++g) {
      const DirectLossOutcome& d = a.direct_outcomes[g];
      detail::Json dn;
      dn["probability"] = d.probability;
      dn["amount"] = d.amount;
      dn["indirect_losses"] = detail::Json::array();
      for (const IndirectLossOutcome& i : d.indirect_outcomes)
        dn["indirect_losses"].push_back(
            {{"probability", i.probability}, {"amount", i.amount}});
      dn["repair_packages"] = detail::Json::array();
      if (g < a.repair_options.size())
        for (const RepairPackage& r : a.repair_options[g])
          dn["repair_packages"].push_back(
              {{"fee", r.fee}, {"reduction", r.reduction_fraction}});
      node["direct_losses"].push_back(std::move(dn));
    }
    doc["attacks"].push_back(std::move(node));
  }
  return doc.dump(2) + "\n";
}

namespace detail {

inline std::vector<OptionChoice> parse_choice_array(const Json& array,
                                                    const std::string& path) {
  std::vector<OptionChoice> out;
  for (std::size_t i = 0; i < array.size(); ++i) {
    const Json& v = array[i];
    if (v.is_null()) {
      out.push_back(std::nullopt);
    } else if (v.is_number_unsigned()) {
      out.push_back(v.get<std::size_t>());
    } else {
      throw ParseError(path + "[" + std::to_string(i) +
                       "]: expected null or a nonnegative index");
    }
  }
  return out;
}

}  // namespace detail

/**
 * Parses a decision document: {"security": [...], "insurance": [...],
 * "repairs": [[...], ...]} with one entry per attack (and per direct-loss
 * outcome for repairs), each entry null or a 0-based option index. Shape and
 * index ranges against a concrete instance are the caller's check, via
 * decision_is_well_formed.
 */
inline Decision parse_decision(std::string_view text) {
  detail::Json doc;
  try {
    doc = detail::Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("syntax error at " + detail::line_of_byte(text, e.byte) +
                     ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("document: expected a JSON object");

  Decision d;
  d.security = detail::parse_choice_array(
      detail::array_at(doc, "document", "security", true), "security");
  d.insurance = detail::parse_choice_array(
      detail::array_at(doc, "document", "insurance", true), "insurance");
  const detail::Json& repairs = detail::array_at(doc, "document", "repairs", true);
  for (std::size_t k = 0; k < repairs.size(); ++k) {
    const std::string p = "repairs[" + std::to_string(k) + "]";
    if (!repairs[k].is_array()) throw ParseError(p + ": expected an array");
    d.repair.push_back(detail::parse_choice_array(repairs[k], p));
  }
  return d;
}

inline Decision load_decision_file(const std::filesystem::path& path) {
  try {
    return parse_decision(detail::read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

inline std::string serialize_decision(const Decision& decision) {
  detail::Json doc;
  const auto choices = [](const std::vector<OptionChoice>& v) {
    detail::Json array = detail::Json::array();
    for (const OptionChoice& c : v) {
      if (c)
        array.push_back(*c);
      else
        array.push_back(nullptr);
    }
    return array;
  };
  doc["security"] = choices(decision.security);
  doc["insurance"] = choices(decision.insurance);
  doc["repairs"] = detail::Json::array();
  for (const auto& row : decision.repair) doc["repairs"].push_back(choices(row));
  return doc.dump(2) + "\n";
}

}  // namespace cyrisk
