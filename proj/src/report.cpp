// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "volcount/driver.hpp"

namespace volcount {

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(9) << v;
  return s.str();
}

std::string assignment_text(const Bunch& bunch) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, value] : bunch.assignment) {
    if (!first) out += ' ';
    out += (value ? "" : "-") + std::to_string(v);
    first = false;
  }
  return out + "}";
}

}  // namespace

std::string render_text(const Report& r) {
  std::ostringstream out;
  if (!r.input.empty()) out << "input: " << r.input << '\n';
  out << "bool vars: " << r.bool_vars << '\n'
      << "clauses: " << r.clauses << '\n'
      << "numeric vars: " << r.numeric_vars << " (" << to_string(r.numeric_kind) << ")\n"
      << "linear constraints: " << r.linear_constraints << '\n'
      << "word length: " << r.config.word_length << (r.config.word_length == 0 ? " (no bounds)" : "") << '\n'
      << "bunches: " << r.bunches.size() << '\n'
      << (r.satisfiable() ? "SATISFIABLE" : "UNSATISFIABLE") << '\n';
  for (const auto& b : r.bunches) out << "  bunch " << b.index << ' ' << assignment_text(b.bunch) << '\n';

  if (r.config.estimate) {
    out << "\n== estimate (seed " << r.config.seed << ", l = " << r.phases << ") ==\n";
    out << "first round\n";
    for (const auto& b : r.bunches) {
      if (!b.estimate) continue;
      out << b.index << '\t' << fmt(b.estimate->round1) << " * " << to_string(b.multiplier) << '\n';
    }
    out << "second round\n";
    for (const auto& b : r.bunches) {
      if (!b.estimate) continue;
      const auto& e = *b.estimate;
      out << b.index << '\t' << (e.skipped ? "skip" : std::to_string(e.samples)) << '\t' << fmt(e.value)
          << " * " << to_string(b.multiplier) << '\n';
    }
    out << "average sampling coefficient: " << fmt(r.average_coefficient) << '\n';
    out << "total (estimate): " << (r.estimate_total ? fmt(*r.estimate_total) : "undefined") << '\n';
  }
  if (r.config.exact_volume) {
    out << "\n== exact volume ==\n";
    for (const auto& b : r.bunches)
      out << b.index << '\t' << (b.exact_volume ? fmt(*b.exact_volume) : "error") << " * "
          << to_string(b.multiplier) << '\n';
    out << "total (exact volume): " << (r.exact_total ? fmt(*r.exact_total) : "undefined") << '\n';
  }
  if (r.config.integer_count) {
    out << "\n== integer count ==\n";
    for (const auto& b : r.bunches)
      out << b.index << '\t' << (b.count ? to_string(*b.count) : "error") << " * " << to_string(b.multiplier)
          << '\n';
    out << "total (integer count): " << (r.count_total ? to_string(*r.count_total) : "undefined") << '\n';
    if (r.frequency) out << "frequency: " << fmt(*r.frequency) << '\n';
  }
  for (const auto& e : r.errors) out << "error: " << e << '\n';
  out << "\ntime: " << std::fixed << std::setprecision(3) << r.wall_seconds << " s\n";
  return out.str();
}

std::string render_json(const Report& r) {
  using nlohmann::json;
  json doc;
  doc["input"] = r.input;
  doc["formula"] = {{"bool_vars", r.bool_vars},
                    {"clauses", r.clauses},
                    {"numeric_vars", r.numeric_vars},
                    {"numeric_kind", std::string(to_string(r.numeric_kind))},
                    {"linear_constraints", r.linear_constraints}};
  json backends = json::array();
  if (r.config.estimate) backends.push_back("estimate");
  if (r.config.exact_volume) backends.push_back("exact_volume");
  if (r.config.integer_count) backends.push_back("integer_count");
  doc["config"] = {{"word_length", r.config.word_length}, {"min_coeff", r.config.min_coeff},
                   {"max_coeff", r.config.max_coeff},     {"seed", r.config.seed},
                   {"burnin", r.config.burnin},           {"backends", backends}};
  doc["satisfiable"] = r.satisfiable();
  doc["theory_conflicts"] = r.theory_conflicts;

  json bunches = json::array();
  for (const auto& b : r.bunches) {
    json jb;
    jb["index"] = b.index;
    jb["multiplier"] = to_string(b.multiplier);
    json assignment = json::object();
    for (const auto& [v, value] : b.bunch.assignment) assignment[std::to_string(v)] = value;
    jb["assignment"] = assignment;
    jb["free_user_bools"] = b.bunch.free_user_bools;
    if (b.estimate) {
      const auto& e = *b.estimate;
      jb["estimate"] = {{"round1", e.round1},     {"value", e.value},
                        {"samples", e.samples},   {"fresh_points", e.fresh_points},
                        {"skipped", e.skipped},   {"zero_volume", e.zero_volume}};
    }
    if (b.exact_volume) jb["exact_volume"] = *b.exact_volume;
    if (b.count) jb["count"] = to_string(*b.count);
    if (!b.errors.empty()) jb["errors"] = b.errors;
    bunches.push_back(std::move(jb));
  }
  doc["bunches"] = bunches;

  json totals = json::object();
  if (r.config.estimate) totals["estimate"] = r.estimate_total ? json(*r.estimate_total) : json(nullptr);
  if (r.config.exact_volume) totals["exact_volume"] = r.exact_total ? json(*r.exact_total) : json(nullptr);
  if (r.config.integer_count) {
    totals["count"] = r.count_total ? json(to_string(*r.count_total)) : json(nullptr);
    if (r.frequency) totals["frequency"] = *r.frequency;
  }
  doc["totals"] = totals;
  if (r.config.estimate) {
    doc["phases"] = r.phases;
    doc["average_sampling_coefficient"] = r.average_coefficient;
  }
  doc["errors"] = r.errors;
  return doc.dump(2) + "\n";
}

}  // namespace volcount
