// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Command-line parsing, backend orchestration (including the two-round
// sampling plan) and report rendering.

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "volcount/errors.hpp"
#include "volcount/model.hpp"

namespace volcount {

struct CliOptions {
  SolverConfig config;
  std::filesystem::path input;
  bool help = false;
};

/// args excludes the program name. Throws UsageError.
CliOptions parse_cli(const std::vector<std::string>& args);

std::string usage_text();

struct TwoRoundPlan {
  std::vector<double> volumes;
  double v_max = 0;
  long s_min = 0;
  long s_max = 0;
  /// Second-round per-phase size; 0 when skipped.
  std::vector<long> sizes;
  std::vector<char> skip;
};

/// S_i = 2·S_max·V_i/V_max, skipped when <= S_min, clamped to S_max.
TwoRoundPlan two_round_sizes(const std::vector<double>& volumes, long s_min, long s_max);

struct EstimateRecord {
  double round1 = 0;
  double value = 0;
  /// Per-phase size of the estimate kept (0 for zero-volume bunches).
  long samples = 0;
  long fresh_points = 0;
  bool skipped = false;
  bool zero_volume = false;
  bool failed = false;
};

struct BunchRecord {
  int index = 0;
  Bunch bunch;
  BigInt multiplier = 1;
  std::optional<EstimateRecord> estimate;
  std::optional<double> exact_volume;
  std::optional<BigInt> count;
  std::vector<std::string> errors;
};

struct Report {
  std::string input;
  int bool_vars = 0;
  int clauses = 0;
  int numeric_vars = 0;
  int linear_constraints = 0;
  NumericKind numeric_kind = NumericKind::Unspecified;
  SolverConfig config;
  int theory_conflicts = 0;
  int phases = 0;

  std::vector<BunchRecord> bunches;

  /// nullopt when the backend is disabled or failed on some bunch.
  std::optional<double> estimate_total;
  std::optional<double> exact_total;
  std::optional<BigInt> count_total;
  std::optional<double> frequency;
  /// Mean over sampled bunches of final per-phase size / l.
  double average_coefficient = 0;
  std::vector<std::string> errors;
  double wall_seconds = 0;

  bool satisfiable() const { return !bunches.empty(); }
};

/// Throws UsageError (-L on a Real formula) and TimeoutError; backend
/// failures are recorded in the report.
Report run(const SolverConfig& config, const Formula& formula, const Deadline& deadline = {});

std::string render_text(const Report& report);
/// Wall time is left out so equal inputs give byte-identical documents.
std::string render_json(const Report& report);

/// Whole program: parse, run, print. Returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace volcount
