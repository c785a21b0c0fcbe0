// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// All-SAT enumeration of the Boolean skeleton with an LP theory check.
// Each feasible total assignment is minimized into a bunch and then blocked,
// so the emitted bunches cover every feasible assignment exactly once.

#include <map>
#include <vector>

#include "volcount/errors.hpp"
#include "volcount/model.hpp"

namespace volcount {

struct TheoryVerdict {
  bool consistent = true;
  /// Shrunk infeasible subset when inconsistent (deletion-minimal).
  std::vector<TheoryLiteral> conflict;
};

/// LP check of the conjunction of `literals` plus the word-length box.
/// Negated equalities are ignored here; strict rows are relaxed.
TheoryVerdict theory_check(const std::vector<TheoryLiteral>& literals, const Formula& formula,
                           const SolverConfig& config);

/// `total[v]` is the value of variable v (index 0 unused). Greedy pass in
/// descending index: v is dropped when every clause it satisfies keeps
/// another satisfied literal.
std::map<int, bool> minimize_assignment(const std::vector<char>& total,
                                        const std::vector<Clause>& clauses);

struct EnumerationResult {
  std::vector<Bunch> bunches;
  int theory_conflicts = 0;
  int blocking_clauses = 0;
};

EnumerationResult enumerate_bunches(const Formula& formula, const SolverConfig& config,
                                    const Deadline& deadline = {});

}  // namespace volcount
