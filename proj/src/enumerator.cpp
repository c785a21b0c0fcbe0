// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#include "volcount/enumerator.hpp"

#include <algorithm>

#include "volcount/lp.hpp"

namespace volcount {

namespace {

bool literals_feasible(const std::vector<TheoryLiteral>& literals, const Formula& formula,
                       const SolverConfig& config) {
  BunchPolytope bp = literals_polytope(literals, formula, config);
  if (bp.polytope.empty) return false;
  return lp_feasible(bp.polytope).has_value();
}

// Chronological-backtracking DPLL with two watched literals. Values are
// -1 (unassigned), 0 (false), 1 (true).
class Dpll {
 public:
  explicit Dpll(int num_vars) : n_(num_vars), value_(num_vars + 1, -1), watches_(2 * (num_vars + 1)) {}

  // Returns false if the database became trivially unsatisfiable.
  bool add_clause(const Clause& clause) {
    clauses_.push_back(clause);
    const int id = static_cast<int>(clauses_.size()) - 1;
    if (clause.empty()) {
      unsat_ = true;
    } else if (clause.size() == 1) {
      units_.push_back(clause.front());
    } else {
      watches_[index(clause[0])].push_back(id);
      watches_[index(clause[1])].push_back(id);
    }
    return !unsat_;
  }

  const std::vector<Clause>& clauses() const { return clauses_; }

  // Finds the next total model from scratch, or returns false.
  bool solve(const Deadline& deadline) {
    if (unsat_) return false;
    std::fill(value_.begin(), value_.end(), -1);
    trail_.clear();
    decisions_.clear();
    head_ = 0;
    for (Literal u : units_) {
      int v = lit_value(u);
      if (v == 0) return fail();
      if (v < 0) assign(u);
    }
    if (!propagate()) return fail();

    int next = 1;
    long steps = 0;
    while (true) {
      if ((++steps & 1023) == 0) deadline.check();
      while (next <= n_ && value_[next] >= 0) ++next;
      if (next > n_) return true;
      decisions_.push_back({static_cast<int>(trail_.size()), false});
      assign(-next);
      while (!propagate()) {
        if (!backtrack()) return fail();
      }
      next = 1;
    }
  }

  std::vector<char> model() const {
    std::vector<char> out(n_ + 1, 0);
    for (int v = 1; v <= n_; ++v) out[v] = value_[v] == 1;
    return out;
  }

 private:
  struct Decision {
    int trail_pos;
    bool flipped;
  };

  static int index(Literal lit) { return 2 * var_of(lit) + (lit < 0 ? 1 : 0); }

  int lit_value(Literal lit) const {
    int v = value_[var_of(lit)];
    if (v < 0) return -1;
    return lit > 0 ? v : 1 - v;
  }

  void assign(Literal lit) {
    value_[var_of(lit)] = lit > 0 ? 1 : 0;
    trail_.push_back(lit);
  }

  bool fail() {
    unsat_ = true;
    return false;
  }

  bool propagate() {
    while (head_ < trail_.size()) {
      const Literal falsified = -trail_[head_++];
      auto& list = watches_[index(falsified)];
      std::size_t keep = 0;
      bool conflict = false;
      for (std::size_t k = 0; k < list.size(); ++k) {
        const int id = list[k];
        if (conflict) {
          list[keep++] = id;
          continue;
        }
        Clause& c = clauses_[id];
        if (c[0] == falsified) std::swap(c[0], c[1]);
        if (lit_value(c[0]) == 1) {
          list[keep++] = id;
          continue;
        }
        bool moved = false;
        for (std::size_t j = 2; j < c.size(); ++j) {
          if (lit_value(c[j]) != 0) {
            std::swap(c[1], c[j]);
            watches_[index(c[1])].push_back(id);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        list[keep++] = id;
        if (lit_value(c[0]) == 0) {
          conflict = true;
        } else {
          assign(c[0]);
        }
      }
      list.resize(keep);
      if (conflict) return false;
    }
    return true;
  }

  // Undo to the latest unflipped decision and flip it.
  bool backtrack() {
    while (!decisions_.empty()) {
      Decision d = decisions_.back();
      decisions_.pop_back();
      const Literal decided = trail_[d.trail_pos];
      for (std::size_t k = d.trail_pos; k < trail_.size(); ++k) value_[var_of(trail_[k])] = -1;
      trail_.resize(d.trail_pos);
      head_ = trail_.size();
      if (d.flipped) continue;
      decisions_.push_back({d.trail_pos, true});
      assign(-decided);
      return true;
    }
    return false;
  }

  int n_;
  std::vector<int> value_;
  std::vector<Clause> clauses_;
  std::vector<Literal> units_;
  std::vector<std::vector<int>> watches_;
  std::vector<Literal> trail_;
  std::size_t head_ = 0;
  std::vector<Decision> decisions_;
  bool unsat_ = false;
};

}  // namespace

TheoryVerdict theory_check(const std::vector<TheoryLiteral>& literals, const Formula& formula,
                           const SolverConfig& config) {
  TheoryVerdict verdict;
  if (literals_feasible(literals, formula, config)) return verdict;
  verdict.consistent = false;
  std::vector<TheoryLiteral> core = literals;
  for (std::size_t k = 0; k < core.size();) {
    std::vector<TheoryLiteral> trial = core;
    trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(k));
    if (!literals_feasible(trial, formula, config)) {
      core = std::move(trial);
    } else {
      ++k;
    }
  }
  verdict.conflict = std::move(core);
  return verdict;
}

std::map<int, bool> minimize_assignment(const std::vector<char>& total,
                                        const std::vector<Clause>& clauses) {
  const int n = static_cast<int>(total.size()) - 1;
  auto is_true = [&](Literal lit) { return (lit > 0) == (total[var_of(lit)] != 0); };

  std::vector<int> satisfied(clauses.size(), 0);
  std::vector<std::vector<int>> occurs(n + 1);
  for (std::size_t c = 0; c < clauses.size(); ++c) {
    for (Literal lit : clauses[c]) {
      if (!is_true(lit)) continue;
      ++satisfied[c];
      occurs[var_of(lit)].push_back(static_cast<int>(c));
    }
  }

  std::vector<char> kept(n + 1, 1);
  for (int v = n; v >= 1; --v) {
    bool droppable = std::all_of(occurs[v].begin(), occurs[v].end(),
                                 [&](int c) { return satisfied[c] >= 2; });
    if (!droppable) continue;
    kept[v] = 0;
    for (int c : occurs[v]) --satisfied[c];
  }

  std::map<int, bool> out;
  for (int v = 1; v <= n; ++v)
    if (kept[v]) out.emplace(v, total[v] != 0);
  return out;
}

EnumerationResult enumerate_bunches(const Formula& formula, const SolverConfig& config,
                                    const Deadline& deadline) {
  EnumerationResult result;
  Dpll solver(formula.num_bool_vars);
  for (const auto& clause : formula.clauses) solver.add_clause(clause);

  while (solver.solve(deadline)) {
    deadline.check();
    std::vector<char> total = solver.model();

    std::vector<TheoryLiteral> literals;
    for (const auto& [v, c] : formula.atoms) literals.push_back({v, total[v] != 0});
    TheoryVerdict verdict = theory_check(literals, formula, config);
    if (!verdict.consistent) {
      Clause block;
      for (const auto& lit : verdict.conflict) block.push_back(lit.value ? -lit.var : lit.var);
      ++result.theory_conflicts;
      solver.add_clause(block);
      continue;
    }

    Bunch bunch;
    bunch.assignment = minimize_assignment(total, solver.clauses());
    for (int v = 1; v <= formula.num_bool_vars; ++v)
      if (formula.is_user_bool(v) && !bunch.assignment.count(v)) ++bunch.free_user_bools;

    Clause block;
    for (const auto& [v, value] : bunch.assignment) block.push_back(value ? -v : v);
    result.bunches.push_back(std::move(bunch));
    ++result.blocking_clauses;
    solver.add_clause(block);
  }
  return result;
}

}  // namespace volcount
