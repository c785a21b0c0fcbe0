// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Shared domain types: linear constraints, formulas over a Boolean skeleton,
// bunches (minimized partial assignments) and the H-polytopes built from them.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "volcount/numeric.hpp"

namespace volcount {

enum class CmpOp { Lt, Le, Gt, Ge, Eq };

std::string_view to_string(CmpOp op);

/// a·x op b over the formula's numeric variables, coefficients exact.
struct LinearConstraint {
  std::vector<Rational> coeffs;
  CmpOp op = CmpOp::Le;
  Rational rhs;

  bool operator==(const LinearConstraint&) const = default;
};

enum class Sense { Le, Eq };
enum class Triviality { None, Tautology, Contradiction };

/// Normal form: sense Le (optionally strict) or Eq, integer coefficients and
/// integer right-hand side whose common gcd is 1. All-zero rows are flagged
/// instead of carried.
struct CanonicalConstraint {
  std::vector<BigInt> coeffs;
  Sense sense = Sense::Le;
  bool strict = false;
  BigInt rhs;
  Triviality triviality = Triviality::None;

  bool operator==(const CanonicalConstraint&) const = default;
  bool operator<(const CanonicalConstraint& o) const {
    return std::tie(coeffs, sense, strict, rhs, triviality) <
           std::tie(o.coeffs, o.sense, o.strict, o.rhs, o.triviality);
  }
};

CanonicalConstraint normalize_constraint(const LinearConstraint& raw);

/// Inverse view of a canonical constraint (op Lt/Le/Eq).
LinearConstraint to_constraint(const CanonicalConstraint& c);

/// Exact evaluation at a rational point.
bool satisfies(const LinearConstraint& c, const std::vector<Rational>& x);
bool satisfies(const CanonicalConstraint& c, const std::vector<Rational>& x);

enum class NumericKind { Unspecified, Int, Real };

std::string_view to_string(NumericKind kind);

/// Signed 1-based Boolean variable index.
using Literal = int;
using Clause = std::vector<Literal>;

inline int var_of(Literal lit) { return lit < 0 ? -lit : lit; }

/// CNF skeleton plus the theory atoms bound to some of its variables.
struct Formula {
  int num_bool_vars = 0;
  std::vector<Clause> clauses;
  std::map<int, LinearConstraint> atoms;
  int num_numeric_vars = 0;
  NumericKind numeric_kind = NumericKind::Unspecified;
  std::vector<std::string> var_names;
  std::set<int> aux_vars;

  bool operator==(const Formula&) const = default;

  bool is_atom(int v) const { return atoms.count(v) != 0; }
  bool is_aux(int v) const { return aux_vars.count(v) != 0; }
  bool is_user_bool(int v) const { return !is_atom(v) && !is_aux(v); }

  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const;
};

/// Minimized partial assignment; covers 2^free_user_bools skeleton models per
/// point of its polytope.
struct Bunch {
  std::map<int, bool> assignment;
  int free_user_bools = 0;

  bool operator==(const Bunch&) const = default;
};

BigInt bunch_multiplier(const Bunch& bunch);

enum class RowKind { Le, LeStrict, Eq };

struct PolyRow {
  std::vector<BigInt> coeffs;
  BigInt rhs;
  RowKind kind = RowKind::Le;

  bool operator==(const PolyRow&) const = default;
};

/// {x : rows hold}. `empty` marks a polytope known to be empty from a
/// contradictory constant row.
struct Polytope {
  int dim = 0;
  std::vector<PolyRow> rows;
  bool empty = false;

  bool contains(const std::vector<Rational>& x) const;
};

/// Hyperplanes a·x = c that a point must avoid (negated equalities).
struct BunchPolytope {
  Polytope polytope;
  std::vector<PolyRow> deferred_neqs;

  bool contains(const std::vector<Rational>& x) const;
};

enum class OutputMode { Text, Json };

struct SolverConfig {
  int word_length = 8;
  std::int64_t min_coeff = 40;
  std::int64_t max_coeff = 1600;
  bool estimate = false;
  bool exact_volume = false;
  bool integer_count = false;
  std::uint64_t seed = 0;
  OutputMode output = OutputMode::Text;
  double timeout_seconds = 0;
  int burnin = 0;
  int threads = 0;

  /// Throws UsageError.
  void validate() const;
};

/// Asserted theory literal: atom variable and polarity.
struct TheoryLiteral {
  int var = 0;
  bool value = true;
};

/// Conjunction of the given literals (negated atoms complemented, negated
/// equalities deferred) plus word-length box rows when enabled.
BunchPolytope literals_polytope(const std::vector<TheoryLiteral>& literals, const Formula& formula,
                                const SolverConfig& config);

BunchPolytope bunch_polytope(const Bunch& bunch, const Formula& formula, const SolverConfig& config);

/// Canonical row for the complement of `c` (a·x ≤ b  ->  -a·x < -b, etc.).
/// Equalities have no halfspace complement; callers defer those.
CanonicalConstraint complement(const CanonicalConstraint& c);

}  // namespace volcount
