// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#include "volcount/model.hpp"

#include <stdexcept>

#include "volcount/errors.hpp"

namespace volcount {

namespace mp = boost::multiprecision;

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    case CmpOp::Eq: return "=";
  }
  return "?";
}

std::string_view to_string(NumericKind kind) {
  switch (kind) {
    case NumericKind::Unspecified: return "unspecified";
    case NumericKind::Int: return "int";
    case NumericKind::Real: return "real";
  }
  return "?";
}

namespace {

int sign_of(const BigInt& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

}  // namespace

CanonicalConstraint normalize_constraint(const LinearConstraint& raw) {
  CanonicalConstraint out;
  bool negate = false;
  switch (raw.op) {
    case CmpOp::Lt: out.strict = true; break;
    case CmpOp::Le: break;
    case CmpOp::Gt: out.strict = true; negate = true; break;
    case CmpOp::Ge: negate = true; break;
    case CmpOp::Eq: out.sense = Sense::Eq; break;
  }

  BigInt lcm = 1;
  auto absorb = [&lcm](const Rational& r) {
    const BigInt& d = mp::denominator(r);
    lcm = lcm / mp::gcd(lcm, d) * d;
  };
  for (const auto& c : raw.coeffs) absorb(c);
  absorb(raw.rhs);

  out.coeffs.reserve(raw.coeffs.size());
  BigInt g = 0;
  for (const auto& c : raw.coeffs) {
    Rational scaled = c * lcm;
    BigInt v = mp::numerator(scaled);
    if (negate) v = -v;
    g = mp::gcd(g, v);
    out.coeffs.push_back(std::move(v));
  }
  Rational scaled_rhs = raw.rhs * lcm;
  out.rhs = mp::numerator(scaled_rhs);
  if (negate) out.rhs = -out.rhs;

  if (g == 0) {
    // 0 op rhs: decide it now and keep only the sign of rhs.
    int s = sign_of(out.rhs);
    bool holds = out.sense == Sense::Eq ? s == 0 : (out.strict ? s > 0 : s >= 0);
    out.triviality = holds ? Triviality::Tautology : Triviality::Contradiction;
    out.rhs = s;
    return out;
  }

  g = mp::gcd(g, out.rhs);
  if (g > 1) {
    for (auto& v : out.coeffs) v /= g;
    out.rhs /= g;
  }
  return out;
}

LinearConstraint to_constraint(const CanonicalConstraint& c) {
  LinearConstraint out;
  out.coeffs.reserve(c.coeffs.size());
  for (const auto& v : c.coeffs) out.coeffs.emplace_back(v);
  out.rhs = Rational(c.rhs);
  out.op = c.sense == Sense::Eq ? CmpOp::Eq : (c.strict ? CmpOp::Lt : CmpOp::Le);
  return out;
}

bool satisfies(const LinearConstraint& c, const std::vector<Rational>& x) {
  Rational lhs = 0;
  for (std::size_t j = 0; j < c.coeffs.size(); ++j) lhs += c.coeffs[j] * x[j];
  switch (c.op) {
    case CmpOp::Lt: return lhs < c.rhs;
    case CmpOp::Le: return lhs <= c.rhs;
    case CmpOp::Gt: return lhs > c.rhs;
    case CmpOp::Ge: return lhs >= c.rhs;
    case CmpOp::Eq: return lhs == c.rhs;
  }
  return false;
}

bool satisfies(const CanonicalConstraint& c, const std::vector<Rational>& x) {
  if (c.triviality != Triviality::None) return c.triviality == Triviality::Tautology;
  return satisfies(to_constraint(c), x);
}

CanonicalConstraint complement(const CanonicalConstraint& c) {
  if (c.sense == Sense::Eq) throw std::logic_error("equality has no halfspace complement");
  CanonicalConstraint out = c;
  if (c.triviality != Triviality::None) {
    out.triviality = c.triviality == Triviality::Tautology ? Triviality::Contradiction
                                                           : Triviality::Tautology;
    return out;
  }
  for (auto& v : out.coeffs) v = -v;
  out.rhs = -c.rhs;
  out.strict = !c.strict;
  return out;
}

void Formula::validate() const {
  if (num_bool_vars < 0 || num_numeric_vars < 0) throw std::invalid_argument("negative counts");
  for (const auto& clause : clauses) {
    std::set<int> seen;
    for (Literal lit : clause) {
      int v = var_of(lit);
      if (lit == 0 || v > num_bool_vars)
        throw std::invalid_argument("literal " + std::to_string(lit) + " out of range");
      if (!seen.insert(v).second)
        throw std::invalid_argument("variable " + std::to_string(v) + " repeated in a clause");
    }
  }
  for (const auto& [v, c] : atoms) {
    if (v < 1 || v > num_bool_vars)
      throw std::invalid_argument("atom variable " + std::to_string(v) + " out of range");
    if (static_cast<int>(c.coeffs.size()) != num_numeric_vars)
      throw std::invalid_argument("atom " + std::to_string(v) + " has wrong coefficient count");
    if (aux_vars.count(v)) throw std::invalid_argument("auxiliary variable bound to an atom");
  }
  for (int v : aux_vars)
    if (v < 1 || v > num_bool_vars) throw std::invalid_argument("auxiliary variable out of range");
}

BigInt bunch_multiplier(const Bunch& bunch) {
  return pow2(static_cast<unsigned>(bunch.free_user_bools));
}

namespace {

bool row_holds(const PolyRow& row, const std::vector<Rational>& x) {
  Rational lhs = 0;
  for (std::size_t j = 0; j < row.coeffs.size(); ++j)
    if (row.coeffs[j] != 0) lhs += Rational(row.coeffs[j]) * x[j];
  Rational rhs(row.rhs);
  switch (row.kind) {
    case RowKind::Le: return lhs <= rhs;
    case RowKind::LeStrict: return lhs < rhs;
    case RowKind::Eq: return lhs == rhs;
  }
  return false;
}

}  // namespace

bool Polytope::contains(const std::vector<Rational>& x) const {
  if (empty) return false;
  for (const auto& row : rows)
    if (!row_holds(row, x)) return false;
  return true;
}

bool BunchPolytope::contains(const std::vector<Rational>& x) const {
  if (!polytope.contains(x)) return false;
  for (const auto& neq : deferred_neqs)
    if (row_holds(neq, x)) return false;
  return true;
}

void SolverConfig::validate() const {
  if (word_length < 0 || word_length > 62)
    throw UsageError("word length must be 0 or between 1 and 62");
  if (min_coeff < 1 || max_coeff < 1) throw UsageError("sampling coefficients must be positive");
  if (min_coeff > max_coeff) throw UsageError("-minc must not exceed -maxc");
  if (timeout_seconds < 0) throw UsageError("timeout must be nonnegative");
  if (burnin < 0) throw UsageError("burn-in must be nonnegative");
}

namespace {

void push_canonical(BunchPolytope& out, const CanonicalConstraint& c, bool neq) {
  if (neq) {
    // a·x != b: a tautological equality makes this impossible, a
    // contradictory one makes it vacuous.
    if (c.triviality == Triviality::Tautology) {
      out.polytope.empty = true;
      return;
    }
    if (c.triviality == Triviality::Contradiction) return;
    out.deferred_neqs.push_back(PolyRow{c.coeffs, c.rhs, RowKind::Eq});
    return;
  }
  if (c.triviality == Triviality::Tautology) return;
  if (c.triviality == Triviality::Contradiction) {
    out.polytope.empty = true;
    return;
  }
  RowKind kind = c.sense == Sense::Eq ? RowKind::Eq : (c.strict ? RowKind::LeStrict : RowKind::Le);
  out.polytope.rows.push_back(PolyRow{c.coeffs, c.rhs, kind});
}

}  // namespace

BunchPolytope literals_polytope(const std::vector<TheoryLiteral>& literals, const Formula& formula,
                                const SolverConfig& config) {
  BunchPolytope out;
  const int n = formula.num_numeric_vars;
  out.polytope.dim = n;
  for (const auto& lit : literals) {
    auto it = formula.atoms.find(lit.var);
    if (it == formula.atoms.end()) continue;
    CanonicalConstraint c = normalize_constraint(it->second);
    if (lit.value) {
      push_canonical(out, c, false);
    } else if (c.sense == Sense::Eq) {
      push_canonical(out, c, true);
    } else {
      push_canonical(out, complement(c), false);
    }
  }
  if (config.word_length > 0) {
    BigInt half = pow2(static_cast<unsigned>(config.word_length - 1));
    for (int j = 0; j < n; ++j) {
      std::vector<BigInt> lower(n, 0), upper(n, 0);
      lower[j] = -1;
      upper[j] = 1;
      out.polytope.rows.push_back(PolyRow{std::move(lower), half, RowKind::Le});
      out.polytope.rows.push_back(PolyRow{std::move(upper), half - 1, RowKind::Le});
    }
  }
  return out;
}

BunchPolytope bunch_polytope(const Bunch& bunch, const Formula& formula, const SolverConfig& config) {
  std::vector<TheoryLiteral> literals;
  for (const auto& [v, value] : bunch.assignment)
    if (formula.is_atom(v)) literals.push_back({v, value});
  return literals_polytope(literals, formula, config);
}

}  // namespace volcount
