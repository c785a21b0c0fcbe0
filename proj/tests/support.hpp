// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Independent oracles and random instance generators shared by the unit and
// acceptance tests. Nothing here calls the backends under test.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "volcount/model.hpp"

namespace volcount::testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(VOLCOUNT_FIXTURES) / name;
}

/// Rows from integer data: a·x (kind) b.
inline PolyRow row(std::vector<long long> a, long long b, RowKind kind = RowKind::Le) {
  PolyRow r;
  for (long long v : a) r.coeffs.emplace_back(v);
  r.rhs = b;
  r.kind = kind;
  return r;
}

inline Polytope polytope(int dim, std::vector<PolyRow> rows) {
  Polytope p;
  p.dim = dim;
  p.rows = std::move(rows);
  return p;
}

/// Box [lo, hi]^n as rows.
inline std::vector<PolyRow> box_rows(int n, long long lo, long long hi) {
  std::vector<PolyRow> rows;
  for (int j = 0; j < n; ++j) {
    std::vector<long long> up(n, 0), down(n, 0);
    up[j] = 1;
    down[j] = -1;
    rows.push_back(row(up, hi));
    rows.push_back(row(down, -lo));
  }
  return rows;
}

/// Evaluates a CNF on a bitmask assignment (bit v-1 = variable v).
inline bool cnf_holds(const std::vector<Clause>& clauses, std::uint32_t mask) {
  for (const auto& c : clauses) {
    bool sat = false;
    for (Literal lit : c) {
      bool value = (mask >> (var_of(lit) - 1)) & 1U;
      if ((lit > 0) == value) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

/// Every total assignment of 1..v satisfying the CNF, by exhaustive scan.
inline std::set<std::uint32_t> brute_force_models(const std::vector<Clause>& clauses, int v) {
  std::set<std::uint32_t> out;
  for (std::uint32_t m = 0; m < (1U << v); ++m)
    if (cnf_holds(clauses, m)) out.insert(m);
  return out;
}

/// Integer points of p in [lo, hi]^n avoiding every NEQ, by exhaustive scan.
inline long long grid_count(const Polytope& p, const std::vector<PolyRow>& neqs, long long lo, long long hi) {
  const int n = p.dim;
  std::vector<Rational> x(n, Rational(lo));
  long long count = 0;
  BunchPolytope bp{p, neqs};
  std::function<void(int)> rec = [&](int j) {
    if (j == n) {
      if (bp.contains(x)) ++count;
      return;
    }
    for (long long v = lo; v <= hi; ++v) {
      x[j] = v;
      rec(j + 1);
    }
  };
  rec(0);
  return count;
}

inline double factorial(int n) { return std::tgamma(n + 1.0); }

/// Random full-dimensional polytope: random rows a·x <= 1 with ‖a‖ about 1
/// around the origin, intersected with [-box, box]^n.
inline Polytope random_polytope(int n, int extra_rows, long long box, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-6, 6);
  std::uniform_int_distribution<int> rhs(1, static_cast<int>(3 * box));
  std::vector<PolyRow> rows = box_rows(n, -box, box);
  for (int k = 0; k < extra_rows; ++k) {
    std::vector<long long> a(n);
    bool nonzero = false;
    while (!nonzero) {
      for (auto& v : a) {
        v = coef(rng);
        nonzero = nonzero || v != 0;
      }
    }
    rows.push_back(row(a, rhs(rng)));
  }
  return polytope(n, rows);
}

inline Eigen::MatrixXd dense_a(const Polytope& p) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(p.rows.size()), p.dim);
  for (std::size_t i = 0; i < p.rows.size(); ++i)
    for (int j = 0; j < p.dim; ++j) a(i, j) = to_double(p.rows[i].coeffs[j]);
  return a;
}

inline Eigen::VectorXd dense_b(const Polytope& p) {
  Eigen::VectorXd b(static_cast<Eigen::Index>(p.rows.size()));
  for (std::size_t i = 0; i < p.rows.size(); ++i) b(i) = to_double(p.rows[i].rhs);
  return b;
}

/// Rejection estimate of vol(p) inside [lo, hi]^n with its standard error.
struct McEstimate {
  double value;
  double stderr_;
};

inline McEstimate rejection_volume(const Polytope& p, double lo, double hi, long samples, std::mt19937_64& rng) {
  const Eigen::MatrixXd a = dense_a(p);
  const Eigen::VectorXd b = dense_b(p);
  std::uniform_real_distribution<double> u(lo, hi);
  long hits = 0;
  Eigen::VectorXd x(p.dim);
  for (long s = 0; s < samples; ++s) {
    for (int j = 0; j < p.dim; ++j) x(j) = u(rng);
    if (((a * x - b).array() <= 0).all()) ++hits;
  }
  const double box = std::pow(hi - lo, p.dim);
  const double f = static_cast<double>(hits) / samples;
  return {f * box, box * std::sqrt(f * (1 - f) / samples)};
}

/// Random Enhanced-DIMACS-style formula: `atoms` random halfspaces over n
/// variables (integer coefficients, rhs around the origin), `user` extra
/// Boolean variables, and `clauses` random 1–3 literal clauses.
inline Formula random_formula(int n, int atoms, int user, int clauses, int unit_atoms, std::mt19937_64& rng) {
  Formula f;
  f.num_numeric_vars = n;
  f.num_bool_vars = atoms + user;
  for (int j = 1; j <= n; ++j) f.var_names.push_back("x" + std::to_string(j));
  std::uniform_int_distribution<int> coef(-4, 4);
  std::uniform_int_distribution<int> rhs(-3, 6);
  std::uniform_int_distribution<int> opd(0, 1);
  for (int v = 1; v <= atoms; ++v) {
    LinearConstraint c;
    bool nonzero = false;
    while (!nonzero) {
      c.coeffs.clear();
      for (int j = 0; j < n; ++j) {
        int a = coef(rng);
        nonzero = nonzero || a != 0;
        c.coeffs.emplace_back(a);
      }
    }
    c.op = opd(rng) ? CmpOp::Le : CmpOp::Lt;
    c.rhs = rhs(rng);
    f.atoms.emplace(v, std::move(c));
  }
  std::uniform_int_distribution<int> pick(1, f.num_bool_vars);
  std::uniform_int_distribution<int> width(1, 3);
  std::uniform_int_distribution<int> sign(0, 1);
  for (int k = 0; k < unit_atoms && k < atoms; ++k) f.clauses.push_back({k + 1});
  while (static_cast<int>(f.clauses.size()) < clauses) {
    Clause c;
    const int w = std::min(width(rng), f.num_bool_vars);
    while (static_cast<int>(c.size()) < w) {
      int v = pick(rng);
      bool dup = false;
      for (Literal l : c) dup = dup || var_of(l) == v;
      if (!dup) c.push_back(sign(rng) ? v : -v);
    }
    f.clauses.push_back(std::move(c));
  }
  return f;
}

/// Random atoms as in random_formula, joined by `clauses` clauses of
/// exactly `width` distinct literals over the atoms.
inline Formula random_kcnf_formula(int n, int atoms, int clauses, int width, std::mt19937_64& rng) {
  Formula f = random_formula(n, atoms, 0, 0, 0, rng);
  std::uniform_int_distribution<int> pick(1, atoms);
  std::uniform_int_distribution<int> sign(0, 1);
  for (int k = 0; k < clauses; ++k) {
    Clause c;
    while (static_cast<int>(c.size()) < width) {
      int v = pick(rng);
      bool dup = false;
      for (Literal l : c) dup = dup || var_of(l) == v;
      if (!dup) c.push_back(sign(rng) ? v : -v);
    }
    f.clauses.push_back(std::move(c));
  }
  return f;
}

}  // namespace volcount::testing
