// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Dense two-phase simplex over free variables, plus the derived queries the
// backends need: feasibility witnesses, Chebyshev centers and integer ranges.

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "volcount/model.hpp"

namespace volcount {

/// Floating-point view of a polytope: rows a_i·x <= b_i, or = b_i when
/// flagged. Strictness is not representable here (relaxed).
struct LinearSystem {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  std::vector<char> equality;

  LinearSystem() = default;
  explicit LinearSystem(int dim) : a(0, dim), b(0) {}

  int dim() const { return static_cast<int>(a.cols()); }
  int rows() const { return static_cast<int>(a.rows()); }
  bool has_equality() const;

  void add_row(const Eigen::VectorXd& coeffs, double rhs, bool is_equality = false);
  /// Copy without row i.
  LinearSystem without_row(int i) const;
};

/// Strict rows relaxed; the `empty` marker becomes the row 0 <= -1.
LinearSystem to_system(const Polytope& p);

enum class LpStatus { Optimal, Infeasible, Unbounded };
enum class Goal { Maximize, Minimize };

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  double value = 0;
  Eigen::VectorXd point;
};

/// Primal feasibility tolerance for rows, relative to 1 + |b_i|.
inline constexpr double kFeasibilityTol = 1e-7;
/// Chebyshev radius below which a body counts as flat.
inline constexpr double kFlatTol = 1e-9;

/// Throws NumericalError if the refined optimum violates a row by more than
/// 1e-6 (relative to 1 + |b_i|).
LpOutcome lp_optimize(const LinearSystem& system, const Eigen::VectorXd& objective, Goal goal);
LpOutcome lp_optimize(const Polytope& p, const Eigen::VectorXd& objective, Goal goal);

/// A point of the relaxation, or nullopt when it is empty.
std::optional<Eigen::VectorXd> lp_feasible(const LinearSystem& system);
std::optional<Eigen::VectorXd> lp_feasible(const Polytope& p);

struct ChebyshevBall {
  Eigen::VectorXd center;
  double radius = 0;
};

/// Center of the largest inscribed ball; nullopt (degenerate) when the body
/// is empty, has equality rows, or its radius is at most kFlatTol. Throws
/// UnboundedError when the radius is unbounded.
std::optional<ChebyshevBall> interior_point(const LinearSystem& system);
std::optional<ChebyshevBall> interior_point(const Polytope& p);

struct IntegerRange {
  std::int64_t lo = 0;
  std::int64_t hi = -1;
  std::int64_t size() const { return hi >= lo ? hi - lo + 1 : 0; }
};

/// [ceil(min x_j), floor(max x_j)] over the relaxation, widened by the
/// feasibility tolerance so it never loses an integer point. nullopt when
/// empty. Throws UnboundedError when x_j is unbounded.
std::optional<IntegerRange> integer_bounds(const LinearSystem& system, int j);
std::optional<IntegerRange> integer_bounds(const Polytope& p, int j);

}  // namespace volcount
