// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#include "volcount/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "volcount/errors.hpp"

namespace volcount {

bool LinearSystem::has_equality() const {
  return std::any_of(equality.begin(), equality.end(), [](char e) { return e != 0; });
}

void LinearSystem::add_row(const Eigen::VectorXd& coeffs, double rhs, bool is_equality) {
  const Eigen::Index m = a.rows();
  a.conservativeResize(m + 1, Eigen::NoChange);
  a.row(m) = coeffs.transpose();
  b.conservativeResize(m + 1);
  b(m) = rhs;
  equality.push_back(is_equality ? 1 : 0);
}

LinearSystem LinearSystem::without_row(int i) const {
  LinearSystem out(dim());
  const int m = rows();
  out.a.resize(m - 1, dim());
  out.b.resize(m - 1);
  int k = 0;
  for (int r = 0; r < m; ++r) {
    if (r == i) continue;
    out.a.row(k) = a.row(r);
    out.b(k) = b(r);
    out.equality.push_back(equality[r]);
    ++k;
  }
  return out;
}

LinearSystem to_system(const Polytope& p) {
  LinearSystem s(p.dim);
  const int m = static_cast<int>(p.rows.size()) + (p.empty ? 1 : 0);
  s.a.setZero(m, p.dim);
  s.b.setZero(m);
  s.equality.assign(m, 0);
  for (int i = 0; i < static_cast<int>(p.rows.size()); ++i) {
    const auto& row = p.rows[i];
    for (int j = 0; j < p.dim; ++j) s.a(i, j) = to_double(row.coeffs[j]);
    s.b(i) = to_double(row.rhs);
    s.equality[i] = row.kind == RowKind::Eq ? 1 : 0;
  }
  if (p.empty) s.b(m - 1) = -1;
  return s;
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr int kDegenerateStreak = 50;

// Dense tableau with the objective (reduced costs) in the last row and the
// right-hand side in the last column. Maximizes.
class Tableau {
 public:
  Tableau(int rows, int cols) : m_(rows), n_(cols), t_((rows + 1) * (cols + 1), 0.0), basis_(rows, -1),
                                blocked_(cols, 0) {}

  double& at(int i, int j) { return t_[static_cast<std::size_t>(i) * (n_ + 1) + j]; }
  double at(int i, int j) const { return t_[static_cast<std::size_t>(i) * (n_ + 1) + j]; }
  double& rhs(int i) { return at(i, n_); }
  double rhs(int i) const { return at(i, n_); }
  int rows() const { return m_; }
  int cols() const { return n_; }
  std::vector<int>& basis() { return basis_; }
  const std::vector<int>& basis() const { return basis_; }
  void block(int j) { blocked_[j] = 1; }

  void pivot(int r, int s) {
    const double inv = 1.0 / at(r, s);
    for (int j = 0; j <= n_; ++j) at(r, j) *= inv;
    at(r, s) = 1.0;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = at(i, s);
      if (f == 0.0) continue;
      for (int j = 0; j <= n_; ++j) at(i, j) -= f * at(r, j);
      at(i, s) = 0.0;
    }
    basis_[r] = s;
  }

  void set_objective(const std::vector<double>& cost) {
    for (int j = 0; j <= n_; ++j) at(m_, j) = 0.0;
    for (int j = 0; j < n_; ++j) at(m_, j) = -cost[j];
    for (int i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j <= n_; ++j) at(m_, j) += cb * at(i, j);
    }
  }

  double objective() const { return at(m_, n_); }

  enum class Result { Optimal, Unbounded };

  Result maximize() {
    bool bland = false;
    int streak = 0;
    const long limit = 50L * (m_ + n_) + 1000;
    for (long iter = 0; iter < limit; ++iter) {
      int s = -1;
      for (int j = 0; j < n_; ++j) {
        if (blocked_[j]) continue;
        const double d = at(m_, j);
        if (d >= -kCostTol) continue;
        if (s < 0) {
          s = j;
          if (bland) break;
        } else if (d < at(m_, s)) {
          s = j;
        }
      }
      if (s < 0) return Result::Optimal;

      int r = -1;
      double best = 0;
      for (int i = 0; i < m_; ++i) {
        const double a = at(i, s);
        if (a <= kPivotTol) continue;
        const double ratio = std::max(rhs(i), 0.0) / a;
        if (r < 0 || ratio < best - 1e-12 * (1 + best)) {
          r = i;
          best = ratio;
        } else if (ratio <= best + 1e-12 * (1 + best)) {
          bool take = bland ? basis_[i] < basis_[r] : a > at(r, s);
          if (take) {
            r = i;
            best = ratio;
          }
        }
      }
      if (r < 0) return Result::Unbounded;

      if (best <= 1e-12) {
        if (++streak > kDegenerateStreak) bland = true;
      } else {
        streak = 0;
      }
      pivot(r, s);
      for (int i = 0; i < m_; ++i)
        if (rhs(i) < 0 && rhs(i) > -1e-11) rhs(i) = 0.0;
    }
    throw NumericalError("simplex iteration limit exceeded");
  }

 private:
  int m_, n_;
  std::vector<double> t_;
  std::vector<int> basis_;
  std::vector<char> blocked_;
};

double max_violation(const LinearSystem& s, const Eigen::VectorXd& x) {
  double worst = 0;
  for (int i = 0; i < s.rows(); ++i) {
    double r = s.a.row(i).dot(x) - s.b(i);
    double v = s.equality[i] ? std::abs(r) : std::max(r, 0.0);
    worst = std::max(worst, v / (1.0 + std::abs(s.b(i))));
  }
  return worst;
}

}  // namespace

LpOutcome lp_optimize(const LinearSystem& system, const Eigen::VectorXd& objective, Goal goal) {
  const int m = system.rows();
  const int n = system.dim();
  LpOutcome out;

  if (m == 0) {
    if (n > 0 && objective.cwiseAbs().maxCoeff() > 0) {
      out.status = LpStatus::Unbounded;
      return out;
    }
  }

  // Columns: x+ (n), x- (n), one slack per row, one artificial per row that
  // needs it (negative rhs or equality).
  std::vector<int> art_row;
  std::vector<double> sign(m, 1.0);
  for (int i = 0; i < m; ++i) {
    if (system.b(i) < 0) sign[i] = -1.0;
    if (system.equality[i] || system.b(i) < 0) art_row.push_back(i);
  }
  const int k = static_cast<int>(art_row.size());
  const int slack0 = 2 * n;
  const int art0 = 2 * n + m;
  const int cols = art0 + k;

  Tableau tab(m, cols);
  Eigen::MatrixXd original = Eigen::MatrixXd::Zero(m, cols);
  Eigen::VectorXd original_rhs(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      original(i, j) = sign[i] * system.a(i, j);
      original(i, n + j) = -sign[i] * system.a(i, j);
    }
    if (!system.equality[i]) original(i, slack0 + i) = sign[i];
    original_rhs(i) = sign[i] * system.b(i);
  }
  for (int a = 0; a < k; ++a) original(art_row[a], art0 + a) = 1.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < cols; ++j) tab.at(i, j) = original(i, j);
    tab.rhs(i) = original_rhs(i);
  }
  for (int i = 0; i < m; ++i)
    if (system.equality[i]) tab.block(slack0 + i);

  std::vector<int>& basis = tab.basis();
  for (int i = 0; i < m; ++i) basis[i] = slack0 + i;
  for (int a = 0; a < k; ++a) basis[art_row[a]] = art0 + a;

  double scale = 1.0;
  for (int i = 0; i < m; ++i) scale = std::max(scale, std::abs(system.b(i)));

  if (k > 0) {
    std::vector<double> cost(cols, 0.0);
    for (int a = 0; a < k; ++a) cost[art0 + a] = -1.0;
    tab.set_objective(cost);
    tab.maximize();
    if (tab.objective() < -kFeasibilityTol * scale) {
      out.status = LpStatus::Infeasible;
      return out;
    }
    for (int i = 0; i < m; ++i) {
      if (basis[i] < art0) continue;
      int s = -1;
      double best = kPivotTol;
      for (int j = 0; j < art0; ++j) {
        if (j >= slack0 && system.equality[j - slack0]) continue;
        if (std::abs(tab.at(i, j)) > best) {
          best = std::abs(tab.at(i, j));
          s = j;
        }
      }
      if (s >= 0) tab.pivot(i, s);
    }
    for (int a = 0; a < k; ++a) tab.block(art0 + a);
  }

  std::vector<double> cost(cols, 0.0);
  const double dir = goal == Goal::Maximize ? 1.0 : -1.0;
  for (int j = 0; j < n; ++j) {
    cost[j] = dir * objective(j);
    cost[n + j] = -dir * objective(j);
  }
  tab.set_objective(cost);
  if (tab.maximize() == Tableau::Result::Unbounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }

  Eigen::VectorXd z = Eigen::VectorXd::Zero(cols);
  for (int i = 0; i < m; ++i) z(basis[i]) = tab.rhs(i);

  // Refinement: recompute basic values from the untouched constraint matrix.
  if (m > 0) {
    Eigen::MatrixXd mb(m, m);
    for (int i = 0; i < m; ++i) mb.col(i) = original.col(basis[i]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(mb);
    if (lu.isInvertible()) {
      Eigen::VectorXd zb = lu.solve(original_rhs);
      if (zb.allFinite() && zb.minCoeff() > -1e-9 * scale) {
        z.setZero();
        for (int i = 0; i < m; ++i) z(basis[i]) = std::max(zb(i), 0.0);
      }
    }
  }

  out.point.resize(n);
  for (int j = 0; j < n; ++j) out.point(j) = z(j) - z(n + j);
  if (max_violation(system, out.point) > 1e-6)
    throw NumericalError("LP residual exceeds tolerance after refinement");
  out.status = LpStatus::Optimal;
  out.value = objective.dot(out.point);
  return out;
}

LpOutcome lp_optimize(const Polytope& p, const Eigen::VectorXd& objective, Goal goal) {
  return lp_optimize(to_system(p), objective, goal);
}

std::optional<Eigen::VectorXd> lp_feasible(const LinearSystem& system) {
  LpOutcome r = lp_optimize(system, Eigen::VectorXd::Zero(system.dim()), Goal::Maximize);
  if (r.status != LpStatus::Optimal) return std::nullopt;
  return r.point;
}

std::optional<Eigen::VectorXd> lp_feasible(const Polytope& p) { return lp_feasible(to_system(p)); }

std::optional<ChebyshevBall> interior_point(const LinearSystem& system) {
  const int n = system.dim();
  if (system.has_equality()) return std::nullopt;
  LinearSystem lifted(n + 1);
  lifted.a.resize(system.rows(), n + 1);
  lifted.b = system.b;
  lifted.equality = system.equality;
  for (int i = 0; i < system.rows(); ++i) {
    lifted.a.row(i).head(n) = system.a.row(i);
    lifted.a(i, n) = system.a.row(i).norm();
  }
  Eigen::VectorXd objective = Eigen::VectorXd::Zero(n + 1);
  objective(n) = 1.0;
  LpOutcome r = lp_optimize(lifted, objective, Goal::Maximize);
  if (r.status == LpStatus::Unbounded) throw UnboundedError("inscribed ball radius is unbounded");
  if (r.status == LpStatus::Infeasible) return std::nullopt;
  if (r.value <= kFlatTol) return std::nullopt;
  return ChebyshevBall{r.point.head(n), r.value};
}

std::optional<ChebyshevBall> interior_point(const Polytope& p) { return interior_point(to_system(p)); }

std::optional<IntegerRange> integer_bounds(const LinearSystem& system, int j) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(system.dim());
  e(j) = 1.0;
  LpOutcome hi = lp_optimize(system, e, Goal::Maximize);
  if (hi.status == LpStatus::Infeasible) return std::nullopt;
  if (hi.status == LpStatus::Unbounded) throw UnboundedError("cannot count an infinite set");
  LpOutcome lo = lp_optimize(system, e, Goal::Minimize);
  if (lo.status == LpStatus::Unbounded) throw UnboundedError("cannot count an infinite set");
  if (lo.status == LpStatus::Infeasible) return std::nullopt;
  const double limit = 9.0e18;
  if (std::abs(lo.value) > limit || std::abs(hi.value) > limit)
    throw NumericalError("integer range exceeds 64 bits");
  IntegerRange range;
  range.lo = static_cast<std::int64_t>(std::ceil(lo.value - kFeasibilityTol * (1 + std::abs(lo.value))));
  range.hi = static_cast<std::int64_t>(std::floor(hi.value + kFeasibilityTol * (1 + std::abs(hi.value))));
  if (range.lo > range.hi) return std::nullopt;
  return range;
}

std::optional<IntegerRange> integer_bounds(const Polytope& p, int j) {
  return integer_bounds(to_system(p), j);
}

}  // namespace volcount
