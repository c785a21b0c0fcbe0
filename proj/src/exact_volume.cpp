// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "volcount/exact.hpp"

namespace volcount {

namespace {

constexpr double kCoeffTol = 1e-12;
constexpr double kRedundancyTol = 1e-9;

struct FaceKey {
  std::vector<int> tight;
  std::vector<int> vars;
  auto operator<=>(const FaceKey&) const = default;
};

// Lasserre recursion: d·vol(P) = Σ_i b_i/‖a_i‖ · vol_{d-1}(F_i) with the
// origin moved to an interior point so every b_i is positive. Faces are
// memoized by (tight original rows, surviving coordinates), which fixes the
// projected face regardless of the path that reached it.
class Lasserre {
 public:
  explicit Lasserre(const Deadline& deadline) : deadline_(deadline) {}

  double volume(LinearSystem s, const std::vector<int>& ids, const std::vector<int>& vars,
                const std::vector<int>& tight) {
    deadline_.check();
    FaceKey key{tight, vars};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    double v = compute(std::move(s), ids, vars, tight);
    memo_.emplace(std::move(key), v);
    return v;
  }

 private:
  double interval_length(const LinearSystem& s) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int i = 0; i < s.rows(); ++i) {
      const double a = s.a(i, 0), b = s.b(i);
      if (std::abs(a) <= kCoeffTol) {
        if (b < -kRedundancyTol * (1 + std::abs(b))) return 0;
        continue;
      }
      if (a > 0) {
        hi = std::min(hi, b / a);
      } else {
        lo = std::max(lo, b / a);
      }
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw UnboundedError("unbounded solution space");
    return std::max(0.0, hi - lo);
  }

  double compute(LinearSystem s, const std::vector<int>& ids, const std::vector<int>& vars,
                 const std::vector<int>& tight) {
    const int d = s.dim();
    if (d == 1) return interval_length(s);

    auto ball = interior_point(s);
    if (!ball) return 0;
    s.b -= s.a * ball->center;

    std::vector<int> active;
    for (int i = 0; i < s.rows(); ++i) {
      const double norm = s.a.row(i).norm();
      if (norm <= kCoeffTol) continue;
      s.a.row(i) /= norm;
      s.b(i) /= norm;
      active.push_back(i);
    }

    // Sequential removal so that one copy of duplicated rows survives.
    for (std::size_t k = 0; k < active.size();) {
      LinearSystem others(d);
      others.a.resize(static_cast<Eigen::Index>(active.size()) - 1, d);
      others.b.resize(static_cast<Eigen::Index>(active.size()) - 1);
      int r = 0;
      for (std::size_t q = 0; q < active.size(); ++q) {
        if (q == k) continue;
        others.a.row(r) = s.a.row(active[q]);
        others.b(r) = s.b(active[q]);
        others.equality.push_back(0);
        ++r;
      }
      const int i = active[k];
      LpOutcome best = lp_optimize(others, s.a.row(i).transpose(), Goal::Maximize);
      if (best.status == LpStatus::Optimal && best.value <= s.b(i) + kRedundancyTol * (1 + std::abs(s.b(i)))) {
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(k));
      } else {
        ++k;
      }
    }

    LinearSystem kept(d);
    kept.a.resize(static_cast<Eigen::Index>(active.size()), d);
    kept.b.resize(static_cast<Eigen::Index>(active.size()));
    std::vector<int> kept_ids;
    for (std::size_t q = 0; q < active.size(); ++q) {
      kept.a.row(q) = s.a.row(active[q]);
      kept.b(q) = s.b(active[q]);
      kept.equality.push_back(0);
      kept_ids.push_back(ids[active[q]]);
    }

    double sum = 0;
    for (int i = 0; i < kept.rows(); ++i) {
      auto face = face_restrict(kept, i);
      if (!face) continue;
      std::vector<int> child_ids;
      for (int src : face->source_rows) child_ids.push_back(kept_ids[src]);
      std::vector<int> child_vars = vars;
      child_vars.erase(child_vars.begin() + face->eliminated);
      std::vector<int> child_tight = tight;
      child_tight.insert(std::upper_bound(child_tight.begin(), child_tight.end(), kept_ids[i]),
                         kept_ids[i]);
      const double face_volume = volume(std::move(face->reduced), child_ids, child_vars, child_tight);
      sum += kept.b(i) / std::abs(kept.a(i, face->eliminated)) * face_volume;
    }
    return sum / d;
  }

  const Deadline& deadline_;
  std::map<FaceKey, double> memo_;
};

}  // namespace

std::optional<FaceRestriction> face_restrict(const LinearSystem& system, int i) {
  const int d = system.dim();
  int k = 0;
  for (int j = 1; j < d; ++j)
    if (std::abs(system.a(i, j)) > std::abs(system.a(i, k))) k = j;
  const double pivot = system.a(i, k);
  if (std::abs(pivot) < kCoeffTol) return std::nullopt;

  FaceRestriction out;
  out.eliminated = k;
  out.scale = system.a.row(i).norm() / std::abs(pivot);
  out.reduced = LinearSystem(d - 1);
  for (int r = 0; r < system.rows(); ++r) {
    if (r == i) continue;
    const double f = system.a(r, k) / pivot;
    Eigen::VectorXd coeffs(d - 1);
    bool nonzero = false;
    for (int j = 0, c = 0; j < d; ++j) {
      if (j == k) continue;
      double v = system.a(r, j) - f * system.a(i, j);
      if (std::abs(v) <= kCoeffTol * (std::abs(system.a(r, j)) + std::abs(f * system.a(i, j)))) v = 0;
      coeffs(c++) = v;
      nonzero = nonzero || v != 0;
    }
    const double rhs = system.b(r) - f * system.b(i);
    if (!nonzero) {
      const double slack = kRedundancyTol * (1 + std::abs(system.b(r)) + std::abs(f * system.b(i)));
      if (system.equality[r] ? std::abs(rhs) > slack : rhs < -slack) return std::nullopt;
      continue;
    }
    out.reduced.add_row(coeffs, rhs, system.equality[r] != 0);
    out.source_rows.push_back(r);
  }
  return out;
}

double exact_volume(const LinearSystem& system, const Deadline& deadline) {
  if (system.has_equality()) return 0;
  const int n = system.dim();
  if (n == 0) return lp_feasible(system) ? 1.0 : 0.0;
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(j) = 1;
    for (Goal goal : {Goal::Maximize, Goal::Minimize}) {
      LpOutcome r = lp_optimize(system, e, goal);
      if (r.status == LpStatus::Infeasible) return 0;
      if (r.status == LpStatus::Unbounded) throw UnboundedError("unbounded solution space");
    }
  }
  std::vector<int> ids(system.rows()), vars(n);
  for (int i = 0; i < system.rows(); ++i) ids[i] = i;
  for (int j = 0; j < n; ++j) vars[j] = j;
  Lasserre solver(deadline);
  return solver.volume(system, ids, vars, {});
}

double exact_volume(const Polytope& p, const Deadline& deadline) {
  if (p.empty) return 0;
  for (const auto& row : p.rows)
    if (row.kind == RowKind::Eq) return 0;
  return exact_volume(to_system(p), deadline);
}

}  // namespace volcount
