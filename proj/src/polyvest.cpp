// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#include "volcount/polyvest.hpp"

#include <cmath>
#include <limits>

namespace volcount {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr long kMaxCuts = 2000000;

}  // namespace

std::uint64_t CounterRng::next() {
  return mix64(mix64(key_ ^ mix64(stream_)) + counter_++ * 0xD1B54A32D192ED03ULL);
}

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t CounterRng::below(std::uint64_t n) {
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do v = next();
  while (v >= limit);
  return v % n;
}

double log_unit_ball_volume(int n) {
  return 0.5 * n * std::log(M_PI) - std::lgamma(0.5 * n + 1.0);
}

double unit_ball_volume(int n) { return std::exp(log_unit_ball_volume(n)); }

int phase_count(int n) { return static_cast<int>(std::ceil(n * std::log2(2.0 * n) - 1e-12)); }

int phase_index(const Eigen::VectorXd& x, int n, int l) {
  const double sq = x.squaredNorm();
  if (sq <= 1.0) return 0;
  // ‖x‖ <= 2^{i/n}  <=>  n·log2(‖x‖²) <= 2i.
  int i = static_cast<int>(std::ceil(0.5 * n * std::log2(sq)));
  if (i > 0 && sq <= std::exp2(2.0 * (i - 1) / n)) --i;
  while (i < l && sq > std::exp2(2.0 * i / n)) ++i;
  return std::min(std::max(i, 0), l);
}

Ellipsoid shallow_cut_update(const Ellipsoid& e, const Eigen::VectorXd& a, double beta) {
  const int n = static_cast<int>(e.center.size());
  const Eigen::VectorXd ea = e.shape * a;
  const double aea = a.dot(ea);
  if (!(aea > 0)) throw NumericalError("degenerate cut direction");
  const Eigen::VectorXd g = ea / std::sqrt(aea);
  const double nn = static_cast<double>(n) * n;
  const double gamma = (1.0 - n * beta) / (n + 1.0);
  Ellipsoid out;
  out.center = e.center - gamma * g;
  out.shape = (nn * (1.0 - beta * beta) / (nn - 1.0)) * (e.shape - (2.0 * gamma / (1.0 - beta)) * g * g.transpose());
  out.shape = 0.5 * (out.shape + out.shape.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(out.shape);
  if (llt.info() != Eigen::Success) throw NumericalError("ellipsoid lost positive definiteness");
  return out;
}

std::optional<RoundedPolytope> round_polytope(const LinearSystem& system, const Deadline& deadline) {
  const int n = system.dim();
  if (n < 1) throw std::invalid_argument("rounding needs at least one dimension");
  if (system.has_equality()) return std::nullopt;

  Eigen::VectorXd lo(n), hi(n);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(j) = 1;
    LpOutcome top = lp_optimize(system, e, Goal::Maximize);
    if (top.status == LpStatus::Infeasible) return std::nullopt;
    if (top.status == LpStatus::Unbounded) throw UnboundedError("unbounded solution space");
    LpOutcome bottom = lp_optimize(system, e, Goal::Minimize);
    if (bottom.status == LpStatus::Unbounded) throw UnboundedError("unbounded solution space");
    hi(j) = top.value;
    lo(j) = bottom.value;
  }
  if (!interior_point(system)) return std::nullopt;

  RoundedPolytope q;
  const double two_n = 2.0 * n;
  q.radius = two_n;

  if (n == 1) {
    // Q = [-2, 2] directly: the interval is its own ellipsoid.
    const double half = 0.5 * (hi(0) - lo(0));
    const double center = 0.5 * (hi(0) + lo(0));
    q.a = system.a * (half / two_n);
    q.b = system.b - system.a.col(0) * center;
    q.log_scale = std::log(half) - std::log(two_n);
    return q;
  }

  Ellipsoid ell;
  ell.center = 0.5 * (lo + hi);
  const double r = 0.5 * (hi - lo).norm();
  ell.shape = Eigen::MatrixXd::Identity(n, n) * (r * r);
  const double beta = 1.0 / two_n;
  const double log_det_floor = 2.0 * n * std::log(kFlatTol);

  for (long cut = 0;; ++cut) {
    if ((cut & 255) == 0) deadline.check();
    if (cut >= kMaxCuts) throw NumericalError("rounding did not converge");
    int worst = -1;
    double worst_depth = beta;
    for (int i = 0; i < system.rows(); ++i) {
      const Eigen::VectorXd ai = system.a.row(i).transpose();
      const double width = std::sqrt(ai.dot(ell.shape * ai));
      if (!(width > 0)) continue;
      const double depth = (system.b(i) - ai.dot(ell.center)) / width;
      if (depth < worst_depth) {
        worst_depth = depth;
        worst = i;
      }
    }
    if (worst < 0) break;
    ell = shallow_cut_update(ell, system.a.row(worst).transpose(), beta);
    Eigen::LLT<Eigen::MatrixXd> llt(ell.shape);
    const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    if (log_det < log_det_floor) return std::nullopt;
  }

  Eigen::LLT<Eigen::MatrixXd> llt(ell.shape);
  const Eigen::MatrixXd l = llt.matrixL();
  q.a = system.a * l / two_n;
  q.b = system.b - system.a * ell.center;
  q.log_scale = l.diagonal().array().log().sum() - n * std::log(two_n);
  return q;
}

std::optional<RoundedPolytope> round_polytope(const Polytope& p, const Deadline& deadline) {
  if (p.empty) return std::nullopt;
  for (const auto& row : p.rows)
    if (row.kind == RowKind::Eq) return std::nullopt;
  return round_polytope(to_system(p), deadline);
}

namespace {

// Walker state with A·x and ‖x‖² cached so each step costs O(m).
class Walker {
 public:
  Walker(const RoundedPolytope& q, Eigen::VectorXd x) : q_(q), x_(std::move(x)) {
    ax_ = q.a * x_;
    sq_ = x_.squaredNorm();
  }

  const Eigen::VectorXd& point() const { return x_; }
  double squared_norm() const { return sq_; }

  void reset(const Eigen::VectorXd& x) {
    x_ = x;
    ax_ = q_.a * x_;
    sq_ = x_.squaredNorm();
  }

  void step(double radius, CounterRng& rng) {
    const int n = static_cast<int>(x_.size());
    const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const double xk = x_(k);
    const double disc = xk * xk - sq_ + radius * radius;
    if (disc <= 0) {
      rng.uniform();
      return;
    }
    const double root = std::sqrt(disc);
    double lo = -xk - root, hi = -xk + root;
    for (Eigen::Index r = 0; r < q_.a.rows(); ++r) {
      const double c = q_.a(r, k);
      const double room = q_.b(r) - ax_(r);
      if (c > 0) {
        hi = std::min(hi, room / c);
      } else if (c < 0) {
        lo = std::max(lo, room / c);
      }
    }
    const double u = rng.uniform();
    if (!(hi - lo >= 1e-14)) return;
    const double t = lo + u * (hi - lo);
    x_(k) += t;
    ax_ += t * q_.a.col(k);
    sq_ = x_.squaredNorm();
  }

 private:
  const RoundedPolytope& q_;
  Eigen::VectorXd x_;
  Eigen::VectorXd ax_;
  double sq_;
};

}  // namespace

Eigen::VectorXd hit_and_run_step(const Eigen::VectorXd& x, const RoundedPolytope& q, double radius,
                                 CounterRng& rng) {
  Walker w(q, x);
  w.step(radius, rng);
  return w.point();
}

EstimateResult estimate_volume(const RoundedPolytope& q, long samples, CounterRng& rng, int burnin,
                               const Deadline& deadline) {
  if (samples < 1) throw std::invalid_argument("sample count must be positive");
  const int n = q.dim();
  const int l = phase_count(n);
  EstimateResult out;
  out.phases = l;
  out.samples_per_phase = samples;
  out.ratios.assign(l, 0.0);
  out.fresh_per_phase.assign(l, 0);

  // bucket[m]: stored points whose phase index is m. last[m]: the most
  // recent of them, used to restart the walk in a smaller ball.
  std::vector<long> bucket(l + 1, 0);
  std::vector<Eigen::VectorXd> last(l + 1);
  std::vector<long> stamp(l + 1, -1);
  long clock = 0;

  Walker walker(q, Eigen::VectorXd::Zero(n));
  for (int i = l - 1; i >= 0; --i) {
    const double radius = std::exp2(static_cast<double>(i + 1) / n);
    int from = -1;
    for (int m = 0; m <= i + 1; ++m)
      if (stamp[m] >= 0 && (from < 0 || stamp[m] > stamp[from])) from = m;
    walker.reset(from >= 0 ? last[from] : Eigen::VectorXd::Zero(n));

    long available = 0;
    for (int m = 0; m <= i + 1; ++m) available += bucket[m];
    for (int b = 0; b < burnin; ++b) walker.step(radius, rng);
    while (available < samples) {
      if ((clock & 4095) == 0) deadline.check();
      walker.step(radius, rng);
      const int m = phase_index(walker.point(), n, l);
      ++bucket[m];
      last[m] = walker.point();
      stamp[m] = clock++;
      ++available;
      ++out.fresh_per_phase[i];
    }
    long inside = 0;
    for (int m = 0; m <= i; ++m) inside += bucket[m];
    if (inside == 0) throw BackendError("estimation degenerate");
    out.ratios[i] = static_cast<double>(available) / static_cast<double>(inside);
    out.fresh_total += out.fresh_per_phase[i];
  }

  double log_volume = log_unit_ball_volume(n) + q.log_scale;
  for (double r : out.ratios) log_volume += std::log(r);
  out.volume = std::exp(log_volume);
  return out;
}

}  // namespace volcount
