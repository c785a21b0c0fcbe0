// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Multiphase Monte-Carlo volume estimation: shallow-cut ellipsoid rounding,
// concentric-ball subdivision, coordinate hit-and-run sampling and
// reverse-order reuse of sample points.

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "volcount/errors.hpp"
#include "volcount/lp.hpp"
#include "volcount/model.hpp"

namespace volcount {

/// {x : (x-o)ᵀ E⁻¹ (x-o) <= 1}.
struct Ellipsoid {
  Eigen::VectorXd center;
  Eigen::MatrixXd shape;
};

/// Smallest ellipsoid containing e ∩ {x : a·x <= a·o + beta·sqrt(aᵀEa)}.
/// beta = 0 is the central cut. Throws NumericalError if the new shape is
/// not positive definite.
Ellipsoid shallow_cut_update(const Ellipsoid& e, const Eigen::VectorXd& a, double beta);

/// Q = {y : a·y <= b} with B(0,1) ⊆ Q ⊆ B(0, radius) and
/// vol(P) = vol(Q)·exp(log_scale).
struct RoundedPolytope {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  double log_scale = 0;
  double radius = 0;

  int dim() const { return static_cast<int>(a.cols()); }
};

/// nullopt when the body has zero volume (empty, equality rows or flat).
/// Throws UnboundedError.
std::optional<RoundedPolytope> round_polytope(const LinearSystem& system, const Deadline& deadline = {});
std::optional<RoundedPolytope> round_polytope(const Polytope& p, const Deadline& deadline = {});

/// l = ceil(n·log2(2n)).
int phase_count(int n);

/// Smallest i with ‖x‖ <= 2^{i/n}, clamped to [0, l].
int phase_index(const Eigen::VectorXd& x, int n, int l);

double log_unit_ball_volume(int n);
double unit_ball_volume(int n);

/// Counter-based generator: value k of stream s under key is a pure
/// function of (key, s, k), so results never depend on scheduling.
class CounterRng {
 public:
  CounterRng(std::uint64_t key, std::uint64_t stream) : key_(key), stream_(stream) {}

  std::uint64_t next();
  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t key_, stream_, counter_ = 0;
};

/// One coordinate-direction hit-and-run move inside q ∩ B(0, radius).
Eigen::VectorXd hit_and_run_step(const Eigen::VectorXd& x, const RoundedPolytope& q, double radius,
                                 CounterRng& rng);

struct EstimateResult {
  double volume = 0;
  /// α̂_i for i = 0..l-1.
  std::vector<double> ratios;
  std::vector<long> fresh_per_phase;
  long fresh_total = 0;
  long samples_per_phase = 0;
  int phases = 0;
};

/// `samples` points per phase; phases run from the outermost ball inwards
/// and reuse every stored point that falls in the current ball.
EstimateResult estimate_volume(const RoundedPolytope& q, long samples, CounterRng& rng, int burnin = 0,
                               const Deadline& deadline = {});

}  // namespace volcount
