// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "support.hpp"
#include "volcount/exact.hpp"
#include "volcount/lp.hpp"
#include "volcount/polyvest.hpp"

using namespace volcount;
using namespace volcount::testing;

namespace {

LinearSystem system_of(const RoundedPolytope& q) {
  LinearSystem s(q.dim());
  for (int i = 0; i < q.a.rows(); ++i) s.add_row(q.a.row(i).transpose(), q.b(i));
  return s;
}

// Q with no rows: every phase body is a ball, and log_scale makes the
// estimate target the unit ball.
RoundedPolytope bare_ball(int n) {
  RoundedPolytope q;
  q.a = Eigen::MatrixXd(0, n);
  q.b = Eigen::VectorXd(0);
  q.radius = std::exp2(static_cast<double>(phase_count(n)) / n);
  q.log_scale = -phase_count(n) * std::log(2.0);
  return q;
}

RoundedPolytope unit_cube_q(int n) {
  RoundedPolytope q;
  q.a = Eigen::MatrixXd(2 * n, n);
  q.a.setZero();
  q.b = Eigen::VectorXd::Ones(2 * n);
  for (int j = 0; j < n; ++j) {
    q.a(2 * j, j) = 1;
    q.a(2 * j + 1, j) = -1;
  }
  q.radius = 2.0 * n;
  return q;
}

bool inside(const Ellipsoid& e, const Eigen::VectorXd& x, double slack) {
  const Eigen::VectorXd d = x - e.center;
  return d.dot(e.shape.ldlt().solve(d)) <= 1 + slack;
}

}  // namespace

TEST_SUITE("polyvest") {
  TEST_CASE("central cut of the unit disc") {
    Ellipsoid e{Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2)};
    Ellipsoid c = shallow_cut_update(e, Eigen::Vector2d(1, 0), 0);
    CHECK(c.center(0) == doctest::Approx(-1.0 / 3));
    CHECK(c.center(1) == doctest::Approx(0.0));
    CHECK(c.shape(0, 0) == doctest::Approx(4.0 / 9));
    CHECK(c.shape(1, 1) == doctest::Approx(4.0 / 3));
    CHECK(c.shape(0, 1) == doctest::Approx(0.0));
  }

  TEST_CASE("shallow cuts keep the retained half") {
    std::mt19937_64 rng(61);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 40; ++trial) {
      const int n = 2 + trial % 5;
      Eigen::MatrixXd m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = g(rng);
      Ellipsoid e{Eigen::VectorXd::NullaryExpr(n, [&] { return g(rng); }),
                  m * m.transpose() + Eigen::MatrixXd::Identity(n, n)};
      Eigen::VectorXd a = Eigen::VectorXd::NullaryExpr(n, [&] { return g(rng); });
      const double beta = (trial % 3) / (2.0 * n);
      Ellipsoid c = shallow_cut_update(e, a, beta);
      const double cap = a.dot(e.center) + beta * std::sqrt(a.dot(e.shape * a));
      Eigen::LLT<Eigen::MatrixXd> llt(e.shape);
      int tested = 0;
      for (int s = 0; s < 2000; ++s) {
        Eigen::VectorXd u = Eigen::VectorXd::NullaryExpr(n, [&] { return g(rng); });
        u *= std::pow(std::uniform_real_distribution<double>(0, 1)(rng), 1.0 / n) / u.norm();
        Eigen::VectorXd x = e.center + llt.matrixL() * u;
        if (a.dot(x) > cap) continue;
        ++tested;
        CHECK(inside(c, x, 1e-9));
      }
      CHECK(tested > 0);
    }
  }

  TEST_CASE("phase index") {
    Eigen::VectorXd x(1);
    x << 1.3;
    CHECK(phase_index(x, 1, 5) == 1);
    x << 2;
    CHECK(phase_index(x, 1, 5) == 1);
    x << 2.0001;
    CHECK(phase_index(x, 1, 5) == 2);
    x << 0.5;
    CHECK(phase_index(x, 1, 5) == 0);
    x << 1;
    CHECK(phase_index(x, 1, 5) == 0);
    x << 1000;
    CHECK(phase_index(x, 1, 5) == 5);
    Eigen::VectorXd y(2);
    y << 1.3, 0;
    CHECK(phase_index(y, 2, 4) == 1);
    y << 1.5, 0;
    CHECK(phase_index(y, 2, 4) == 2);
    CHECK(phase_count(1) == 1);
    CHECK(phase_count(2) == 4);
    CHECK(phase_count(4) == 12);
  }

  TEST_CASE("unit ball volumes") {
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
    CHECK(unit_ball_volume(2) == doctest::Approx(M_PI));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3));
    CHECK(unit_ball_volume(4) == doctest::Approx(M_PI * M_PI / 2));
  }

  TEST_CASE("counter generator is a pure function of its position") {
    CounterRng a(7, 1), b(7, 1), c(7, 2), d(8, 1);
    for (int k = 0; k < 100; ++k) {
      const auto va = a.next();
      CHECK(va == b.next());
      CHECK(va != c.next());
      CHECK(va != d.next());
    }
    CounterRng u(3, 0);
    double sum = 0;
    for (int k = 0; k < 100000; ++k) {
      const double v = u.uniform();
      CHECK((v >= 0 && v < 1));
      sum += v;
    }
    CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
    for (int k = 0; k < 1000; ++k) CHECK(u.below(7) < 7);
  }

  TEST_CASE("hit-and-run stays on the chord and is uniform in a cube") {
    RoundedPolytope q = unit_cube_q(3);
    CounterRng rng(5, 0);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(3);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(3), sq = Eigen::VectorXd::Zero(3);
    const int steps = 300000;
    for (int s = 0; s < steps; ++s) {
      Eigen::VectorXd y = hit_and_run_step(x, q, 10.0, rng);
      int moved = 0;
      for (int j = 0; j < 3; ++j) moved += y(j) != x(j);
      CHECK(moved <= 1);
      CHECK(y.cwiseAbs().maxCoeff() <= 1.0);
      x = y;
      mean += x;
      sq += x.cwiseProduct(x);
    }
    mean /= steps;
    sq /= steps;
    for (int j = 0; j < 3; ++j) {
      CHECK(std::abs(mean(j)) <= 0.02);
      CHECK(std::abs(sq(j) - mean(j) * mean(j) - 1.0 / 3) <= 0.1 / 3);
    }

    // A binding ball keeps every move inside it.
    Eigen::VectorXd z = Eigen::VectorXd::Zero(3);
    for (int s = 0; s < 10000; ++s) {
      z = hit_and_run_step(z, q, 0.5, rng);
      CHECK(z.norm() <= 0.5 + 1e-12);
    }
  }

  TEST_CASE("rounding a square") {
    auto q = round_polytope(polytope(2, box_rows(2, -1, 1)));
    REQUIRE(q);
    for (int i = 0; i < q->a.rows(); ++i) CHECK(q->b(i) / q->a.row(i).norm() >= 1 - 1e-12);
    LinearSystem s = system_of(*q);
    for (int k = 0; k < 16; ++k) {
      Eigen::Vector2d u(std::cos(k * M_PI / 8), std::sin(k * M_PI / 8));
      LpOutcome top = lp_optimize(s, u, Goal::Maximize);
      REQUIRE(top.status == LpStatus::Optimal);
      CHECK(top.value <= 4 * (1 + 1e-6));
    }
    CHECK(exact_volume(s) * std::exp(q->log_scale) == doctest::Approx(4.0).epsilon(1e-9));
  }

  TEST_CASE("flat and empty bodies do not round") {
    CHECK_FALSE(round_polytope(polytope(2, {row({1, 0}, 1), row({-1, 0}, 0), row({0, 1}, 0), row({0, -1}, 0)})));
    CHECK_FALSE(round_polytope(polytope(1, {row({1}, 0), row({-1}, -1)})));
    CHECK_FALSE(round_polytope(polytope(2, {row({1, 1}, 1, RowKind::Eq), row({1, 0}, 1), row({-1, 0}, 0),
                                            row({0, 1}, 1), row({0, -1}, 0)})));
    CHECK_THROWS_AS(round_polytope(polytope(2, {row({1, 0}, 1), row({-1, 0}, 0)})), UnboundedError);
  }

  TEST_CASE("random rounding probes") {
    std::mt19937_64 rng(67);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 10; ++trial) {
      Polytope p = random_polytope(5, 6, 4, rng);
      auto q = round_polytope(p);
      REQUIRE(q);
      for (int i = 0; i < q->a.rows(); ++i) CHECK(q->b(i) / q->a.row(i).norm() >= 1 - 1e-12);
      LinearSystem s = system_of(*q);
      for (int k = 0; k < 20; ++k) {
        Eigen::VectorXd u = Eigen::VectorXd::NullaryExpr(5, [&] { return g(rng); });
        u.normalize();
        LpOutcome top = lp_optimize(s, u, Goal::Maximize);
        REQUIRE(top.status == LpStatus::Optimal);
        CHECK(top.value <= 10 * (1 + 1e-6));
      }
      const double want = exact_volume(p);
      CHECK(std::abs(exact_volume(s) * std::exp(q->log_scale) - want) <= 1e-9 * want);
    }
  }

  TEST_CASE("ball estimate") {
    RoundedPolytope q = bare_ball(4);
    const long samples = 1600L * phase_count(4);
    const double want = unit_ball_volume(4);
    CounterRng fixed(0, 0);
    CHECK(std::abs(estimate_volume(q, samples, fixed).volume - want) <= 0.1 * want);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      CounterRng rng(seed, 0);
      EstimateResult r = estimate_volume(q, samples, rng);
      CAPTURE(seed);
      for (double a : r.ratios) {
        CHECK(a >= 1.0);
        CHECK(a <= 2.5);
      }
      for (long f : r.fresh_per_phase) CHECK(f <= samples);
    }
  }

  TEST_CASE("one-dimensional segment") {
    auto q = round_polytope(polytope(1, {row({1}, 5), row({-1}, -2)}));
    REQUIRE(q);
    CHECK(q->radius == 2.0);
    CHECK(exact_volume(system_of(*q)) == doctest::Approx(4.0));
    CounterRng rng(1, 0);
    EstimateResult r = estimate_volume(*q, 4000, rng);
    CHECK(r.phases == 1);
    CHECK(r.volume == doctest::Approx(3.0).epsilon(0.05));
  }

  TEST_CASE("estimates are deterministic per key and stream") {
    auto q = round_polytope(polytope(3, box_rows(3, 0, 2)));
    REQUIRE(q);
    CounterRng a(11, 3), b(11, 3);
    EstimateResult x = estimate_volume(*q, 500, a), y = estimate_volume(*q, 500, b);
    CHECK(x.volume == y.volume);
    CHECK(x.ratios == y.ratios);
    CHECK(x.fresh_total == y.fresh_total);
  }

  TEST_CASE("reuse draws fewer fresh points than phases times samples") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 6; ++trial) {
      const int n = 2 + trial;
      auto q = round_polytope(random_polytope(n, 2 * n, 3, rng));
      REQUIRE(q);
      CounterRng walk(trial, 0);
      const long samples = 40L * phase_count(n);
      EstimateResult r = estimate_volume(*q, samples, walk);
      CAPTURE(n);
      CHECK(r.fresh_total <= 0.6 * r.phases * samples);
      long sum = 0;
      for (long f : r.fresh_per_phase) sum += f;
      CHECK(sum == r.fresh_total);
    }
  }
}
