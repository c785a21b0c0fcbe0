// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "support.hpp"
#include "volcount/frontends.hpp"
#include "volcount/errors.hpp"
#include "volcount/model.hpp"

using namespace volcount;
using namespace volcount::testing;

namespace {

LinearConstraint lc(std::vector<Rational> a, CmpOp op, Rational b) { return LinearConstraint{std::move(a), op, b}; }

std::vector<BigInt> ints(std::vector<long long> v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("strict difference constraint keeps its coefficients") {
    auto c = normalize_constraint(lc({1, -1}, CmpOp::Lt, 0));
    CHECK(c.coeffs == ints({1, -1}));
    CHECK(c.sense == Sense::Le);
    CHECK(c.strict);
    CHECK(c.rhs == 0);
    CHECK(c.triviality == Triviality::None);
  }

  TEST_CASE("all-zero rows are decided") {
    CHECK(normalize_constraint(lc({0}, CmpOp::Le, 5)).triviality == Triviality::Tautology);
    CHECK(normalize_constraint(lc({0, 0}, CmpOp::Le, -1)).triviality == Triviality::Contradiction);
    CHECK(normalize_constraint(lc({0}, CmpOp::Lt, 0)).triviality == Triviality::Contradiction);
    CHECK(normalize_constraint(lc({0}, CmpOp::Eq, 0)).triviality == Triviality::Tautology);
    CHECK(normalize_constraint(lc({0}, CmpOp::Gt, -2)).triviality == Triviality::Tautology);
  }

  TEST_CASE("fractional coefficients are cleared and reduced") {
    auto raw = lc({*parse_rational("0.5")}, CmpOp::Le, *parse_rational("0.25"));
    auto c = normalize_constraint(raw);
    CHECK(c.coeffs == ints({2}));
    CHECK(c.rhs == 1);
    CHECK_FALSE(c.strict);
    std::vector<Rational> half{Rational(1, 2)}, above{Rational(51, 100)};
    CHECK(satisfies(raw, half));
    CHECK(satisfies(c, half));
    CHECK_FALSE(satisfies(raw, above));
    CHECK_FALSE(satisfies(c, above));
  }

  TEST_CASE("greater-than flips into less-than") {
    auto c = normalize_constraint(lc({2, 4}, CmpOp::Ge, 6));
    CHECK(c.coeffs == ints({-1, -2}));
    CHECK(c.rhs == -3);
    CHECK_FALSE(c.strict);
    auto g = normalize_constraint(lc({1, 0}, CmpOp::Gt, 0));
    CHECK(g.coeffs == ints({-1, 0}));
    CHECK(g.strict);
  }

  TEST_CASE("canonicalization is idempotent and preserves meaning") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 6), opd(0, 4);
    auto rnd = [&] { return Rational(num(rng), den(rng)); };
    for (int trial = 0; trial < 400; ++trial) {
      const int n = 1 + trial % 3;
      LinearConstraint raw;
      for (int j = 0; j < n; ++j) raw.coeffs.push_back(trial % 17 == 0 ? Rational(0) : rnd());
      raw.op = static_cast<CmpOp>(opd(rng));
      raw.rhs = rnd();
      auto c = normalize_constraint(raw);
      if (c.triviality == Triviality::None) CHECK(normalize_constraint(to_constraint(c)) == c);
      for (int s = 0; s < 20; ++s) {
        std::vector<Rational> x;
        for (int j = 0; j < n; ++j) x.push_back(rnd());
        // Points on the hyperplane exercise strictness and equality.
        if (s == 0 && raw.coeffs[0] != 0) {
          Rational rest = raw.rhs;
          for (int j = 1; j < n; ++j) rest -= raw.coeffs[j] * x[j];
          x[0] = rest / raw.coeffs[0];
        }
        CHECK(satisfies(raw, x) == satisfies(c, x));
      }
    }
  }

  TEST_CASE("complement is the set complement") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> d(-5, 5);
    for (int trial = 0; trial < 100; ++trial) {
      auto c = normalize_constraint(lc({d(rng), d(rng)}, trial % 2 ? CmpOp::Lt : CmpOp::Ge, d(rng)));
      auto k = complement(c);
      for (int s = 0; s < 20; ++s) {
        std::vector<Rational> x{Rational(d(rng), 2), Rational(d(rng), 3)};
        CHECK(satisfies(c, x) != satisfies(k, x));
      }
    }
  }

  TEST_CASE("f1 area I bunch polytope") {
    Formula f = parse_file(fixture("f1.vs"));
    Bunch b;
    b.assignment = {{1, true}, {3, true}, {4, true}, {5, true}, {6, true}, {7, true}};
    SolverConfig cfg;
    cfg.word_length = 0;
    BunchPolytope bp = bunch_polytope(b, f, cfg);
    CHECK(bp.deferred_neqs.empty());
    CHECK_FALSE(bp.polytope.empty);
    std::vector<PolyRow> expected{row({1, -1}, 0, RowKind::LeStrict), row({1, 1}, 1, RowKind::LeStrict),
                                  row({1, 0}, 1),  row({0, 1}, 1),
                                  row({-1, 0}, 0), row({0, -1}, 0)};
    CHECK(bp.polytope.rows == expected);
  }

  TEST_CASE("negated equality is deferred") {
    Formula f;
    f.num_bool_vars = 1;
    f.num_numeric_vars = 1;
    f.atoms.emplace(1, lc({1}, CmpOp::Eq, 46));
    f.clauses = {{-1}};
    Bunch b;
    b.assignment = {{1, false}};
    SolverConfig cfg;
    cfg.word_length = 0;
    BunchPolytope bp = bunch_polytope(b, f, cfg);
    CHECK(bp.polytope.rows.empty());
    REQUIRE(bp.deferred_neqs.size() == 1);
    CHECK(bp.deferred_neqs[0] == row({1}, 46, RowKind::Eq));
  }

  TEST_CASE("empty assignment gives the word-length box") {
    Formula f;
    f.num_numeric_vars = 1;
    SolverConfig cfg;
    BunchPolytope bp = bunch_polytope(Bunch{}, f, cfg);
    std::vector<PolyRow> expected{row({-1}, 128), row({1}, 127)};
    CHECK(bp.polytope.rows == expected);
  }

  TEST_CASE("multiplier is two to the free user Booleans") {
    Bunch b;
    b.free_user_bools = 1;
    CHECK(bunch_multiplier(b) == 2);
    b.free_user_bools = 0;
    CHECK(bunch_multiplier(b) == 1);

    // Three independent Booleans left free: every completion satisfies the
    // CNF because the assigned literal already does.
    std::vector<Clause> clauses{{1, 2}, {1, -3, 4}, {1, -2}};
    b.assignment = {{1, true}};
    b.free_user_bools = 3;
    int completions = 0;
    for (std::uint32_t m = 0; m < 16; ++m)
      if ((m & 1U) && cnf_holds(clauses, m)) ++completions;
    CHECK(bunch_multiplier(b) == completions);
    CHECK(bunch_multiplier(b) == 8);
  }

  TEST_CASE("adding assignments shrinks the bunch polytope") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coord(-8, 8);
    for (int trial = 0; trial < 20; ++trial) {
      Formula f = random_formula(2, 5, 0, 0, 0, rng);
      SolverConfig cfg;
      cfg.word_length = 4;
      Bunch small, large;
      small.assignment = {{1, true}, {2, false}};
      large.assignment = small.assignment;
      large.assignment[3] = trial % 2 == 0;
      large.assignment[4] = true;
      BunchPolytope ps = bunch_polytope(small, f, cfg), pl = bunch_polytope(large, f, cfg);
      for (int s = 0; s < 200; ++s) {
        std::vector<Rational> x{Rational(coord(rng), 2), Rational(coord(rng), 2)};
        if (pl.contains(x)) CHECK(ps.contains(x));
      }
    }
  }

  TEST_CASE("config validation") {
    SolverConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.min_coeff = 2000;
    cfg.max_coeff = 100;
    CHECK_THROWS_AS(cfg.validate(), UsageError);
    cfg = SolverConfig{};
    cfg.word_length = 63;
    CHECK_THROWS_AS(cfg.validate(), UsageError);
  }
}
