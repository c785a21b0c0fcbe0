// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#include "volcount/tseitin.hpp"

#include <algorithm>

namespace volcount {

BoolExprPtr bool_const(bool value) {
  static const BoolExprPtr t = std::make_shared<BoolExpr>(BoolExpr{BoolExpr::Kind::Const, true, 0, {}});
  static const BoolExprPtr f = std::make_shared<BoolExpr>(BoolExpr{BoolExpr::Kind::Const, false, 0, {}});
  return value ? t : f;
}

BoolExprPtr bool_var(int var) {
  return std::make_shared<BoolExpr>(BoolExpr{BoolExpr::Kind::Var, false, var, {}});
}

BoolExprPtr bool_not(BoolExprPtr e) {
  if (e->kind == BoolExpr::Kind::Const) return bool_const(!e->value);
  if (e->kind == BoolExpr::Kind::Not) return e->children.front();
  return std::make_shared<BoolExpr>(BoolExpr{BoolExpr::Kind::Not, false, 0, {std::move(e)}});
}

namespace {

// absorbing = the constant that decides the connective (false for and).
BoolExprPtr make_nary(BoolExpr::Kind kind, std::vector<BoolExprPtr> children, bool absorbing) {
  std::vector<BoolExprPtr> kept;
  for (auto& c : children) {
    if (c->kind == BoolExpr::Kind::Const) {
      if (c->value == absorbing) return bool_const(absorbing);
      continue;
    }
    kept.push_back(std::move(c));
  }
  if (kept.empty()) return bool_const(!absorbing);
  if (kept.size() == 1) return kept.front();
  return std::make_shared<BoolExpr>(BoolExpr{kind, false, 0, std::move(kept)});
}

}  // namespace

BoolExprPtr bool_and(std::vector<BoolExprPtr> children) {
  return make_nary(BoolExpr::Kind::And, std::move(children), false);
}

BoolExprPtr bool_or(std::vector<BoolExprPtr> children) {
  return make_nary(BoolExpr::Kind::Or, std::move(children), true);
}

int TseitinEncoder::fresh() {
  ++num_vars_;
  aux_.insert(num_vars_);
  return num_vars_;
}

Literal TseitinEncoder::encode(const BoolExprPtr& e) {
  switch (e->kind) {
    case BoolExpr::Kind::Var:
      return e->var;
    case BoolExpr::Kind::Not:
      return -encode(e->children.front());
    case BoolExpr::Kind::Const: {
      if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
      int g = fresh();
      clauses_.push_back({e->value ? g : -g});
      memo_.emplace(e.get(), g);
      return g;
    }
    case BoolExpr::Kind::And:
    case BoolExpr::Kind::Or:
      break;
  }
  if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;

  std::vector<Literal> lits;
  for (const auto& c : e->children) {
    Literal l = encode(c);
    if (std::find(lits.begin(), lits.end(), l) == lits.end()) lits.push_back(l);
  }
  const bool is_and = e->kind == BoolExpr::Kind::And;
  bool complementary = false;
  for (Literal l : lits)
    if (std::find(lits.begin(), lits.end(), -l) != lits.end()) complementary = true;

  if (lits.size() == 1) {
    memo_.emplace(e.get(), lits.front());
    return lits.front();
  }

  // and: g -> l_i for each i, and (l_1 & ... & l_k) -> g.
  // or is the dual.
  int g = fresh();
  const Literal s = is_and ? 1 : -1;
  for (Literal l : lits) clauses_.push_back({-s * g, s * l});
  if (!complementary) {
    Clause big{s * g};
    for (Literal l : lits) big.push_back(-s * l);
    clauses_.push_back(std::move(big));
  } else if (!is_and) {
    // x | !x | ... is valid: pin g true.
    clauses_.push_back({g});
  } else {
    clauses_.push_back({-g});
  }
  memo_.emplace(e.get(), g);
  return g;
}

void TseitinEncoder::assert_root(const BoolExprPtr& root) {
  if (root->kind == BoolExpr::Kind::Const && root->value) return;
  clauses_.push_back({encode(root)});
}

CnfResult tseitin_cnf(const BoolExprPtr& root, int num_vars) {
  TseitinEncoder enc(num_vars);
  enc.assert_root(root);
  return CnfResult{enc.clauses(), enc.aux_vars(), enc.num_vars()};
}

}  // namespace volcount
