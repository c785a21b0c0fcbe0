// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <set>
#include <vector>

#include "volcount/model.hpp"

namespace volcount {

struct BoolExpr;
using BoolExprPtr = std::shared_ptr<const BoolExpr>;

/// Propositional DAG over Boolean variables. Theory atoms appear here as the
/// variables they were bound to. Shared subterms share one node.
struct BoolExpr {
  enum class Kind { Const, Var, Not, And, Or };
  Kind kind = Kind::Const;
  bool value = false;
  int var = 0;
  std::vector<BoolExprPtr> children;
};

BoolExprPtr bool_const(bool value);
BoolExprPtr bool_var(int var);
// These fold constants and double negation; they never flatten.
BoolExprPtr bool_not(BoolExprPtr e);
BoolExprPtr bool_and(std::vector<BoolExprPtr> children);
BoolExprPtr bool_or(std::vector<BoolExprPtr> children);

/// Biconditional Tseitin encoding. Auxiliary variables are numbered after
/// every variable the caller has allocated, so in descending-index order an
/// auxiliary is always visited before its inputs.
class TseitinEncoder {
 public:
  explicit TseitinEncoder(int num_vars) : num_vars_(num_vars) {}

  /// Adds clauses forcing `root` true.
  void assert_root(const BoolExprPtr& root);

  /// Literal equivalent to `e`, emitting its defining clauses once.
  Literal encode(const BoolExprPtr& e);

  int num_vars() const { return num_vars_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  const std::set<int>& aux_vars() const { return aux_; }

 private:
  int fresh();

  int num_vars_;
  std::vector<Clause> clauses_;
  std::set<int> aux_;
  std::map<const BoolExpr*, Literal> memo_;
};

struct CnfResult {
  std::vector<Clause> clauses;
  std::set<int> aux_vars;
  int num_vars = 0;
};

/// One-shot encoding of a single root over variables 1..num_vars.
CnfResult tseitin_cnf(const BoolExprPtr& root, int num_vars);

}  // namespace volcount
