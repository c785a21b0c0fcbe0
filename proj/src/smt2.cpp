// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
//
// SMT-LIBv2 subset reader. Terms are type-checked and lowered in one pass:
// Boolean terms become a shared BoolExpr DAG whose leaves are user Booleans
// and theory atoms, numeric terms become exact linear expressions.

#include <cctype>
#include <map>
#include <memory>
#include <variant>

#include "volcount/errors.hpp"
#include "volcount/frontends.hpp"
#include "volcount/tseitin.hpp"

namespace volcount {

namespace {

struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  int line = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip();
    while (pos_ < text_.size()) {
      out.push_back(read());
      skip();
    }
    return out;
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", line_);
    SExpr e;
    e.line = line_;
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      e.is_list = true;
      for (;;) {
        skip();
        if (pos_ >= text_.size()) throw ParseError("unbalanced '('", e.line);
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        e.items.push_back(read());
      }
      return e;
    }
    if (c == ')') throw ParseError("unexpected ')'", line_);
    if (c == '|') {
      std::size_t end = text_.find('|', pos_ + 1);
      if (end == std::string_view::npos) throw ParseError("unterminated quoted symbol", line_);
      for (std::size_t k = pos_; k < end; ++k)
        if (text_[k] == '\n') ++line_;
      e.atom = std::string(text_.substr(pos_ + 1, end - pos_ - 1));
      pos_ = end + 1;
      return e;
    }
    if (c == '"') {
      std::size_t end = pos_ + 1;
      while (end < text_.size() && text_[end] != '"') {
        if (text_[end] == '\n') ++line_;
        ++end;
      }
      if (end >= text_.size()) throw ParseError("unterminated string", line_);
      e.atom = std::string(text_.substr(pos_, end - pos_ + 1));
      pos_ = end + 1;
      return e;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ';')
      ++pos_;
    e.atom = std::string(text_.substr(start, pos_ - start));
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

enum class Sort { Bool, Int, Real };

struct LinExpr {
  std::map<int, Rational> coeffs;
  Rational constant;

  bool is_constant() const { return coeffs.empty(); }
};

LinExpr add(LinExpr a, const LinExpr& b, const Rational& scale = 1) {
  for (const auto& [v, c] : b.coeffs) {
    Rational& slot = a.coeffs[v];
    slot += scale * c;
    if (slot == 0) a.coeffs.erase(v);
  }
  a.constant += scale * b.constant;
  return a;
}

LinExpr scale(LinExpr a, const Rational& k) {
  if (k == 0) return LinExpr{};
  for (auto& [v, c] : a.coeffs) c *= k;
  a.constant *= k;
  return a;
}

struct Term {
  Sort sort = Sort::Bool;
  BoolExprPtr boolean;
  LinExpr linear;
};

struct Declared {
  Sort sort;
  int index;  // numeric variable index or Boolean variable id
};

class Smt2Reader {
 public:
  Formula read(std::string_view text) {
    auto commands = Lexer(text).read_all();
    std::vector<BoolExprPtr> assertions;
    bool seen_assert = false;
    for (const auto& cmd : commands) {
      if (!cmd.is_list || cmd.items.empty() || cmd.items[0].is_list)
        throw ParseError("expected a command", cmd.line);
      const std::string& head = cmd.items[0].atom;
      if (head == "set-logic" || head == "set-info" || head == "set-option" || head == "check-sat" ||
          head == "exit") {
        continue;
      }
      if (head == "declare-fun" || head == "declare-const") {
        if (seen_assert) throw ParseError("declarations must precede all assertions", cmd.line);
        declare(cmd, head == "declare-fun");
        continue;
      }
      if (head == "assert") {
        seen_assert = true;
        if (cmd.items.size() != 2) throw ParseError("assert takes one term", cmd.line);
        Term t = eval(cmd.items[1]);
        if (t.sort != Sort::Bool) throw ParseError("asserted term is not Boolean", cmd.line);
        assertions.push_back(t.boolean);
        continue;
      }
      throw ParseError("unsupported command '" + head + "'", cmd.line);
    }

    Formula f;
    f.num_numeric_vars = static_cast<int>(numeric_names_.size());
    f.var_names = numeric_names_;
    if (has_int_ && has_real_) throw ParseError("mixing Int and Real variables is not supported");
    f.numeric_kind = has_int_ ? NumericKind::Int : (has_real_ ? NumericKind::Real : NumericKind::Unspecified);
    for (const auto& [v, c] : atom_of_var_) f.atoms.emplace(v, to_constraint(c));

    TseitinEncoder enc(next_bool_ - 1);
    for (const auto& a : assertions) enc.assert_root(a);
    f.num_bool_vars = enc.num_vars();
    f.clauses = enc.clauses();
    f.aux_vars = enc.aux_vars();
    return f;
  }

 private:
  void declare(const SExpr& cmd, bool is_fun) {
    std::size_t expect = is_fun ? 4 : 3;
    if (cmd.items.size() != expect || cmd.items[1].is_list)
      throw ParseError("malformed declaration", cmd.line);
    if (is_fun && (!cmd.items[2].is_list || !cmd.items[2].items.empty()))
      throw ParseError("only nullary functions are supported", cmd.line);
    const SExpr& sort_expr = cmd.items[expect - 1];
    if (sort_expr.is_list) throw ParseError("unsupported sort", cmd.line);
    const std::string& name = cmd.items[1].atom;
    if (declared_.count(name)) throw ParseError("'" + name + "' declared twice", cmd.line);
    if (sort_expr.atom == "Bool") {
      declared_[name] = Declared{Sort::Bool, next_bool_++};
    } else if (sort_expr.atom == "Int" || sort_expr.atom == "Real") {
      Sort s = sort_expr.atom == "Int" ? Sort::Int : Sort::Real;
      (s == Sort::Int ? has_int_ : has_real_) = true;
      if (has_int_ && has_real_) throw ParseError("mixing Int and Real variables is not supported", cmd.line);
      declared_[name] = Declared{s, static_cast<int>(numeric_names_.size())};
      numeric_names_.push_back(name);
    } else {
      throw ParseError("unsupported sort '" + sort_expr.atom + "'", cmd.line);
    }
  }

  const Term* lookup_let(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      if (auto f = it->find(name); f != it->end()) return &f->second;
    return nullptr;
  }

  Term eval_atom(const SExpr& e) {
    const std::string& s = e.atom;
    if (const Term* t = lookup_let(s)) return *t;
    if (s == "true" || s == "false") return Term{Sort::Bool, bool_const(s == "true"), {}};
    if (auto d = declared_.find(s); d != declared_.end()) {
      if (d->second.sort == Sort::Bool) return Term{Sort::Bool, bool_var(d->second.index), {}};
      Term t{d->second.sort, nullptr, {}};
      t.linear.coeffs[d->second.index] = 1;
      return t;
    }
    if (!s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '-' || s[0] == '.')) {
      if (auto v = parse_rational(s)) {
        bool decimal = s.find('.') != std::string::npos || s.find('/') != std::string::npos;
        Term t{decimal ? Sort::Real : Sort::Int, nullptr, {}};
        t.linear.constant = *v;
        return t;
      }
    }
    throw ParseError("unknown identifier '" + s + "'", e.line);
  }

  std::vector<Term> eval_args(const SExpr& e) {
    std::vector<Term> out;
    for (std::size_t k = 1; k < e.items.size(); ++k) out.push_back(eval(e.items[k]));
    return out;
  }

  static bool is_numeric(const Term& t) { return t.sort != Sort::Bool; }

  void require_bool(const std::vector<Term>& args, const SExpr& e, const std::string& op) {
    for (const auto& a : args)
      if (a.sort != Sort::Bool) throw ParseError("'" + op + "' expects Boolean arguments", e.line);
  }

  void require_numeric(const std::vector<Term>& args, const SExpr& e, const std::string& op) {
    for (const auto& a : args)
      if (!is_numeric(a)) throw ParseError("'" + op + "' expects numeric arguments", e.line);
  }

  static Sort join(const std::vector<Term>& args) {
    for (const auto& a : args)
      if (a.sort == Sort::Real) return Sort::Real;
    return Sort::Int;
  }

  static std::vector<BoolExprPtr> bools(const std::vector<Term>& args) {
    std::vector<BoolExprPtr> out;
    for (const auto& a : args) out.push_back(a.boolean);
    return out;
  }

  BoolExprPtr iff(const BoolExprPtr& a, const BoolExprPtr& b) {
    return bool_or({bool_and({a, b}), bool_and({bool_not(a), bool_not(b)})});
  }

  /// lhs op rhs as a theory atom, constant-folded when no variable survives.
  BoolExprPtr atom(const LinExpr& lhs, CmpOp op, const LinExpr& rhs) {
    LinExpr diff = add(lhs, rhs, -1);
    LinearConstraint c;
    c.coeffs.assign(numeric_names_.size(), Rational(0));
    for (const auto& [v, k] : diff.coeffs) c.coeffs[v] = k;
    c.op = op;
    c.rhs = -diff.constant;
    CanonicalConstraint canon = normalize_constraint(c);
    if (canon.triviality != Triviality::None) return bool_const(canon.triviality == Triviality::Tautology);
    auto [it, inserted] = var_of_atom_.emplace(canon, 0);
    if (inserted) {
      it->second = next_bool_++;
      atom_of_var_.emplace(it->second, canon);
    }
    return bool_var(it->second);
  }

  Term boolean(BoolExprPtr b) { return Term{Sort::Bool, std::move(b), {}}; }

  Term eval(const SExpr& e) {
    if (!e.is_list) return eval_atom(e);
    if (e.items.empty() || e.items[0].is_list) throw ParseError("malformed term", e.line);
    const std::string& op = e.items[0].atom;

    if (op == "let") return eval_let(e);
    if (op == "!") {
      if (e.items.size() < 2) throw ParseError("malformed annotation", e.line);
      return eval(e.items[1]);
    }

    std::vector<Term> args = eval_args(e);
    auto arity_at_least = [&](std::size_t k) {
      if (args.size() < k) throw ParseError("'" + op + "' needs at least " + std::to_string(k) + " arguments", e.line);
    };

    if (op == "and" || op == "or") {
      require_bool(args, e, op);
      return boolean(op == "and" ? bool_and(bools(args)) : bool_or(bools(args)));
    }
    if (op == "not") {
      if (args.size() != 1) throw ParseError("'not' takes one argument", e.line);
      require_bool(args, e, op);
      return boolean(bool_not(args[0].boolean));
    }
    if (op == "=>") {
      arity_at_least(2);
      require_bool(args, e, op);
      BoolExprPtr acc = args.back().boolean;
      for (std::size_t k = args.size() - 1; k-- > 0;) acc = bool_or({bool_not(args[k].boolean), acc});
      return boolean(acc);
    }
    if (op == "ite") {
      if (args.size() != 3) throw ParseError("'ite' takes three arguments", e.line);
      if (args[0].sort != Sort::Bool) throw ParseError("'ite' condition must be Boolean", e.line);
      if (args[1].sort != Sort::Bool || args[2].sort != Sort::Bool)
        throw ParseError("numeric 'ite' is not supported", e.line);
      const auto& c = args[0].boolean;
      return boolean(bool_or({bool_and({c, args[1].boolean}), bool_and({bool_not(c), args[2].boolean})}));
    }
    if (op == "+" || op == "-") {
      arity_at_least(1);
      require_numeric(args, e, op);
      Term t{join(args), nullptr, args[0].linear};
      if (op == "-" && args.size() == 1) {
        t.linear = scale(t.linear, -1);
        return t;
      }
      for (std::size_t k = 1; k < args.size(); ++k) t.linear = add(t.linear, args[k].linear, op == "+" ? 1 : -1);
      return t;
    }
    if (op == "*") {
      arity_at_least(1);
      require_numeric(args, e, op);
      Term t{join(args), nullptr, args[0].linear};
      for (std::size_t k = 1; k < args.size(); ++k) {
        const LinExpr& rhs = args[k].linear;
        if (t.linear.is_constant()) {
          t.linear = scale(rhs, t.linear.constant);
        } else if (rhs.is_constant()) {
          t.linear = scale(t.linear, rhs.constant);
        } else {
          throw ParseError("nonlinear multiplication", e.line);
        }
      }
      return t;
    }
    if (op == "/") {
      arity_at_least(2);
      require_numeric(args, e, op);
      Term t{Sort::Real, nullptr, args[0].linear};
      for (std::size_t k = 1; k < args.size(); ++k) {
        if (!args[k].linear.is_constant()) throw ParseError("division by a non-constant", e.line);
        if (args[k].linear.constant == 0) throw ParseError("division by zero", e.line);
        t.linear = scale(t.linear, 1 / args[k].linear.constant);
      }
      return t;
    }
    if (op == "<" || op == "<=" || op == ">" || op == ">=") {
      arity_at_least(2);
      require_numeric(args, e, op);
      CmpOp cmp = op == "<" ? CmpOp::Lt : op == "<=" ? CmpOp::Le : op == ">" ? CmpOp::Gt : CmpOp::Ge;
      std::vector<BoolExprPtr> chain;
      for (std::size_t k = 0; k + 1 < args.size(); ++k) chain.push_back(atom(args[k].linear, cmp, args[k + 1].linear));
      return boolean(bool_and(std::move(chain)));
    }
    if (op == "=") {
      arity_at_least(2);
      bool all_bool = true, all_num = true;
      for (const auto& a : args) (a.sort == Sort::Bool ? all_num : all_bool) = false;
      if (!all_bool && !all_num) throw ParseError("'=' mixes Boolean and numeric arguments", e.line);
      std::vector<BoolExprPtr> chain;
      for (std::size_t k = 0; k + 1 < args.size(); ++k)
        chain.push_back(all_num ? atom(args[k].linear, CmpOp::Eq, args[k + 1].linear)
                                : iff(args[k].boolean, args[k + 1].boolean));
      return boolean(bool_and(std::move(chain)));
    }
    if (op == "distinct") {
      arity_at_least(2);
      bool all_bool = true, all_num = true;
      for (const auto& a : args) (a.sort == Sort::Bool ? all_num : all_bool) = false;
      if (!all_bool && !all_num) throw ParseError("'distinct' mixes Boolean and numeric arguments", e.line);
      std::vector<BoolExprPtr> pairs;
      for (std::size_t i = 0; i < args.size(); ++i)
        for (std::size_t j = i + 1; j < args.size(); ++j)
          pairs.push_back(bool_not(all_num ? atom(args[i].linear, CmpOp::Eq, args[j].linear)
                                           : iff(args[i].boolean, args[j].boolean)));
      return boolean(bool_and(std::move(pairs)));
    }
    throw ParseError("unsupported identifier '" + op + "'", e.line);
  }

  Term eval_let(const SExpr& e) {
    if (e.items.size() != 3 || !e.items[1].is_list) throw ParseError("malformed let", e.line);
    std::map<std::string, Term> frame;
    for (const auto& binding : e.items[1].items) {
      if (!binding.is_list || binding.items.size() != 2 || binding.items[0].is_list)
        throw ParseError("malformed let binding", binding.line);
      // Bindings are parallel: evaluate in the enclosing scope.
      frame[binding.items[0].atom] = eval(binding.items[1]);
    }
    scopes_.push_back(std::move(frame));
    Term body = eval(e.items[2]);
    scopes_.pop_back();
    return body;
  }

  std::map<std::string, Declared> declared_;
  std::vector<std::string> numeric_names_;
  bool has_int_ = false;
  bool has_real_ = false;
  int next_bool_ = 1;
  std::vector<std::map<std::string, Term>> scopes_;
  std::map<CanonicalConstraint, int> var_of_atom_;
  std::map<int, CanonicalConstraint> atom_of_var_;
};

}  // namespace

Formula parse_smt2(std::string_view text) { return Smt2Reader().read(text); }

}  // namespace volcount
