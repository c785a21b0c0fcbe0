// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#include <cctype>
#include <charconv>
#include <optional>
#include <fstream>
#include <sstream>
#include <vector>

#include "volcount/errors.hpp"
#include "volcount/frontends.hpp"

namespace volcount {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_int(std::string_view tok, long long& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

std::optional<CmpOp> parse_op(std::string_view tok) {
  if (tok == "<") return CmpOp::Lt;
  if (tok == "<=") return CmpOp::Le;
  if (tok == ">") return CmpOp::Gt;
  if (tok == ">=") return CmpOp::Ge;
  if (tok == "=") return CmpOp::Eq;
  return std::nullopt;
}

}  // namespace

Formula parse_volce(std::string_view text) {
  Formula f;
  bool have_header = false;
  long long declared_clauses = 0, declared_lacs = 0;
  int line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    auto toks = split_ws(line);
    if (toks.empty() || toks[0].front() == 'c') continue;

    if (toks[0] == "p") {
      if (have_header) throw ParseError("duplicate header", line_no);
      if (toks.size() != 8 || toks[1] != "cnf" || toks[2] != "v" || toks[3] != "lc")
        throw ParseError("expected 'p cnf v lc BOOLS CLAUSES NUMVARS LACS'", line_no);
      long long vals[4];
      for (int k = 0; k < 4; ++k)
        if (!parse_int(toks[4 + k], vals[k]) || vals[k] < 0 || vals[k] > (1LL << 30))
          throw ParseError("bad header count '" + std::string(toks[4 + k]) + "'", line_no);
      f.num_bool_vars = static_cast<int>(vals[0]);
      declared_clauses = vals[1];
      f.num_numeric_vars = static_cast<int>(vals[2]);
      declared_lacs = vals[3];
      for (int j = 1; j <= f.num_numeric_vars; ++j) f.var_names.push_back("x" + std::to_string(j));
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError("header must precede constraints and clauses", line_no);

    if (toks[0].front() == 'm') {
      std::size_t next = 1;
      std::string_view index_tok = toks[0].substr(1);
      if (index_tok.empty()) {
        if (toks.size() < 2) throw ParseError("m-line without variable index", line_no);
        index_tok = toks[1];
        next = 2;
      }
      long long idx;
      if (!parse_int(index_tok, idx)) throw ParseError("bad m-line index", line_no);
      if (idx < 1 || idx > f.num_bool_vars)
        throw ParseError("variable " + std::string(index_tok) + " out of range", line_no);
      const std::size_t n = static_cast<std::size_t>(f.num_numeric_vars);
      if (toks.size() != next + n + 2)
        throw ParseError("m-line needs " + std::to_string(n) + " coefficients, an operator and a bound",
                         line_no);
      LinearConstraint c;
      for (std::size_t j = 0; j < n; ++j) {
        auto v = parse_rational(toks[next + j]);
        if (!v) throw ParseError("bad coefficient '" + std::string(toks[next + j]) + "'", line_no);
        c.coeffs.push_back(*v);
      }
      auto op = parse_op(toks[next + n]);
      if (!op) throw ParseError("bad operator '" + std::string(toks[next + n]) + "'", line_no);
      c.op = *op;
      auto rhs = parse_rational(toks[next + n + 1]);
      if (!rhs) throw ParseError("bad bound '" + std::string(toks[next + n + 1]) + "'", line_no);
      c.rhs = *rhs;
      if (!f.atoms.emplace(static_cast<int>(idx), std::move(c)).second)
        throw ParseError("duplicate m-line for variable " + std::to_string(idx), line_no);
      continue;
    }

    Clause clause;
    bool terminated = false;
    for (std::size_t k = 0; k < toks.size(); ++k) {
      long long lit;
      if (!parse_int(toks[k], lit)) throw ParseError("bad literal '" + std::string(toks[k]) + "'", line_no);
      if (lit == 0) {
        if (k + 1 != toks.size()) throw ParseError("text after clause terminator", line_no);
        terminated = true;
        break;
      }
      long long v = lit < 0 ? -lit : lit;
      if (v > f.num_bool_vars) throw ParseError("variable " + std::to_string(v) + " out of range", line_no);
      for (Literal prev : clause)
        if (var_of(prev) == v)
          throw ParseError("variable " + std::to_string(v) + " repeated in a clause", line_no);
      clause.push_back(static_cast<Literal>(lit));
    }
    if (!terminated) throw ParseError("clause is missing its terminating 0", line_no);
    f.clauses.push_back(std::move(clause));
  }

  if (!have_header) throw ParseError("missing 'p cnf v lc' header");
  if (static_cast<long long>(f.clauses.size()) != declared_clauses)
    throw ParseError("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                     std::to_string(f.clauses.size()));
  if (static_cast<long long>(f.atoms.size()) != declared_lacs)
    throw ParseError("header declares " + std::to_string(declared_lacs) +
                     " linear constraints, found " + std::to_string(f.atoms.size()));
  return f;
}

std::string print_volce(const Formula& formula) {
  std::ostringstream out;
  out << "p cnf v lc " << formula.num_bool_vars << ' ' << formula.clauses.size() << ' '
      << formula.num_numeric_vars << ' ' << formula.atoms.size() << '\n';
  for (const auto& [v, c] : formula.atoms) {
    out << 'm' << v;
    for (const auto& a : c.coeffs) out << ' ' << to_string(a);
    out << ' ' << to_string(c.op) << ' ' << to_string(c.rhs) << '\n';
  }
  for (const auto& clause : formula.clauses) {
    for (Literal lit : clause) out << lit << ' ';
    out << "0\n";
  }
  return out.str();
}

Formula parse_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  if (path.extension() == ".smt2") return parse_smt2(text);
  return parse_volce(text);
}

}  // namespace volcount
