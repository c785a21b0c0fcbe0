// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "volcount/exact.hpp"

namespace volcount {

namespace {

struct IRow {
  std::vector<std::int64_t> a;
  std::int64_t b = 0;
  bool eq = false;

  int support() const {
    return static_cast<int>(std::count_if(a.begin(), a.end(), [](std::int64_t v) { return v != 0; }));
  }
};

struct Bounds {
  std::int64_t lo = std::numeric_limits<std::int64_t>::min();
  std::int64_t hi = std::numeric_limits<std::int64_t>::max();
  bool has_lo = false, has_hi = false;

  void lower(std::int64_t v) {
    if (!has_lo || v > lo) lo = v;
    has_lo = true;
  }
  void upper(std::int64_t v) {
    if (!has_hi || v < hi) hi = v;
    has_hi = true;
  }
  bool empty() const { return has_lo && has_hi && lo > hi; }
};

// Tightens `bounds` with a single-variable row a·x (<= or =) b. Returns false
// when an equality has no integer solution.
bool absorb_row(Bounds& bounds, std::int64_t a, std::int64_t b, bool eq) {
  if (eq) {
    if (b % a != 0) return false;
    bounds.lower(b / a);
    bounds.upper(b / a);
  } else if (a > 0) {
    bounds.upper(floor_div(b, a));
  } else {
    bounds.lower(ceil_div(b, a));
  }
  return true;
}

class Counter {
 public:
  Counter(int n, const Deadline& deadline) : n_(n), deadline_(deadline) {}

  BigInt count(std::vector<IRow> rows, std::vector<IRow> neqs, const std::vector<int>& vars) {
    deadline_.check();
    if (!drop_constant_rows(rows, neqs)) return 0;
    if (vars.empty()) return 1;

    auto parts = components(rows, neqs, vars);
    if (parts.size() > 1) {
      BigInt product = 1;
      for (const auto& part : parts) {
        std::vector<IRow> sub_rows, sub_neqs;
        for (const auto& r : rows)
          if (touches(r, part)) sub_rows.push_back(r);
        for (const auto& r : neqs)
          if (touches(r, part)) sub_neqs.push_back(r);
        product *= count(std::move(sub_rows), std::move(sub_neqs), part);
        if (product == 0) return 0;
      }
      return product;
    }
    if (vars.size() == 1) return count_1d(rows, neqs, vars.front());

    std::vector<Bounds> bounds(n_);
    bool multi = false;
    for (const auto& r : rows) {
      if (r.support() > 1) {
        multi = true;
        continue;
      }
      int j = first_nonzero(r);
      if (!absorb_row(bounds[j], r.a[j], r.b, r.eq)) return 0;
    }
    for (int j : vars)
      if (bounds[j].empty()) return 0;

    if (multi) {
      LinearSystem sys(static_cast<int>(vars.size()));
      for (const auto& r : rows) {
        Eigen::VectorXd coeffs(static_cast<Eigen::Index>(vars.size()));
        for (std::size_t q = 0; q < vars.size(); ++q) coeffs(q) = static_cast<double>(r.a[vars[q]]);
        sys.add_row(coeffs, static_cast<double>(r.b), r.eq);
      }
      for (std::size_t q = 0; q < vars.size(); ++q) {
        auto range = integer_bounds(sys, static_cast<int>(q));
        if (!range) return 0;
        bounds[vars[q]].lower(range->lo);
        bounds[vars[q]].upper(range->hi);
        if (bounds[vars[q]].empty()) return 0;
      }
    }
    for (int j : vars)
      if (!bounds[j].has_lo || !bounds[j].has_hi) throw UnboundedError("cannot count an infinite set");

    // Smallest range first; ties go to the variable in the most coupling rows.
    int best = -1;
    std::int64_t best_size = 0;
    int best_degree = -1;
    for (int j : vars) {
      std::int64_t size = bounds[j].hi - bounds[j].lo;
      int degree = 0;
      for (const auto& r : rows)
        if (r.a[j] != 0 && r.support() > 1) ++degree;
      for (const auto& r : neqs)
        if (r.a[j] != 0 && r.support() > 1) ++degree;
      if (best < 0 || size < best_size || (size == best_size && degree > best_degree)) {
        best = j;
        best_size = size;
        best_degree = degree;
      }
    }

    std::vector<int> rest;
    for (int j : vars)
      if (j != best) rest.push_back(j);
    BigInt total = 0;
    for (std::int64_t v = bounds[best].lo; v <= bounds[best].hi; ++v) {
      total += count(substitute(rows, best, v), substitute(neqs, best, v), rest);
      if (v == std::numeric_limits<std::int64_t>::max()) break;
    }
    return total;
  }

 private:
  static int first_nonzero(const IRow& r) {
    for (std::size_t j = 0; j < r.a.size(); ++j)
      if (r.a[j] != 0) return static_cast<int>(j);
    return -1;
  }

  static bool touches(const IRow& r, const std::vector<int>& vars) {
    return std::any_of(vars.begin(), vars.end(), [&](int j) { return r.a[j] != 0; });
  }

  static std::vector<IRow> substitute(const std::vector<IRow>& rows, int j, std::int64_t v) {
    std::vector<IRow> out = rows;
    for (auto& r : out) {
      if (r.a[j] == 0) continue;
      r.b = checked_add(r.b, -checked_mul(r.a[j], v));
      r.a[j] = 0;
    }
    return out;
  }

  static bool drop_constant_rows(std::vector<IRow>& rows, std::vector<IRow>& neqs) {
    for (std::size_t k = 0; k < rows.size();) {
      if (rows[k].support() > 0) {
        ++k;
        continue;
      }
      if (rows[k].eq ? rows[k].b != 0 : rows[k].b < 0) return false;
      rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(k));
    }
    for (std::size_t k = 0; k < neqs.size();) {
      if (neqs[k].support() > 0) {
        ++k;
        continue;
      }
      if (neqs[k].b == 0) return false;
      neqs.erase(neqs.begin() + static_cast<std::ptrdiff_t>(k));
    }
    return true;
  }

  std::vector<std::vector<int>> components(const std::vector<IRow>& rows, const std::vector<IRow>& neqs,
                                           const std::vector<int>& vars) const {
    std::vector<int> parent(n_);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    auto link = [&](const IRow& r) {
      int first = -1;
      for (int j : vars) {
        if (r.a[j] == 0) continue;
        if (first < 0) {
          first = j;
        } else {
          parent[find(j)] = find(first);
        }
      }
    };
    for (const auto& r : rows) link(r);
    for (const auto& r : neqs) link(r);
    std::vector<std::vector<int>> out;
    std::vector<int> slot(n_, -1);
    for (int j : vars) {
      int root = find(j);
      if (slot[root] < 0) {
        slot[root] = static_cast<int>(out.size());
        out.emplace_back();
      }
      out[slot[root]].push_back(j);
    }
    return out;
  }

  BigInt count_1d(const std::vector<IRow>& rows, const std::vector<IRow>& neqs, int j) const {
    Bounds bounds;
    for (const auto& r : rows)
      if (!absorb_row(bounds, r.a[j], r.b, r.eq)) return 0;
    if (bounds.empty()) return 0;
    if (!bounds.has_lo || !bounds.has_hi) throw UnboundedError("cannot count an infinite set");
    std::set<std::int64_t> excluded;
    for (const auto& r : neqs) {
      if (r.b % r.a[j] != 0) continue;
      std::int64_t v = r.b / r.a[j];
      if (v >= bounds.lo && v <= bounds.hi) excluded.insert(v);
    }
    BigInt size = BigInt(bounds.hi) - BigInt(bounds.lo) + 1;
    return size - static_cast<long long>(excluded.size());
  }

  int n_;
  const Deadline& deadline_;
};

IRow to_irow(const PolyRow& row) {
  IRow out;
  out.a.reserve(row.coeffs.size());
  for (const auto& c : row.coeffs) out.a.push_back(to_int64(c));
  out.b = to_int64(row.kind == RowKind::LeStrict ? BigInt(row.rhs - 1) : row.rhs);
  out.eq = row.kind == RowKind::Eq;
  return out;
}

}  // namespace

BigInt count_integer_points(const Polytope& p, const std::vector<PolyRow>& neqs, const Deadline& deadline) {
  if (p.empty) return 0;
  std::vector<IRow> rows, holes;
  for (const auto& r : p.rows) rows.push_back(to_irow(r));
  for (const auto& r : neqs) {
    IRow h = to_irow(PolyRow{r.coeffs, r.rhs, RowKind::Eq});
    holes.push_back(std::move(h));
  }
  std::vector<int> vars(p.dim);
  std::iota(vars.begin(), vars.end(), 0);
  Counter counter(p.dim, deadline);
  return counter.count(std::move(rows), std::move(holes), vars);
}

}  // namespace volcount
