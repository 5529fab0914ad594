#include "tropls/lp.hpp"

#include <algorithm>

namespace tropls {

void LinearProgram::less_equal(std::vector<Rational> row, Rational bound) {
  if (row.size() != vars) throw InputError("constraint width does not match variable count");
  rows.push_back(std::move(row));
  rhs.push_back(std::move(bound));
}

void LinearProgram::equal(std::vector<Rational> row, Rational value) {
  if (row.size() != vars) throw InputError("constraint width does not match variable count");
  eq_rows.push_back(std::move(row));
  eq_rhs.push_back(std::move(value));
}

namespace {

// Minimization tableau in standard form: a y = rhs, y >= 0. Column n holds the right-hand side.
struct Tableau {
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> z;  // reduced costs; z[n] is minus the objective value
  std::vector<std::size_t> basis;
  std::size_t n = 0;

  void pivot(std::size_t r, std::size_t c) {
    Rational p = a[r][c];
    for (auto& x : a[r]) x /= p;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || sgn(a[i][c]) == 0) continue;
      Rational f = a[i][c];
      for (std::size_t j = 0; j <= n; ++j) a[i][j] -= f * a[r][j];
    }
    if (sgn(z[c]) != 0) {
      Rational f = z[c];
      for (std::size_t j = 0; j <= n; ++j) z[j] -= f * a[r][j];
    }
    basis[r] = c;
  }

  // Bland's rule. Returns false on an unbounded direction.
  bool run(std::size_t usable) {
    for (;;) {
      std::size_t enter = usable;
      for (std::size_t j = 0; j < usable; ++j)
        if (sgn(z[j]) < 0) {
          enter = j;
          break;
        }
      if (enter == usable) return true;
      std::size_t leave = a.size();
      Rational best;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i][enter]) <= 0) continue;
        Rational ratio = a[i][n] / a[i][enter];
        if (leave == a.size() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == a.size()) return false;
      pivot(leave, enter);
    }
  }
};

// Any solution of the consistent system m x = v; free coordinates are set to zero.
std::vector<Rational> solve_consistent(std::vector<std::vector<Rational>> m, std::vector<Rational> v,
                                       std::size_t vars) {
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < vars && row < m.size(); ++c) {
    std::size_t p = row;
    while (p < m.size() && sgn(m[p][c]) == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    std::swap(v[p], v[row]);
    Rational d = m[row][c];
    for (auto& x : m[row]) x /= d;
    v[row] /= d;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == row || sgn(m[i][c]) == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = 0; j < vars; ++j) m[i][j] -= f * m[row][j];
      v[i] -= f * v[row];
    }
    pivot_col.push_back(c);
    ++row;
  }
  std::vector<Rational> x(vars, Rational(0));
  for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = v[i];
  return x;
}

struct DualOutcome {
  enum Kind { optimal, dual_infeasible, dual_unbounded } kind;
  std::vector<Rational> x;
};

// Dual of max c.x s.t. rows.x <= rhs: min rhs.y s.t. rows^T y = c, y >= 0.
DualOutcome solve_dual(const LinearProgram& lp, const std::vector<Rational>& c) {
  std::vector<const std::vector<Rational>*> cols;
  std::vector<Rational> cost;
  std::vector<int> sign;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    cols.push_back(&lp.rows[i]);
    cost.push_back(lp.rhs[i]);
    sign.push_back(1);
  }
  for (std::size_t i = 0; i < lp.eq_rows.size(); ++i)
    for (int s : {1, -1}) {
      cols.push_back(&lp.eq_rows[i]);
      cost.push_back(s * lp.eq_rhs[i]);
      sign.push_back(s);
    }
  const std::size_t d = lp.vars, k = cols.size();
  Tableau t;
  t.n = k + d;
  t.a.assign(d, std::vector<Rational>(t.n + 1, Rational(0)));
  t.basis.resize(d);
  for (std::size_t r = 0; r < d; ++r) {
    int flip = sgn(c[r]) < 0 ? -1 : 1;
    for (std::size_t j = 0; j < k; ++j) t.a[r][j] = flip * sign[j] * (*cols[j])[r];
    t.a[r][k + r] = 1;
    t.a[r][t.n] = flip * c[r];
    t.basis[r] = k + r;
  }
  t.z.assign(t.n + 1, Rational(0));
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t j = 0; j < k; ++j) t.z[j] -= t.a[r][j];
    t.z[t.n] -= t.a[r][t.n];
  }
  t.run(k);
  if (sgn(t.z[t.n]) != 0) return {DualOutcome::dual_infeasible, {}};
  // Drive artificials out of the basis; rows where that is impossible are redundant.
  for (std::size_t r = 0; r < t.a.size();) {
    if (t.basis[r] < k) {
      ++r;
      continue;
    }
    std::size_t j = 0;
    while (j < k && sgn(t.a[r][j]) == 0) ++j;
    if (j < k) {
      t.pivot(r, j);
      ++r;
    } else {
      t.a.erase(t.a.begin() + static_cast<long>(r));
      t.basis.erase(t.basis.begin() + static_cast<long>(r));
    }
  }
  t.z.assign(t.n + 1, Rational(0));
  for (std::size_t j = 0; j < k; ++j) t.z[j] = cost[j];
  for (std::size_t r = 0; r < t.a.size(); ++r) {
    const Rational& cb = cost[t.basis[r]];
    if (sgn(cb) == 0) continue;
    for (std::size_t j = 0; j <= t.n; ++j) t.z[j] -= cb * t.a[r][j];
  }
  if (!t.run(k)) return {DualOutcome::dual_unbounded, {}};
  // Basic dual columns are tight primal constraints; their span covers the row space.
  std::vector<std::vector<Rational>> tight;
  std::vector<Rational> values;
  for (std::size_t b : t.basis) {
    std::vector<Rational> row = *cols[b];
    for (auto& x : row) x *= sign[b];
    tight.push_back(std::move(row));
    values.push_back(cost[b]);
  }
  return {DualOutcome::optimal, solve_consistent(std::move(tight), std::move(values), d)};
}

}  // namespace

LpResult maximize(const LinearProgram& lp, const std::vector<Rational>& objective) {
  if (objective.size() != lp.vars) throw InputError("objective width does not match variable count");
  LpResult res;
  if (lp.vars == 0) {
    bool ok = std::all_of(lp.rhs.begin(), lp.rhs.end(), [](const Rational& b) { return sgn(b) >= 0; }) &&
              std::all_of(lp.eq_rhs.begin(), lp.eq_rhs.end(), [](const Rational& b) { return sgn(b) == 0; });
    res.status = ok ? LpStatus::optimal : LpStatus::infeasible;
    res.value = 0;
    return res;
  }
  auto out = solve_dual(lp, objective);
  if (out.kind == DualOutcome::dual_unbounded) {
    res.status = LpStatus::infeasible;
    return res;
  }
  if (out.kind == DualOutcome::dual_infeasible) {
    auto probe = solve_dual(lp, std::vector<Rational>(lp.vars, Rational(0)));
    res.status = probe.kind == DualOutcome::optimal ? LpStatus::unbounded : LpStatus::infeasible;
    if (probe.kind == DualOutcome::optimal) res.x = std::move(probe.x);
    return res;
  }
  res.status = LpStatus::optimal;
  res.x = std::move(out.x);
  res.value = 0;
  for (std::size_t i = 0; i < lp.vars; ++i) res.value += objective[i] * res.x[i];
  return res;
}

bool is_feasible(const LinearProgram& lp) {
  return maximize(lp, std::vector<Rational>(lp.vars, Rational(0))).status != LpStatus::infeasible;
}

std::optional<InteriorPoint> interior_point(const LinearProgram& lp, const std::vector<bool>& strict) {
  if (strict.size() != lp.rows.size()) throw InputError("strict flags do not match constraint count");
  LinearProgram ext(lp.vars + 1);
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    auto row = lp.rows[i];
    row.push_back(strict[i] ? Rational(1) : Rational(0));
    ext.less_equal(std::move(row), lp.rhs[i]);
  }
  for (std::size_t i = 0; i < lp.eq_rows.size(); ++i) {
    auto row = lp.eq_rows[i];
    row.push_back(Rational(0));
    ext.equal(std::move(row), lp.eq_rhs[i]);
  }
  std::vector<Rational> cap(lp.vars + 1, Rational(0));
  cap.back() = 1;
  ext.less_equal(cap, Rational(1));
  auto res = maximize(ext, cap);
  if (res.status != LpStatus::optimal || sgn(res.value) <= 0) return std::nullopt;
  InteriorPoint ip;
  ip.margin = res.x.back();
  res.x.pop_back();
  ip.x = std::move(res.x);
  return ip;
}

std::size_t matrix_rank(std::vector<std::vector<Rational>> rows) {
  if (rows.empty()) return 0;
  std::size_t cols = rows.front().size(), r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && sgn(rows[p][c]) == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (sgn(rows[i][c]) == 0) continue;
      Rational f = rows[i][c] / rows[r][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    ++r;
  }
  return r;
}

}  // namespace tropls
