#include "tropls/trop_linalg.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

namespace tropls {

TropMatrix::TropMatrix(const std::vector<std::vector<ExtRational>>& rows)
    : rows_(rows.size()), cols_(rows.empty() ? 0 : rows[0].size()) {
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InputError("ragged tropical matrix");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

TropMatrix TropMatrix::submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const {
  TropMatrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = (*this)(rows[i], cols[j]);
  return out;
}

TropMatrix TropMatrix::transposed() const {
  TropMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

TropDeterminant trop_det(const TropMatrix& a) {
  if (a.rows() != a.cols()) throw InputError("tropical determinant of a non-square matrix");
  std::size_t n = a.rows();
  if (n == 0) return {ExtRational(0L), true};
  if (n > 20) throw CapExceeded("tropical determinant limited to 20x20");
  // best[mask]: minimum over assignments of the first popcount(mask) rows to the columns in mask,
  // with the number of minimizers capped at 2.
  std::vector<ExtRational> best(std::size_t{1} << n);
  std::vector<int> count(std::size_t{1} << n, 0);
  best[0] = ExtRational(0L);
  count[0] = 1;
  for (std::size_t mask = 0; mask < best.size(); ++mask) {
    if (count[mask] == 0) continue;
    std::size_t row = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (row == n) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask >> j & 1) continue;
      if (a(row, j).is_infinite()) continue;
      ExtRational v = best[mask] + a(row, j);
      std::size_t next = mask | (std::size_t{1} << j);
      if (count[next] == 0 || v < best[next]) {
        best[next] = v;
        count[next] = count[mask];
      } else if (v == best[next]) {
        count[next] = std::min(2, count[next] + count[mask]);
      }
    }
  }
  std::size_t full = best.size() - 1;
  if (count[full] == 0) return {ExtRational::infinity(), false};
  return {best[full], count[full] == 1};
}

namespace {

constexpr long kInf = std::numeric_limits<long>::max();

// Lexicographic path weight: (sum of bounds, -number of edges).
struct Weight {
  long w = kInf;
  long c = 0;
  bool finite() const { return w != kInf; }
  friend bool operator<(const Weight& a, const Weight& b) {
    if (a.w != b.w) return a.w < b.w;
    return a.c < b.c;
  }
  friend Weight operator+(const Weight& a, const Weight& b) {
    if (!a.finite() || !b.finite()) return Weight{};
    return Weight{a.w + b.w, a.c + b.c};
  }
};

using WeightMatrix = std::vector<std::vector<Weight>>;

// Closes the matrix under shortest paths; false on a nonpositive cycle.
bool close(WeightMatrix& d) {
  std::size_t n = d.size();
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t i = 0; i < n; ++i) {
      if (!d[i][m].finite()) continue;
      for (std::size_t j = 0; j < n; ++j) {
        Weight via = d[i][m] + d[m][j];
        if (via < d[i][j]) d[i][j] = via;
      }
    }
  for (std::size_t i = 0; i < n; ++i)
    if (d[i][i] < Weight{0, 0}) return false;
  return true;
}

long to_ll(const mpz_class& z) {
  if (!z.fits_slong_p()) throw CapExceeded("matrix entries too large for the independence search");
  return z.get_si();
}

struct Candidate {
  std::size_t column;
  std::vector<long> bound;  // bound[k]: a_i - a_k must stay below it; kInf when unconstrained
};

class RowSearch {
 public:
  RowSearch(const TropMatrix& a, const std::vector<std::size_t>& rows) : a_(a), rows_(rows) {
    mpz_class den = 1;
    for (std::size_t r : rows_)
      for (std::size_t j = 0; j < a.cols(); ++j)
        if (a(r, j).is_finite()) den = lcm_of(den, a(r, j).value().get_den());
    scale_ = den;
    std::size_t n = rows_.size();
    cands_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Candidate> all;
      for (std::size_t j = 0; j < a.cols(); ++j) {
        const ExtRational& mine = a(rows_[i], j);
        if (mine.is_infinite()) continue;
        Candidate c{j, std::vector<long>(n, kInf)};
        for (std::size_t k = 0; k < n; ++k) {
          if (k == i || a(rows_[k], j).is_infinite()) continue;
          Rational diff = (a(rows_[k], j).value() - mine.value()) * scale_;
          c.bound[k] = to_ll(diff.get_num());
        }
        all.push_back(std::move(c));
      }
      cands_[i] = pareto(std::move(all));
    }
  }

  std::optional<RowCertificate> run() {
    std::size_t n = rows_.size();
    for (const auto& c : cands_)
      if (c.empty()) return std::nullopt;
    order_.resize(n);
    for (std::size_t i = 0; i < n; ++i) order_[i] = i;
    std::sort(order_.begin(), order_.end(), [&](std::size_t x, std::size_t y) { return cands_[x].size() < cands_[y].size(); });
    WeightMatrix d(n, std::vector<Weight>(n));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = Weight{0, 0};
    choice_.assign(n, 0);
    if (!search(0, d)) return std::nullopt;
    return certificate();
  }

 private:
  static bool dominates(const Candidate& x, const Candidate& y) {
    for (std::size_t k = 0; k < x.bound.size(); ++k)
      if (x.bound[k] < y.bound[k]) return false;
    return true;
  }

  static std::vector<Candidate> pareto(std::vector<Candidate> all) {
    std::vector<Candidate> kept;
    for (auto& c : all) {
      bool dominated = false;
      for (const auto& k : kept)
        if (dominates(k, c)) {
          dominated = true;
          break;
        }
      if (dominated) continue;
      kept.erase(std::remove_if(kept.begin(), kept.end(), [&](const Candidate& k) { return dominates(c, k); }),
                 kept.end());
      kept.push_back(std::move(c));
    }
    return kept;
  }

  bool search(std::size_t depth, const WeightMatrix& d) {
    if (depth == order_.size()) {
      solved_ = d;
      return true;
    }
    std::size_t i = order_[depth];
    for (std::size_t t = 0; t < cands_[i].size(); ++t) {
      const auto& c = cands_[i][t];
      WeightMatrix next = d;
      // Edge k -> i bounds a_i - a_k strictly from above.
      for (std::size_t k = 0; k < c.bound.size(); ++k) {
        if (c.bound[k] == kInf) continue;
        Weight e{c.bound[k], -1};
        if (e < next[k][i]) next[k][i] = e;
      }
      if (!close(next)) continue;
      choice_[i] = t;
      if (search(depth + 1, next)) return true;
    }
    return false;
  }

  RowCertificate certificate() const {
    std::size_t n = rows_.size();
    RowCertificate out;
    out.rows = rows_;
    // Potentials from a virtual source joined to every node with weight zero.
    std::vector<Weight> pot(n, Weight{0, 0});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (solved_[k][i] < pot[i]) pot[i] = solved_[k][i];
    Rational eps = make_rational(1, 2 * static_cast<long>(n) + 2);
    for (std::size_t i = 0; i < n; ++i) {
      Rational x = Rational(pot[i].w) + eps * Rational(pot[i].c);
      out.shifts.push_back(Rational(x / scale_));
      out.witnesses.push_back(cands_[i][choice_[i]].column);
    }
    // The construction guarantees this; keep the check cheap and explicit.
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t j = out.witnesses[i];
      Rational mine = a_(rows_[i], j).value() + out.shifts[i];
      for (std::size_t k = 0; k < n; ++k)
        if (k != i && a_(rows_[k], j).is_finite() && !(mine < a_(rows_[k], j).value() + out.shifts[k]))
          throw std::logic_error("independence certificate failed verification");
    }
    return out;
  }

  const TropMatrix& a_;
  std::vector<std::size_t> rows_;
  Rational scale_;
  std::vector<std::vector<Candidate>> cands_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> choice_;
  WeightMatrix solved_;
};

}  // namespace

std::optional<RowCertificate> independence_of_rows(const TropMatrix& a, const std::vector<std::size_t>& rows) {
  if (rows.empty()) return RowCertificate{};
  return RowSearch(a, rows).run();
}

RowCertificate max_independent_rows(const TropMatrix& a, std::optional<std::size_t> stop_at) {
  RowCertificate best;
  std::set<std::vector<std::size_t>> level;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto c = independence_of_rows(a, {r});
    if (!c) continue;
    level.insert({r});
    if (best.rows.empty()) best = *c;
  }
  while (!level.empty() && (!stop_at || best.rows.size() < *stop_at)) {
    std::set<std::vector<std::size_t>> next;
    for (const auto& s : level) {
      for (std::size_t r = s.back() + 1; r < a.rows(); ++r) {
        std::vector<std::size_t> cand = s;
        cand.push_back(r);
        bool hereditary = true;
        for (std::size_t drop = 0; drop + 1 < cand.size() && hereditary; ++drop) {
          std::vector<std::size_t> sub;
          for (std::size_t t = 0; t < cand.size(); ++t)
            if (t != drop) sub.push_back(cand[t]);
          hereditary = level.count(sub) > 0;
        }
        if (!hereditary) continue;
        auto c = independence_of_rows(a, cand);
        if (!c) continue;
        if (c->rows.size() > best.rows.size()) best = *c;
        next.insert(std::move(cand));
        if (stop_at && best.rows.size() >= *stop_at) return best;
      }
    }
    level = std::move(next);
  }
  return best;
}

// Rank is symmetric in rows and columns; search over the shorter side.
std::size_t trop_rank(const TropMatrix& a) {
  if (a.rows() > a.cols()) return max_independent_rows(a.transposed()).rows.size();
  return max_independent_rows(a).rows.size();
}

TropMatrix evaluation_matrix(const std::vector<PLFunction>& fns, const std::vector<Point>& pts) {
  TropMatrix m(fns.size(), pts.size());
  for (std::size_t i = 0; i < fns.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) m(i, j) = ExtRational(fns[i].eval(pts[j]));
  return m;
}

std::vector<Point> sample_points(const std::vector<PLFunction>& fns) {
  if (fns.empty()) return {};
  const MetricGraph& g = fns.front().graph();
  auto offs = order_refinement(fns);
  std::set<Point> pts;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) pts.insert(Point::vertex(v));
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& o = offs[e];
    for (std::size_t t = 0; t + 1 < o.size(); ++t) {
      pts.insert(Point::on_edge(g, e, o[t]));
      Rational len = o[t + 1] - o[t];
      std::set<Rational> slopes;
      for (const auto& f : fns) slopes.insert(Rational((f.eval_on_edge(e, o[t + 1]) - f.eval_on_edge(e, o[t])) / len));
      long m = static_cast<long>(slopes.size());
      for (long j = 1; j <= m; ++j) pts.insert(Point::on_edge(g, e, Rational(o[t] + len * make_rational(j, m + 1))));
    }
  }
  return {pts.begin(), pts.end()};
}

std::optional<IndependenceCertificate> independence_certificate(const std::vector<PLFunction>& fns) {
  if (fns.empty()) throw InputError("empty function family");
  auto pts = sample_points(fns);
  TropMatrix a = evaluation_matrix(fns, pts);
  std::vector<std::size_t> all(fns.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  auto c = independence_of_rows(a, all);
  if (!c) return std::nullopt;
  IndependenceCertificate out;
  out.coefficients = c->shifts;
  for (std::size_t j : c->witnesses) out.witnesses.push_back(pts[j]);
  return out;
}

bool verify_certificate(const std::vector<PLFunction>& fns, const IndependenceCertificate& c) {
  if (c.coefficients.size() != fns.size() || c.witnesses.size() != fns.size()) return false;
  for (std::size_t i = 0; i < fns.size(); ++i) {
    Rational mine = fns[i].eval(c.witnesses[i]) + c.coefficients[i];
    for (std::size_t k = 0; k < fns.size(); ++k)
      if (k != i && !(mine < fns[k].eval(c.witnesses[i]) + c.coefficients[k])) return false;
  }
  return true;
}

}  // namespace tropls
