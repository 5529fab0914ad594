#include "tropls/linear_series.hpp"

#include "tropls/lp.hpp"
#include "tropls/trop_linalg.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace tropls {

TropSubmodule::TropSubmodule(Divisor base, std::vector<PLFunction> generators, std::size_t generator_cap)
    : base_(std::move(base)), cap_(generator_cap) {
  if (generators.empty()) throw InputError("a submodule needs at least one generator");
  graph_ = generators.front().graph_ptr();
  if (base_.degree() > kMaxDegree)
    throw CapExceeded("base divisor degree " + std::to_string(base_.degree()) + " exceeds " +
                      std::to_string(kMaxDegree));
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (!same_graph(generators[i], generators.front()))
      throw InputError("generator " + std::to_string(i) + " lives on a different graph");
    PLFunction g = generators[i].normalized();
    if (!in_R_of(g, base_)) throw InputError("generator " + std::to_string(i) + " is not in R(D)");
    if (std::find(gens_.begin(), gens_.end(), g) == gens_.end()) gens_.push_back(std::move(g));
  }
  if (gens_.size() > cap_)
    throw CapExceeded(std::to_string(gens_.size()) + " generators exceed the cap of " + std::to_string(cap_));
}

TropSubmodule TropSubmodule::with(const PLFunction& extra) const {
  auto gens = gens_;
  gens.push_back(extra);
  return TropSubmodule(base_, std::move(gens), std::max(cap_, gens_.size() + 1));
}

TropSubmodule TropSubmodule::translated(const PLFunction& phi) const {
  std::vector<PLFunction> gens;
  for (const auto& g : gens_) gens.push_back(g - phi);
  return TropSubmodule(base_ + phi.div(), std::move(gens), cap_);
}

TropSubmodule TropSubmodule::pruned() const {
  std::vector<PLFunction> keep = gens_;
  for (std::size_t i = keep.size(); i-- > 0 && keep.size() > 1;) {
    std::vector<PLFunction> others = keep;
    others.erase(others.begin() + static_cast<long>(i));
    if (membership(keep[i], TropSubmodule(base_, others, cap_))) keep = std::move(others);
  }
  return TropSubmodule(base_, std::move(keep), cap_);
}

std::optional<std::vector<Rational>> membership(const PLFunction& phi, const TropSubmodule& s) {
  if (!same_graph(phi, s.generators().front())) throw InputError("function lives on a different graph");
  std::vector<Rational> coeffs;
  for (const auto& g : s.generators()) coeffs.push_back((phi - g).max_value());
  if (trop_min(s.generators(), coeffs) == phi) return coeffs;
  return std::nullopt;
}

PLFunction combination(const TropSubmodule& s, const std::vector<std::optional<Rational>>& coeffs) {
  if (coeffs.size() != s.size()) throw InputError("coefficient count does not match generator count");
  TropCombination c{s.generators(), {}};
  for (const auto& a : coeffs) c.coefficients.push_back(a ? ExtRational(*a) : ExtRational::infinity());
  return trop_min(c);
}

std::size_t r_ind(const TropSubmodule& s, std::optional<std::size_t> upper_bound) {
  TropMatrix a = evaluation_matrix(s.generators(), sample_points(s.generators()));
  if (upper_bound) return max_independent_rows(a, *upper_bound).rows.size();
  return trop_rank(a);
}

mpz_class lattice_denominator(const TropSubmodule& s) {
  const MetricGraph& g = *s.graph();
  mpz_class n = natural_denominator(g, s.base());
  for (const auto& f : s.generators())
    for (std::size_t e = 0; e < g.edge_count(); ++e)
      for (const auto& k : f.knots(e)) n = lcm_of(n, k.offset.get_den());
  return n;
}

namespace {

// Minimal sets A of generators with -sum_z min_{i in A} s_z(g_i) >= need. Good sets are
// closed upward, and a minimal one never needs more members than there are tangents.
std::vector<std::vector<std::size_t>> minimal_good_sets(const std::vector<std::vector<long>>& slopes, long need) {
  const std::size_t m = slopes.size(), val = m ? slopes.front().size() : 0;
  auto good = [&](const std::vector<std::size_t>& set) {
    long ord = 0;
    for (std::size_t z = 0; z < val; ++z) {
      long lo = slopes[set.front()][z];
      for (std::size_t i : set) lo = std::min(lo, slopes[i][z]);
      ord -= lo;
    }
    return ord >= need;
  };
  std::vector<std::vector<std::size_t>> found;
  auto has_found_subset = [&](const std::vector<std::size_t>& set) {
    return std::any_of(found.begin(), found.end(), [&](const auto& f) {
      return std::includes(set.begin(), set.end(), f.begin(), f.end());
    });
  };
  for (std::size_t k = 1; k <= std::max<std::size_t>(val, 1) && k <= m; ++k) {
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
      if (!has_found_subset(idx) && good(idx)) found.push_back(idx);
      std::size_t pos = k;
      while (pos > 0 && idx[pos - 1] == m - k + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return found;
}

// Difference constraints a_i - a_k <= w over generator coefficients, kept shortest-path closed.
// Weights are integers after scaling all values by a common denominator.
class DifferenceSystem {
 public:
  static constexpr long kNone = std::numeric_limits<long>::max();

  explicit DifferenceSystem(std::size_t m) : m_(m), d_(m * m, kNone) {
    for (std::size_t i = 0; i < m; ++i) d_[i * m + i] = 0;
  }

  // Returns false on a negative cycle.
  bool add(std::size_t from, std::size_t to, long w) {
    if (at(to, from) != kNone && at(to, from) + w < 0) return false;
    if (at(from, to) != kNone && at(from, to) <= w) return true;
    for (std::size_t x = 0; x < m_; ++x) {
      if (at(x, from) == kNone) continue;
      long head = at(x, from) + w;
      for (std::size_t y = 0; y < m_; ++y) {
        if (at(to, y) == kNone) continue;
        long cand = head + at(to, y);
        long& cur = d_[x * m_ + y];
        if (cand < cur) cur = cand;
      }
    }
    return true;
  }

  // A feasible assignment on the given variables.
  std::vector<long> potentials(const std::vector<std::size_t>& vars) const {
    std::vector<long> a(m_, 0);
    for (std::size_t i : vars)
      for (std::size_t x : vars)
        if (at(x, i) != kNone && at(x, i) < a[i]) a[i] = at(x, i);
    return a;
  }

 private:
  long at(std::size_t x, std::size_t y) const { return d_[x * m_ + y]; }
  std::size_t m_;
  std::vector<long> d_;
};

}  // namespace

std::optional<PLFunction> residual_witness(const TropSubmodule& s, const Divisor& dprime) {
  const MetricGraph& g = *s.graph();
  if (!dprime.is_effective()) throw InputError("residual divisor must be effective");
  if (dprime.degree() > s.base().degree()) return std::nullopt;
  auto pts = dprime.support();
  if (pts.empty()) return s.generators().front();

  // Generators agreeing on values (up to a constant) and slopes at every point of D' are interchangeable.
  std::vector<std::size_t> reps;
  {
    std::set<std::vector<Rational>> seen;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto& f = s.generators()[i];
      std::vector<Rational> sig;
      Rational v0 = f.eval(pts.front());
      for (const auto& p : pts) {
        sig.push_back(f.eval(p) - v0);
        for (const auto& z : tangents(g, p)) sig.push_back(Rational(f.outgoing_slope(z)));
      }
      if (seen.insert(sig).second) reps.push_back(i);
    }
  }
  const std::size_t m = reps.size();

  struct Demand {
    Point p;
    std::vector<Rational> value;
    std::vector<long> scaled;  // value times the common denominator
    std::vector<std::vector<std::size_t>> options;
  };
  std::vector<Demand> demands;
  for (const auto& p : pts) {
    long need = dprime.at(p) - s.base().at(p);
    auto ts = tangents(g, p);
    std::vector<std::vector<long>> slopes(m);
    Demand dm{p, {}, {}};
    for (std::size_t r = 0; r < m; ++r) {
      const auto& f = s.generators()[reps[r]];
      for (const auto& z : ts) slopes[r].push_back(f.outgoing_slope(z));
      dm.value.push_back(f.eval(p));
    }
    dm.options = minimal_good_sets(slopes, need);
    if (dm.options.empty()) return std::nullopt;
    bool trivial = std::all_of(dm.options.begin(), dm.options.end(), [](const auto& o) { return o.size() == 1; }) &&
                   dm.options.size() == m;
    if (!trivial) demands.push_back(std::move(dm));
  }
  std::sort(demands.begin(), demands.end(),
            [](const Demand& a, const Demand& b) { return a.options.size() < b.options.size(); });
  mpz_class scale = 1;
  for (const auto& dm : demands)
    for (const auto& v : dm.value) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), v.get_den_mpz_t());
  for (auto& dm : demands)
    for (const auto& v : dm.value) dm.scaled.push_back(to_long(v * scale));

  long budget = max_candidates();
  std::vector<const std::vector<std::size_t>*> chosen(demands.size());
  std::optional<std::vector<long>> solution;
  std::vector<std::size_t> used_vars;

  // Generators of the chosen sets must attain the minimum over every used generator at their point.
  std::function<bool(std::size_t, const DifferenceSystem&, std::vector<bool>)> search =
      [&](std::size_t level, const DifferenceSystem& sys, std::vector<bool> used) -> bool {
    if (--budget < 0) throw CapExceeded("residual search exceeded the candidate cap");
    if (level == demands.size()) {
      for (std::size_t i = 0; i < m; ++i)
        if (used[i]) used_vars.push_back(i);
      solution = sys.potentials(used_vars);
      return true;
    }
    const Demand& dm = demands[level];
    for (const auto& opt : dm.options) {
      DifferenceSystem next = sys;
      std::vector<bool> next_used = used;
      for (std::size_t i : opt) next_used[i] = true;
      bool ok = true;
      auto constrain = [&](const Demand& at, std::size_t i, std::size_t k) {
        if (i != k && ok) ok = next.add(k, i, at.scaled[k] - at.scaled[i]);
      };
      for (std::size_t l = 0; l <= level && ok; ++l) {
        const Demand& at = demands[l];
        const auto& set = l == level ? opt : *chosen[l];
        for (std::size_t i : set)
          for (std::size_t k = 0; k < m; ++k)
            if (next_used[k] && (l == level || !used[k])) constrain(at, i, k);
      }
      if (!ok) continue;
      chosen[level] = &opt;
      if (search(level + 1, next, std::move(next_used))) return true;
    }
    return false;
  };

  std::vector<bool> used(m, false);
  if (demands.empty()) return s.generators().front();
  if (!search(0, DifferenceSystem(m), used)) return std::nullopt;

  std::vector<PLFunction> fns;
  std::vector<Rational> coeffs;
  for (std::size_t i : used_vars) {
    fns.push_back(s.generators()[reps[i]]);
    coeffs.push_back(Rational((*solution)[i]) / scale);
  }
  PLFunction phi = trop_min(fns, coeffs);
  if (!in_R_of(phi, s.base() - dprime)) throw std::logic_error("residual witness failed verification");
  return phi;
}

namespace {

long rank_at(const TropSubmodule& s, const mpz_class& n) {
  const MetricGraph& g = *s.graph();
  auto pts = lattice_points(g, n);
  const long deg = s.base().degree();
  long rank = 0;
  for (long r = 1; r <= deg; ++r) {
    // Multisets of size r from pts.
    mpz_class count = 1;
    for (long j = 0; j < r; ++j) count = count * (static_cast<long>(pts.size()) + j) / (j + 1);
    if (count > max_candidates())
      throw CapExceeded("degree-" + std::to_string(r) + " candidate count " + count.get_str() + " exceeds the cap");
    std::vector<std::size_t> idx(static_cast<std::size_t>(r), 0);
    // Divisors of witnesses found so far; one of them often already dominates the next candidate.
    std::vector<Divisor> covered;
    for (;;) {
      Divisor dp;
      for (std::size_t i : idx) dp.add(pts[i], 1);
      auto hit = std::find_if(covered.begin(), covered.end(), [&](const Divisor& e) {
        return std::all_of(dp.chips().begin(), dp.chips().end(), [&](const auto& c) { return e.at(c.first) >= c.second; });
      });
      if (hit != covered.end()) {
        std::rotate(covered.begin(), hit, hit + 1);
      } else {
        auto phi = residual_witness(s, dp);
        if (!phi) return rank;
        covered.insert(covered.begin(), s.base() + phi->div());
      }
      std::size_t pos = idx.size();
      while (pos > 0 && idx[pos - 1] == pts.size() - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t j = pos; j < idx.size(); ++j) idx[j] = idx[pos - 1];
    }
    rank = r;
  }
  return rank;
}

}  // namespace

BNRank r_bn(const TropSubmodule& s, std::optional<mpz_class> n, bool check_double) {
  mpz_class natural = lattice_denominator(s);
  BNRank out;
  out.denominator = n ? *n : natural;
  if (out.denominator <= 0 || out.denominator % natural != 0)
    throw InputError("denominator " + out.denominator.get_str() + " is not a multiple of " + natural.get_str());
  out.rank = rank_at(s, out.denominator);
  if (check_double) out.rank_at_double = rank_at(s, 2 * out.denominator);
  return out;
}

TlsReport is_tls(const TropSubmodule& s, std::optional<mpz_class> n, std::optional<std::size_t> r_ind_bound) {
  TlsReport rep;
  rep.r_ind = r_ind(s, r_ind_bound);
  rep.r_bn = r_bn(s, n);
  rep.is_tls = static_cast<long>(rep.r_ind) == rep.r_bn.rank + 1 && rep.r_bn.stable();
  return rep;
}

std::string divisor_type(const MetricGraph& g, const Divisor& d) {
  std::ostringstream out;
  std::vector<std::vector<long>> on_edge(g.edge_count());
  for (const auto& [p, k] : d.chips()) {
    if (p.is_vertex())
      out << g.vertex_name(p.vertex_index()) << ':' << k << ' ';
    else
      on_edge[p.edge_index()].push_back(k);
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (on_edge[e].empty()) continue;
    out << g.edge(e).id << ":[";
    for (std::size_t i = 0; i < on_edge[e].size(); ++i) out << (i ? "," : "") << on_edge[e][i];
    out << "] ";
  }
  std::string s = out.str();
  if (!s.empty()) s.pop_back();
  return s;
}

namespace {

using Coeffs = std::vector<std::optional<Rational>>;
using Type = std::vector<std::vector<int>>;

// coef . a + c over the full generator coefficient vector.
struct Affine {
  std::vector<Rational> coef;
  Rational c;

  Rational at(const Coeffs& a) const {
    Rational v = c;
    for (std::size_t i = 0; i < coef.size(); ++i)
      if (sgn(coef[i]) != 0) v += coef[i] * *a[i];
    return v;
  }
  Affine operator-(const Affine& o) const {
    Affine r{coef, c - o.c};
    for (std::size_t i = 0; i < coef.size(); ++i) r.coef[i] -= o.coef[i];
    return r;
  }
  bool is_constant() const {
    return std::all_of(coef.begin(), coef.end(), [](const Rational& q) { return sgn(q) == 0; });
  }
  // Positive rescaling with the first nonzero coefficient of absolute value one.
  Affine normalized() const {
    for (const auto& q : coef)
      if (sgn(q) != 0) {
        Rational s = abs(q);
        Affine r{coef, c / s};
        for (auto& x : r.coef) x /= s;
        return r;
      }
    return *this;
  }
  bool operator<(const Affine& o) const {
    if (coef != o.coef) return coef < o.coef;
    return c < o.c;
  }
  bool operator==(const Affine& o) const { return coef == o.coef && c == o.c; }
};

Affine constant_affine(std::size_t m, const Rational& c) { return Affine{std::vector<Rational>(m, Rational(0)), c}; }

void dedupe(std::vector<Affine>& v) {
  for (auto& a : v) a = a.normalized();
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Common refinement of the generators and the base divisor, with each generator linear on every segment.
struct Frame {
  struct Segment {
    std::size_t edge;
    Rational lo, len;
    std::vector<Rational> value;  // at lo
    std::vector<long> slope;
  };
  const TropSubmodule* module;
  std::size_t m = 0;
  std::vector<Segment> segs;

  explicit Frame(const TropSubmodule& s) : module(&s), m(s.size()) {
    const MetricGraph& g = *s.graph();
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      std::set<Rational> offs{Rational(0), g.edge(e).length};
      for (const auto& f : s.generators())
        for (const auto& k : f.knots(e)) offs.insert(k.offset);
      for (const auto& [p, k] : s.base().chips())
        for (const auto& o : offsets_on_edge(g, p, e)) offs.insert(o);
      std::vector<Rational> sorted(offs.begin(), offs.end());
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        Segment seg{e, sorted[i], sorted[i + 1] - sorted[i], {}, {}};
        for (const auto& f : s.generators()) {
          Rational a = f.eval_on_edge(e, sorted[i]), b = f.eval_on_edge(e, sorted[i + 1]);
          seg.value.push_back(a);
          seg.slope.push_back(to_long((b - a) / seg.len));
        }
        segs.push_back(std::move(seg));
      }
    }
  }

  // Winner sequence per segment, or nothing when a is on a wall.
  std::optional<Type> type_at(const Coeffs& a) const {
    Type t;
    for (const auto& seg : segs) {
      std::vector<int> winners;
      std::optional<std::size_t> w;
      bool tie = false;
      for (std::size_t i = 0; i < m; ++i) {
        if (!a[i]) continue;
        if (!w) {
          w = i;
          continue;
        }
        int c = cmp(seg.value[i] + *a[i], seg.value[*w] + *a[*w]);
        if (c < 0) {
          w = i;
          tie = false;
        } else if (c == 0) {
          tie = true;
        }
      }
      if (!w || tie) return std::nullopt;
      Rational t0 = 0;
      winners.push_back(static_cast<int>(*w));
      for (;;) {
        std::optional<std::size_t> next;
        Rational best;
        bool best_tie = false;
        Rational cw = seg.value[*w] + *a[*w];
        for (std::size_t j = 0; j < m; ++j) {
          if (!a[j] || seg.slope[j] >= seg.slope[*w]) continue;
          Rational tj = (seg.value[j] + *a[j] - cw) / (seg.slope[*w] - seg.slope[j]);
          if (tj <= t0) return std::nullopt;
          if (!next || tj < best) {
            next = j;
            best = tj;
            best_tie = false;
          } else if (tj == best) {
            best_tie = true;
          }
        }
        if (!next || best > seg.len) break;
        if (best == seg.len || best_tie) return std::nullopt;
        w = next;
        t0 = best;
        winners.push_back(static_cast<int>(*w));
      }
      t.push_back(std::move(winners));
    }
    return t;
  }

  // Offset, measured from the segment start, where winner i hands over to j.
  Affine crossing(const Segment& seg, std::size_t i, std::size_t j) const {
    Rational d = seg.slope[i] - seg.slope[j];
    Affine t = constant_affine(m, (seg.value[j] - seg.value[i]) / d);
    t.coef[j] += 1 / d;
    t.coef[i] -= 1 / d;
    return t;
  }
};

struct MovingChip {
  std::size_t seg;
  Affine position;  // offset from the segment start
  long mult;
};

struct RegionData {
  Type type;
  std::vector<std::size_t> active;
  std::vector<Affine> inner;                        // all > 0
  std::map<std::size_t, std::vector<Affine>> pieces;  // inactive k: a_k - f(a) > 0 for each piece
  std::vector<MovingChip> moving;
  std::vector<std::size_t> neighbors;  // filled by the region walk
};

RegionData describe_region(const Frame& f, const Type& type) {
  RegionData r;
  r.type = type;
  std::set<std::size_t> act;
  for (const auto& w : type)
    for (int i : w) act.insert(static_cast<std::size_t>(i));
  r.active.assign(act.begin(), act.end());
  for (std::size_t s = 0; s < f.segs.size(); ++s) {
    const auto& seg = f.segs[s];
    const auto& w = type[s];
    std::vector<Affine> cross;
    for (std::size_t q = 0; q + 1 < w.size(); ++q) {
      cross.push_back(f.crossing(seg, w[q], w[q + 1]));
      r.moving.push_back({s, cross.back(), seg.slope[w[q]] - seg.slope[w[q + 1]]});
    }
    if (!cross.empty()) {
      r.inner.push_back(cross.front());
      for (std::size_t q = 0; q + 1 < cross.size(); ++q) r.inner.push_back(cross[q + 1] - cross[q]);
      r.inner.push_back(constant_affine(f.m, seg.len) - cross.back());
    }
    for (std::size_t k = 0; k < f.m; ++k) {
      if (std::find(w.begin(), w.end(), static_cast<int>(k)) != w.end()) continue;
      // The gap to the concave envelope is convex; its minimum sits where the gap stops decreasing.
      std::size_t q = 0;
      while (q < w.size() && seg.slope[k] < seg.slope[w[q]]) ++q;
      Affine at;
      std::size_t winner;
      if (q == 0) {
        at = constant_affine(f.m, 0);
        winner = w.front();
      } else if (q == w.size()) {
        at = constant_affine(f.m, seg.len);
        winner = w.back();
      } else {
        at = cross[q - 1];
        winner = w[q];
      }
      long ds = seg.slope[k] - seg.slope[winner];
      Affine gap{std::vector<Rational>(f.m, Rational(0)), seg.value[k] - seg.value[winner] + ds * at.c};
      for (std::size_t i = 0; i < f.m; ++i) gap.coef[i] = ds * at.coef[i];
      gap.coef[k] += 1;
      gap.coef[winner] -= 1;
      if (act.count(k))
        r.inner.push_back(gap);
      else
        r.pieces[k].push_back(gap);
    }
  }
  std::vector<Affine> inner;
  for (auto& a : r.inner) {
    if (a.is_constant()) {
      if (sgn(a.c) <= 0) throw std::logic_error("empty region");
      continue;
    }
    inner.push_back(a);
  }
  r.inner = std::move(inner);
  dedupe(r.inner);
  for (auto& [k, v] : r.pieces) {
    // Pieces keep coefficient one on a_k, so they are not rescaled.
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return r;
}

// LP over the active coefficients.
struct ActiveLp {
  std::vector<std::size_t> act;
  std::map<std::size_t, std::size_t> var;
  LinearProgram lp;
  std::vector<bool> strict;

  explicit ActiveLp(const std::vector<std::size_t>& active) : act(active), lp(active.size()) {
    for (std::size_t j = 0; j < act.size(); ++j) var[act[j]] = j;
  }
  std::vector<Rational> row(const Affine& a) const {
    std::vector<Rational> r(act.size(), Rational(0));
    for (std::size_t i = 0; i < a.coef.size(); ++i) {
      if (sgn(a.coef[i]) == 0) continue;
      auto it = var.find(i);
      if (it == var.end()) throw std::logic_error("constraint touches an inactive coefficient");
      r[it->second] = a.coef[i];
    }
    return r;
  }
  // a > 0 (or >= 0).
  void positive(const Affine& a, bool is_strict) {
    auto r = row(a);
    for (auto& x : r) x = -x;
    lp.less_equal(std::move(r), a.c);
    strict.push_back(is_strict);
  }
  void zero(const Affine& a) { lp.equal(row(a), -a.c); }
  void fix(std::size_t i, const Rational& v) {
    std::vector<Rational> r(act.size(), Rational(0));
    r[var.at(i)] = 1;
    lp.equal(std::move(r), v);
  }
  void at_least(std::size_t i, const Rational& v) {
    std::vector<Rational> r(act.size(), Rational(0));
    r[var.at(i)] = -1;
    lp.less_equal(std::move(r), -v);
    strict.push_back(false);
  }
  Coeffs coeffs(const std::vector<Rational>& y, std::size_t m) const {
    Coeffs a(m);
    for (std::size_t j = 0; j < act.size(); ++j) a[act[j]] = y[j];
    return a;
  }
  std::optional<InteriorPoint> interior() const { return interior_point(lp, strict); }
};

std::optional<InteriorPoint> region_interior(const RegionData& r) {
  ActiveLp lp(r.active);
  for (const auto& a : r.inner) lp.positive(a, true);
  lp.fix(r.active.front(), Rational(0));
  return lp.interior();
}

int region_dim(const RegionData& r) {
  std::vector<std::vector<Rational>> rows;
  ActiveLp lp(r.active);
  for (const auto& mc : r.moving) rows.push_back(lp.row(mc.position));
  return static_cast<int>(matrix_rank(std::move(rows)));
}

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Walks across one wall, shrinking the step until it lands in an open region.
std::optional<Type> step_across(const Frame& f, const Type& from, const std::function<Coeffs(const Rational&)>& point,
                                Rational eps) {
  for (int attempt = 0; attempt < 24; ++attempt, eps /= 2) {
    auto t = f.type_at(point(eps));
    if (t && *t != from) return t;
  }
  return std::nullopt;
}

std::vector<Type> neighbor_types(const Frame& f, const RegionData& r) {
  std::vector<Type> out;
  const std::size_t n = r.active.size();
  ActiveLp base(r.active);
  std::vector<std::vector<Rational>> rows;
  for (const auto& a : r.inner) rows.push_back(base.row(a));

  // Walls between active coefficients. Besides the centre of each wall, two off-centre points are
  // probed so that a wall shared with several neighbours is crossed in more than one place.
  for (std::size_t l = 0; l < r.inner.size(); ++l) {
    ActiveLp lp(r.active);
    for (std::size_t k = 0; k < r.inner.size(); ++k)
      if (k == l)
        lp.zero(r.inner[k]);
      else
        lp.positive(r.inner[k], true);
    lp.fix(r.active.front(), Rational(0));
    auto ip = lp.interior();
    if (!ip) continue;
    std::vector<std::pair<std::vector<Rational>, Rational>> probes{{ip->x, ip->margin}};
    LinearProgram shrunk = lp.lp;
    for (std::size_t k = 0; k < shrunk.rows.size(); ++k)
      if (lp.strict[k]) shrunk.rhs[k] -= ip->margin / 2;
    std::vector<Rational> obj(n);
    for (std::size_t j = 0; j < n; ++j) obj[j] = static_cast<long>((j * 7 + 3) % 5) - 2;
    for (int side : {1, -1}) {
      for (auto& o : obj) o *= side;
      auto res = maximize(shrunk, obj);
      if (res.status != LpStatus::optimal) continue;
      // Midway between the centre and the far point every other wall keeps slack margin / 4.
      std::vector<Rational> y(n);
      for (std::size_t j = 0; j < n; ++j) y[j] = (ip->x[j] + res.x[j]) / 2;
      probes.emplace_back(std::move(y), ip->margin / 4);
    }
    Rational spread = 1;
    for (const auto& row : rows) spread = std::max(spread, Rational(abs(dot(row, rows[l])) * 2));
    for (const auto& [y, margin] : probes) {
      auto t = step_across(
          f, r.type,
          [&](const Rational& e) {
            std::vector<Rational> z = y;
            for (std::size_t j = 0; j < n; ++j) z[j] -= e * rows[l][j];
            return lp.coeffs(z, f.m);
          },
          margin / spread);
      if (t) out.push_back(*t);
    }
  }

  // An inactive generator dipping below the envelope where one of its pieces dominates.
  for (const auto& [k, pieces] : r.pieces) {
    for (std::size_t p = 0; p < pieces.size(); ++p) {
      ActiveLp lp(r.active);
      for (const auto& a : r.inner) lp.positive(a, true);
      for (std::size_t q = 0; q < pieces.size(); ++q)
        if (q != p) lp.positive(pieces[q] - pieces[p], true);
      lp.fix(r.active.front(), Rational(0));
      auto ip = lp.interior();
      if (!ip) continue;
      Coeffs a = lp.coeffs(ip->x, f.m);
      // pieces[p] = a_k + rest, so a_k = -rest(y) puts k exactly on the envelope.
      a[k] = Rational(0);
      Rational touch = -pieces[p].at(a);
      auto t = step_across(
          f, r.type,
          [&](const Rational& e) {
            Coeffs b = a;
            b[k] = touch - e;
            return b;
          },
          ip->margin / 2);
      if (t) out.push_back(*t);
    }
  }
  return out;
}

std::vector<RegionData> all_regions(const Frame& f) {
  std::map<Type, std::size_t> index;
  std::vector<RegionData> regions;
  std::deque<Type> queue;
  auto visit = [&](const Type& t) {
    if (index.count(t)) return;
    index[t] = regions.size();
    regions.push_back(describe_region(f, t));
    queue.push_back(t);
  };
  for (std::size_t i = 0; i < f.m; ++i) {
    Coeffs a(f.m);
    a[i] = Rational(0);
    visit(*f.type_at(a));
  }
  while (!queue.empty()) {
    Type t = queue.front();
    queue.pop_front();
    std::size_t i = index.at(t);
    for (const auto& nt : neighbor_types(f, regions[i])) {
      visit(nt);
      std::size_t j = index.at(nt);
      for (auto [x, y] : {std::pair{i, j}, std::pair{j, i}}) {
        auto& nb = regions[x].neighbors;
        if (std::find(nb.begin(), nb.end(), y) == nb.end()) nb.push_back(y);
      }
    }
  }
  return regions;
}

Divisor representative_of(const TropSubmodule& s, const Coeffs& a) { return s.base() + combination(s, a).div(); }

// Points and open pieces of the refinement of phi0's frame where each generator is tight.
struct Fiber {
  std::vector<Rational> lambda;
  std::vector<std::uint32_t> covers;  // minimal generator sets whose tight loci cover the graph
};

Fiber fiber_of(const TropSubmodule& s, const Frame& f, const PLFunction& phi0) {
  auto lambda = membership(phi0, s);
  if (!lambda) throw InputError("function is not in the submodule");
  const std::size_t m = s.size();
  std::vector<std::vector<bool>> tight(m);
  auto record = [&](std::size_t e, const Rational& o) {
    Rational target = phi0.eval_on_edge(e, o);
    for (std::size_t i = 0; i < m; ++i) tight[i].push_back(s.generators()[i].eval_on_edge(e, o) + (*lambda)[i] == target);
  };
  for (const auto& seg : f.segs) {
    std::set<Rational> offs{seg.lo, seg.lo + seg.len};
    for (const auto& k : phi0.knots(seg.edge))
      if (k.offset > seg.lo && k.offset < seg.lo + seg.len) offs.insert(k.offset);
    std::vector<Rational> o(offs.begin(), offs.end());
    for (std::size_t i = 0; i + 1 < o.size(); ++i) {
      record(seg.edge, o[i]);
      record(seg.edge, (o[i] + o[i + 1]) / 2);  // linear pieces: tight at the midpoint iff on the whole piece
    }
    record(seg.edge, o.back());
  }
  const std::size_t elems = tight.front().size();
  Fiber out{*lambda, {}};
  // Subsets of z precede z numerically, so a cover found here is minimal.
  for (std::uint32_t z = 1; z < (1u << m); ++z) {
    bool minimal = true;
    for (auto c : out.covers)
      if ((z & c) == c) minimal = false;
    if (!minimal) continue;
    bool cover = true;
    for (std::size_t x = 0; x < elems && cover; ++x) {
      bool hit = false;
      for (std::size_t i = 0; i < m && !hit; ++i) hit = (z >> i & 1u) && tight[i][x];
      cover = hit;
    }
    if (cover) out.covers.push_back(z);
  }
  return out;
}

std::optional<Coeffs> incident(const RegionData& r, const Fiber& fib) {
  std::uint32_t act = 0;
  for (std::size_t i : r.active) act |= 1u << i;
  for (auto z : fib.covers) {
    if ((z & act) != z) continue;
    ActiveLp lp(r.active);
    for (const auto& a : r.inner) lp.positive(a, false);
    for (std::size_t i : r.active) {
      if (z >> i & 1u)
        lp.fix(i, fib.lambda[i]);
      else
        lp.at_least(i, fib.lambda[i]);
    }
    auto res = maximize(lp.lp, std::vector<Rational>(r.active.size(), Rational(0)));
    if (res.status != LpStatus::infeasible) return lp.coeffs(res.x, fib.lambda.size());
  }
  return std::nullopt;
}

void check_cell_cap(const TropSubmodule& s) {
  if (s.size() > 16)
    throw CapExceeded("cell enumeration supports at most 16 generators, got " + std::to_string(s.size()));
}

Region to_region(const TropSubmodule& s, const RegionData& rd) {
  auto ip = region_interior(rd);
  if (!ip) throw std::logic_error("region without interior point");
  Region r;
  r.winners = rd.type;
  r.active = rd.active;
  r.interior = ActiveLp(rd.active).coeffs(ip->x, s.size());
  r.dim = region_dim(rd);
  r.representative = representative_of(s, r.interior);
  r.type = divisor_type(*s.graph(), r.representative);
  r.neighbors = rd.neighbors;
  return r;
}

}  // namespace

int CellComplex::dimension() const {
  int d = -1;
  for (const auto& c : cells) d = std::max(d, c.dim);
  return d;
}

std::vector<int> CellComplex::maximal_dimensions() const {
  std::set<int> ds;
  for (const auto& c : cells)
    if (c.maximal) ds.insert(c.dim);
  return {ds.begin(), ds.end()};
}

CellComplex cells(const TropSubmodule& s) {
  check_cell_cap(s);
  Frame f(s);
  auto data = all_regions(f);
  CellComplex cx;
  for (const auto& rd : data) cx.regions.push_back(to_region(s, rd));

  std::map<std::string, std::size_t> by_type;
  for (std::size_t i = 0; i < cx.regions.size(); ++i) {
    const auto& r = cx.regions[i];
    auto [it, fresh] = by_type.try_emplace(r.type, cx.cells.size());
    if (fresh) cx.cells.push_back(Cell{r.type, -1, false, r.representative, {}});
    Cell& c = cx.cells[it->second];
    c.regions.push_back(i);
    if (r.dim > c.dim) {
      c.dim = r.dim;
      c.representative = r.representative;
    }
  }
  // A cell is maximal when nothing of higher dimension passes through its representative.
  for (auto& c : cx.cells) {
    std::size_t top = c.regions.front();
    for (std::size_t i : c.regions)
      if (cx.regions[i].dim == c.dim) top = i;
    PLFunction phi = combination(s, cx.regions[top].interior);
    Fiber fib = fiber_of(s, f, phi);
    int local = 0;
    for (const auto& rd : data)
      if (incident(rd, fib)) local = std::max(local, region_dim(rd));
    c.maximal = local == c.dim;
  }
  return cx;
}

std::vector<Region> incident_regions(const TropSubmodule& s, const PLFunction& phi0) {
  check_cell_cap(s);
  Frame f(s);
  Fiber fib = fiber_of(s, f, phi0);
  std::vector<Region> out;
  for (const auto& rd : all_regions(f))
    if (auto touch = incident(rd, fib)) {
      out.push_back(to_region(s, rd));
      out.back().touch = std::move(*touch);
    }
  return out;
}

int local_dimension(const TropSubmodule& s, const PLFunction& phi0) {
  int d = -1;
  for (const auto& r : incident_regions(s, phi0)) d = std::max(d, r.dim);
  return d;
}

std::optional<PLFunction> member_with_divisor(const TropSubmodule& s, const Divisor& d0) {
  auto phi = is_equiv(s.graph(), s.base(), d0);
  if (!phi || !membership(*phi, s)) return std::nullopt;
  return phi;
}

NondegeneracyReport nondegenerate(const Divisor& d0, const TropSubmodule& s) {
  auto phi = member_with_divisor(s, d0);
  if (!phi) throw InputError("divisor is not in |Σ|");
  const MetricGraph& g = *s.graph();
  NondegeneracyReport rep;
  rep.support_size = d0.support().size();
  rep.valence_one = valence_one_degree(g, d0);
  auto inc = incident_regions(s, *phi);
  rep.incident = inc.size();
  for (const auto& r : inc) {
    const Divisor& e = r.representative;
    if (e.support().size() > rep.support_size || valence_one_degree(g, e) < rep.valence_one)
      rep.offending.push_back(e);
  }
  rep.nondegenerate = rep.offending.empty();
  return rep;
}

int ResidualConstraint::dimension() const {
  int d = -1;
  for (const auto& p : pieces) d = std::max(d, p.dim);
  return d;
}

ResidualConstraint residual(const TropSubmodule& s, const CellComplex& complex, const Divisor& dprime) {
  if (!dprime.is_effective()) throw InputError("residual divisor must be effective");
  ResidualConstraint out{dprime, {}};
  const MetricGraph& g = *s.graph();
  Frame f(s);
  for (std::size_t ri = 0; ri < complex.regions.size(); ++ri) {
    const Region& reg = complex.regions[ri];
    RegionData rd = describe_region(f, reg.winners);
    // Static chips are those of the representative away from the moving crossings.
    Divisor moving_at_rep;
    for (const auto& mc : rd.moving) {
      const auto& seg = f.segs[mc.seg];
      moving_at_rep.add(Point::on_edge(g, seg.edge, seg.lo + mc.position.at(reg.interior)), mc.mult);
    }
    Divisor fixed_part = reg.representative - moving_at_rep;

    std::vector<std::vector<std::optional<std::size_t>>> choices;  // nullopt: static chips suffice
    bool impossible = false;
    auto pts = dprime.support();
    for (const auto& p : pts) {
      long need = dprime.at(p) - fixed_part.at(p);
      std::vector<std::optional<std::size_t>> opts;
      if (need <= 0) {
        opts.push_back(std::nullopt);
      } else if (!p.is_vertex()) {
        for (std::size_t q = 0; q < rd.moving.size(); ++q) {
          const auto& seg = f.segs[rd.moving[q].seg];
          if (seg.edge == p.edge_index() && p.offset() > seg.lo && p.offset() < seg.lo + seg.len &&
              rd.moving[q].mult >= need)
            opts.push_back(q);
        }
      }
      if (opts.empty()) impossible = true;
      choices.push_back(std::move(opts));
    }
    if (impossible) continue;

    std::vector<std::size_t> pick(pts.size(), 0);
    for (;;) {
      std::vector<std::pair<std::size_t, Rational>> fixed;
      std::set<std::size_t> used;
      bool clash = false;
      for (std::size_t k = 0; k < pts.size(); ++k) {
        auto q = choices[k][pick[k]];
        if (!q) continue;
        if (!used.insert(*q).second) clash = true;
        fixed.emplace_back(*q, pts[k].offset() - f.segs[rd.moving[*q].seg].lo);
      }
      if (!clash) {
        ActiveLp lp(rd.active);
        for (const auto& a : rd.inner) lp.positive(a, true);
        lp.fix(rd.active.front(), Rational(0));
        std::vector<std::vector<Rational>> js;
        for (const auto& [q, off] : fixed) {
          Affine eq = rd.moving[q].position;
          eq.c -= off;
          lp.zero(eq);
          js.push_back(lp.row(rd.moving[q].position));
        }
        if (auto ip = lp.interior()) {
          ResidualPiece piece;
          piece.region = ri;
          piece.fixed = fixed;
          piece.dim = reg.dim - static_cast<int>(matrix_rank(js));
          piece.sample = representative_of(s, lp.coeffs(ip->x, s.size()));
          out.pieces.push_back(std::move(piece));
        }
      }
      std::size_t k = 0;
      while (k < pick.size() && ++pick[k] == choices[k].size()) pick[k++] = 0;
      if (k == pick.size()) break;
    }
  }
  return out;
}

std::vector<long> slopes_along(const TropSubmodule& s, const Tangent& z) {
  std::set<long> out;
  for (const auto& f : s.generators()) out.insert(f.outgoing_slope(z));
  return {out.begin(), out.end()};
}

std::vector<Tangent> refinement_tangents(const TropSubmodule& s) {
  const MetricGraph& g = *s.graph();
  auto offs = order_refinement(s.generators());
  std::set<Point> pts;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) pts.insert(Point::vertex(v));
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    for (const auto& o : offs[e]) pts.insert(Point::on_edge(g, e, o));
  std::vector<Tangent> out;
  for (const auto& p : pts)
    for (const auto& z : tangents(g, p)) out.push_back(z);
  return out;
}

TropSubmodule restrict_to(const TropSubmodule& s, const std::vector<std::string>& edge_ids) {
  const MetricGraph& g = *s.graph();
  if (edge_ids.empty()) throw InputError("restriction needs at least one edge");
  std::vector<std::size_t> kept;
  for (const auto& id : edge_ids) {
    auto e = g.find_edge(id);
    if (!e) throw InputError("unknown edge '" + id + "'");
    if (std::find(kept.begin(), kept.end(), *e) == kept.end()) kept.push_back(*e);
  }
  std::sort(kept.begin(), kept.end());

  std::vector<std::size_t> verts;
  for (std::size_t e : kept)
    for (std::size_t v : {g.edge(e).tail, g.edge(e).head})
      if (std::find(verts.begin(), verts.end(), v) == verts.end()) verts.push_back(v);
  std::sort(verts.begin(), verts.end());

  // Connectivity of the kept edges.
  std::vector<std::size_t> parent(g.vertex_count());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> root = [&](std::size_t v) {
    return parent[v] == v ? v : parent[v] = root(parent[v]);
  };
  for (std::size_t e : kept) parent[root(g.edge(e).tail)] = root(g.edge(e).head);
  for (std::size_t v : verts)
    if (root(v) != root(verts.front())) throw InputError("restriction subgraph is disconnected");

  std::vector<std::string> names;
  for (std::size_t v : verts) names.push_back(g.vertex_name(v));
  std::vector<EdgeSpec> specs;
  for (std::size_t e : kept)
    specs.push_back({g.edge(e).id, g.vertex_name(g.edge(e).tail), g.vertex_name(g.edge(e).head), g.edge(e).length});
  GraphPtr sub = share(MetricGraph(names, specs));

  auto map_point = [&](const Point& p) -> std::optional<Point> {
    if (p.is_vertex()) {
      auto v = sub->find_vertex(g.vertex_name(p.vertex_index()));
      if (!v) return std::nullopt;
      return Point::vertex(*v);
    }
    auto it = std::find(kept.begin(), kept.end(), p.edge_index());
    if (it == kept.end()) return std::nullopt;
    return Point::on_edge(*sub, static_cast<std::size_t>(it - kept.begin()), p.offset());
  };

  Divisor base;
  for (const auto& [p, k] : s.base().chips())
    if (auto q = map_point(p)) base.add(*q, k);

  std::vector<PLFunction> gens;
  for (const auto& f : s.generators()) {
    std::vector<std::vector<Knot>> ks;
    for (std::size_t e : kept) ks.push_back(f.knots(e));
    gens.emplace_back(sub, std::move(ks));
  }
  // Boundary vertices lose incident edges; add the fewest chips keeping every generator in R(base).
  Divisor extra;
  for (std::size_t v = 0; v < sub->vertex_count(); ++v) {
    Point p = Point::vertex(v);
    long add = 0;
    for (const auto& f : gens) add = std::max(add, -(base.at(p) + f.ord(p)));
    if (add > 0) extra.add(p, add);
  }
  return TropSubmodule(base + extra, std::move(gens), s.generator_cap());
}

}  // namespace tropls
