#include "tropls/chip_firing.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <limits>

namespace tropls {

long max_candidates() {
  if (const char* env = std::getenv("TROPLS_MAX_CANDIDATES")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 1'000'000;
}

LatticeModel::LatticeModel(GraphPtr g, const mpz_class& n) : graph_(std::move(g)), n_(n) {
  points_ = lattice_points(*graph_, n_);
  for (std::size_t i = 0; i < points_.size(); ++i) index_.emplace(points_[i], i);
  adj_.resize(points_.size());
  std::size_t next = graph_->vertex_count();
  for (std::size_t e = 0; e < graph_->edge_count(); ++e) {
    const Edge& edge = graph_->edge(e);
    long steps = to_long(Rational(edge.length * n_));
    std::size_t prev = edge.tail;
    for (long k = 1; k <= steps; ++k) {
      std::size_t cur = k == steps ? edge.head : next++;
      if (cur != prev) {
        adj_[prev].push_back(cur);
        adj_[cur].push_back(prev);
      }
      prev = cur;
    }
  }
}

std::size_t LatticeModel::index_of(const Point& p) const {
  auto it = index_.find(p);
  if (it == index_.end())
    throw InputError("point " + describe(*graph_, p) + " is not on the 1/" + n_.get_str() + " lattice");
  return it->second;
}

std::vector<long> LatticeModel::chips(const Divisor& d) const {
  std::vector<long> out(points_.size(), 0);
  for (const auto& [p, m] : d.chips()) out[index_of(p)] += m;
  return out;
}

Divisor LatticeModel::divisor(const std::vector<long>& chips) const {
  Divisor d;
  for (std::size_t i = 0; i < chips.size(); ++i) d.add(points_[i], chips[i]);
  return d;
}

PLFunction LatticeModel::potential(const std::vector<long>& fires) const {
  long top = fires.empty() ? 0 : *std::max_element(fires.begin(), fires.end());
  std::vector<std::vector<Rational>> offs(graph_->edge_count());
  for (const auto& p : points_)
    if (!p.is_vertex()) offs[p.edge_index()].push_back(p.offset());
  auto value = [&](std::size_t e, const Rational& o) {
    long f = fires[index_of(Point::on_edge(*graph_, e, o))];
    return Rational(mpq_class(top - f) / n_);
  };
  return PLFunction::sample(graph_, offs, value);
}

mpz_class natural_denominator(const MetricGraph& g, const Divisor& d) {
  return lcm_of(default_denominator(g), denominator_of(d));
}

Point base_point(const MetricGraph& g) {
  std::size_t best = 0;
  for (std::size_t v = 1; v < g.vertex_count(); ++v)
    if (g.vertex_name(v) < g.vertex_name(best)) best = v;
  return Point::vertex(best);
}

namespace {

void fire(const LatticeModel& m, std::vector<long>& chips, std::vector<long>& fires, const std::vector<char>& in_set,
          long times) {
  for (std::size_t x = 0; x < chips.size(); ++x) {
    if (!in_set[x]) continue;
    fires[x] += times;
    for (std::size_t y : m.neighbors(x))
      if (!in_set[y]) {
        chips[x] -= times;
        chips[y] += times;
      }
  }
}

// Unburnt set after a fire started at q; empty when everything burns.
std::vector<char> burn(const LatticeModel& m, const std::vector<long>& chips, std::size_t q, bool& all_burnt) {
  std::size_t n = chips.size();
  std::vector<char> burnt(n, 0);
  std::vector<long> hits(n, 0);
  std::deque<std::size_t> queue{q};
  burnt[q] = 1;
  std::size_t count = 1;
  while (!queue.empty()) {
    std::size_t x = queue.front();
    queue.pop_front();
    for (std::size_t y : m.neighbors(x)) {
      if (burnt[y]) continue;
      if (++hits[y] > chips[y]) {
        burnt[y] = 1;
        ++count;
        queue.push_back(y);
      }
    }
  }
  all_burnt = count == n;
  std::vector<char> unburnt(n);
  for (std::size_t i = 0; i < n; ++i) unburnt[i] = !burnt[i];
  return unburnt;
}

}  // namespace

std::vector<long> reduce_chips(const LatticeModel& m, std::vector<long>& chips, std::size_t q) {
  std::size_t n = chips.size();
  std::vector<long> fires(n, 0);
  // Clear debt away from q by firing distance balls around q, outermost level first.
  std::vector<long> dist(n, -1);
  std::deque<std::size_t> queue{q};
  dist[q] = 0;
  long maxd = 0;
  while (!queue.empty()) {
    std::size_t x = queue.front();
    queue.pop_front();
    for (std::size_t y : m.neighbors(x))
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        maxd = std::max(maxd, dist[y]);
        queue.push_back(y);
      }
  }
  for (long k = maxd; k >= 1; --k) {
    long need = 0;
    for (std::size_t x = 0; x < n; ++x)
      if (dist[x] == k) need = std::max(need, -chips[x]);
    if (need == 0) continue;
    std::vector<char> ball(n);
    for (std::size_t x = 0; x < n; ++x) ball[x] = dist[x] < k;
    fire(m, chips, fires, ball, need);
  }
  for (;;) {
    bool all_burnt = false;
    auto unburnt = burn(m, chips, q, all_burnt);
    if (all_burnt) break;
    long t = std::numeric_limits<long>::max();
    for (std::size_t x = 0; x < n; ++x) {
      if (!unburnt[x]) continue;
      long out = 0;
      for (std::size_t y : m.neighbors(x))
        if (!unburnt[y]) ++out;
      if (out > 0) t = std::min(t, chips[x] / out);
    }
    fire(m, chips, fires, unburnt, t);
  }
  return fires;
}

bool is_reduced_chips(const LatticeModel& m, const std::vector<long>& chips, std::size_t q) {
  for (std::size_t x = 0; x < chips.size(); ++x)
    if (x != q && chips[x] < 0) return false;
  bool all_burnt = false;
  burn(m, chips, q, all_burnt);
  return all_burnt;
}

namespace {

mpz_class model_denominator(const MetricGraph& g, const Divisor& d, const Point& q) {
  mpz_class n = lcm_of(natural_denominator(g, d), denominator_of(q));
  return n;
}

}  // namespace

Reduction reduce(GraphPtr g, const Divisor& d, const Point& q) {
  LatticeModel m(g, model_denominator(*g, d, q));
  auto chips = m.chips(d);
  auto fires = reduce_chips(m, chips, m.index_of(q));
  return Reduction{m.divisor(chips), m.potential(fires)};
}

bool is_v_reduced(GraphPtr g, const Divisor& d, const Point& q) {
  LatticeModel m(g, model_denominator(*g, d, q));
  return is_reduced_chips(m, m.chips(d), m.index_of(q));
}

namespace {

class RankSearch {
 public:
  RankSearch(const LatticeModel& m, std::size_t q) : m_(m), q_(q), cap_(max_candidates()) {}

  // True iff every effective degree-k lattice divisor can be subtracted from this q-reduced class.
  bool at_least(const std::vector<long>& reduced, int k) {
    if (reduced[q_] < 0) return false;
    if (k == 0) return true;
    auto key = std::make_pair(k, reduced);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool ok = true;
    for (std::size_t step = 0; step < m_.size() && ok; ++step) {
      std::size_t p = step == 0 ? q_ : (step == q_ ? 0 : step);
      if (++work_ > cap_) throw CapExceeded("rank search exceeded " + std::to_string(cap_) + " candidates");
      auto next = reduced;
      --next[p];
      reduce_chips(m_, next, q_);
      ok = at_least(next, k - 1);
    }
    memo_.emplace(std::move(key), ok);
    return ok;
  }

 private:
  const LatticeModel& m_;
  std::size_t q_;
  long cap_;
  long work_ = 0;
  std::map<std::pair<int, std::vector<long>>, bool> memo_;
};

bool has_short_loop(const MetricGraph& g, const mpz_class& n) {
  for (const auto& e : g.edges())
    if (e.is_loop() && Rational(e.length * n) == 1) return true;
  return false;
}

}  // namespace

RankResult rank(GraphPtr g, const Divisor& d, std::optional<mpz_class> n) {
  mpz_class den = n ? *n : natural_denominator(*g, d);
  if (den <= 0) throw InputError("lattice denominator must be positive");
  if (!is_lattice_compatible(*g, den)) throw InputError("edge lengths are not on the 1/" + den.get_str() + " lattice");
  // The lattice model must be loopless for its vertices to determine rank.
  if (has_short_loop(*g, den)) den *= 2;
  long deg = d.degree();
  if (deg > kMaxDegree) throw CapExceeded("divisor degree " + std::to_string(deg) + " exceeds cap");
  RankResult out{-1, den};
  if (deg < 0) return out;
  LatticeModel m(g, den);
  std::size_t q = m.index_of(base_point(*g));
  auto chips = m.chips(d);
  reduce_chips(m, chips, q);
  RankSearch search(m, q);
  for (long k = 0; k <= deg; ++k) {
    if (!search.at_least(chips, static_cast<int>(k))) return out;
    out.rank = k;
  }
  return out;
}

std::optional<PLFunction> is_equiv(GraphPtr g, const Divisor& d1, const Divisor& d2) {
  if (d1.degree() != d2.degree()) return std::nullopt;
  Point q = base_point(*g);
  LatticeModel m(g, lcm_of(natural_denominator(*g, d1), denominator_of(d2)));
  auto c1 = m.chips(d1), c2 = m.chips(d2);
  auto f1 = reduce_chips(m, c1, m.index_of(q));
  auto f2 = reduce_chips(m, c2, m.index_of(q));
  if (c1 != c2) return std::nullopt;
  // d1 + div(p1) = d2 + div(p2), so d2 = d1 + div(p1 - p2).
  return (m.potential(f1) - m.potential(f2)).normalized();
}

Rational d_infty(GraphPtr g, const Divisor& d1, const Divisor& d2) {
  auto f = is_equiv(g, d1, d2);
  if (!f) throw InputError("divisors are not linearly equivalent");
  return f->max_value() - f->min_value();
}

}  // namespace tropls
