#include "tropls/pl.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

namespace tropls {

GraphPtr share(MetricGraph g) { return std::make_shared<const MetricGraph>(std::move(g)); }

bool ClosedSet::contains(const MetricGraph& g, const Point& p) const {
  if (std::find(points.begin(), points.end(), p) != points.end()) return true;
  for (const auto& s : segments)
    for (const auto& off : offsets_on_edge(g, p, s.edge))
      if (s.lo <= off && off <= s.hi) return true;
  return false;
}

namespace {

Rational slope_of(const Knot& a, const Knot& b) { return Rational((b.value - a.value) / (b.offset - a.offset)); }

long segment_slope(const std::vector<Knot>& ks, std::size_t i) { return to_long(slope_of(ks[i], ks[i + 1])); }

std::vector<Knot> simplify_knots(std::vector<Knot> ks) {
  std::vector<Knot> out;
  for (auto& k : ks) {
    if (!out.empty() && out.back().offset == k.offset) continue;
    if (out.size() >= 2 && slope_of(out[out.size() - 2], out.back()) == slope_of(out.back(), k)) out.pop_back();
    out.push_back(std::move(k));
  }
  return out;
}

std::vector<Rational> merged_offsets(const std::vector<Knot>& a, const std::vector<Knot>& b) {
  std::vector<Rational> out;
  for (const auto& k : a) out.push_back(k.offset);
  for (const auto& k : b) out.push_back(k.offset);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

PLFunction::PLFunction(GraphPtr g, std::vector<std::vector<Knot>> knots) : graph_(std::move(g)) {
  if (!graph_) throw std::invalid_argument("PLFunction without graph");
  if (knots.size() != graph_->edge_count()) throw InputError("knot lists do not match the edge count");
  std::vector<std::optional<Rational>> at_vertex(graph_->vertex_count());
  for (std::size_t e = 0; e < knots.size(); ++e) {
    auto& ks = knots[e];
    const Edge& edge = graph_->edge(e);
    std::sort(ks.begin(), ks.end(), [](const Knot& a, const Knot& b) { return a.offset < b.offset; });
    if (ks.size() < 2 || ks.front().offset != 0 || ks.back().offset != edge.length)
      throw InputError("edge \"" + edge.id + "\" needs values at both endpoints");
    for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
      if (ks[i].offset == ks[i + 1].offset) throw InputError("repeated knot on edge \"" + edge.id + "\"");
      if (!is_integer(slope_of(ks[i], ks[i + 1])))
        throw InputError("non-integer slope on edge \"" + edge.id + "\"");
    }
    auto check = [&](std::size_t v, const Rational& val) {
      if (!at_vertex[v]) at_vertex[v] = val;
      else if (*at_vertex[v] != val)
        throw InputError("discontinuous at vertex \"" + graph_->vertex_name(v) + "\"");
    };
    check(edge.tail, ks.front().value);
    check(edge.head, ks.back().value);
    knots_.push_back(simplify_knots(std::move(ks)));
  }
}

PLFunction PLFunction::constant(GraphPtr g, const Rational& c) {
  std::vector<std::vector<Knot>> ks;
  for (const auto& e : g->edges()) ks.push_back({Knot{0, c}, Knot{e.length, c}});
  return PLFunction(std::move(g), std::move(ks));
}

PLFunction PLFunction::sample(GraphPtr g, const std::vector<std::vector<Rational>>& offsets,
                              const std::function<Rational(std::size_t, const Rational&)>& value) {
  std::vector<std::vector<Knot>> ks(g->edge_count());
  for (std::size_t e = 0; e < g->edge_count(); ++e) {
    std::set<Rational> offs(offsets.at(e).begin(), offsets.at(e).end());
    offs.insert(Rational(0));
    offs.insert(g->edge(e).length);
    for (const auto& o : offs) ks[e].push_back(Knot{o, value(e, o)});
  }
  return PLFunction(std::move(g), std::move(ks));
}

PLFunction PLFunction::from_refinement(GraphPtr g, const Refinement& r, const std::vector<Rational>& vertex_values) {
  if (vertex_values.size() != r.graph.vertex_count()) throw InputError("value count does not match refinement");
  std::vector<std::vector<Knot>> ks(g->edge_count());
  for (std::size_t i = 0; i < r.spans.size(); ++i) {
    const auto& sp = r.spans[i];
    const Edge& re = r.graph.edge(i);
    ks[sp.edge].push_back(Knot{sp.lo, vertex_values[re.tail]});
    ks[sp.edge].push_back(Knot{sp.hi, vertex_values[re.head]});
  }
  for (auto& k : ks) {
    std::stable_sort(k.begin(), k.end(), [](const Knot& a, const Knot& b) { return a.offset < b.offset; });
    k.erase(std::unique(k.begin(), k.end(),
                        [](const Knot& a, const Knot& b) { return a.offset == b.offset && a.value == b.value; }),
            k.end());
  }
  return PLFunction(std::move(g), std::move(ks));
}

Rational PLFunction::eval_on_edge(std::size_t e, const Rational& offset) const {
  const auto& ks = knots_.at(e);
  auto it = std::lower_bound(ks.begin(), ks.end(), offset,
                             [](const Knot& k, const Rational& o) { return k.offset < o; });
  if (it == ks.end()) throw std::out_of_range("offset beyond edge");
  if (it->offset == offset) return it->value;
  if (it == ks.begin()) throw std::out_of_range("offset before edge");
  const Knot& a = *(it - 1);
  return a.value + slope_of(a, *it) * (offset - a.offset);
}

Rational PLFunction::eval(const Point& p) const {
  if (p.is_vertex()) {
    const auto& hs = graph_->half_edges(p.vertex_index());
    const HalfEdge& h = hs.front();
    const auto& ks = knots_[h.edge];
    return h.from_tail ? ks.front().value : ks.back().value;
  }
  return eval_on_edge(p.edge_index(), p.offset());
}

long PLFunction::outgoing_slope(const Tangent& z) const {
  const auto& ks = knots_.at(z.edge);
  Rational start;
  if (z.base.is_vertex())
    start = z.forward ? Rational(0) : graph_->edge(z.edge).length;
  else
    start = z.base.offset();
  // Index of the segment leaving start in the chosen direction.
  std::size_t i = 0;
  if (z.forward) {
    while (i + 2 < ks.size() && ks[i + 1].offset <= start) ++i;
    return segment_slope(ks, i);
  }
  i = ks.size() - 2;
  while (i > 0 && ks[i].offset >= start) --i;
  return -segment_slope(ks, i);
}

long PLFunction::ord(const Point& p) const {
  long s = 0;
  for (const auto& z : tangents(*graph_, p)) s += outgoing_slope(z);
  return -s;
}

std::vector<Point> PLFunction::breakpoints() const {
  std::vector<Point> out;
  for (std::size_t v = 0; v < graph_->vertex_count(); ++v) out.push_back(Point::vertex(v));
  for (std::size_t e = 0; e < knots_.size(); ++e)
    for (std::size_t i = 1; i + 1 < knots_[e].size(); ++i) out.push_back(Point::on_edge(*graph_, e, knots_[e][i].offset));
  return out;
}

Divisor PLFunction::div() const {
  Divisor d;
  for (const auto& p : breakpoints()) d.add(p, ord(p));
  return d;
}

bool PLFunction::is_constant() const {
  for (const auto& ks : knots_)
    for (const auto& k : ks)
      if (k.value != knots_[0][0].value) return false;
  return true;
}

Rational PLFunction::min_value() const {
  Rational m = knots_[0][0].value;
  for (const auto& ks : knots_)
    for (const auto& k : ks) m = std::min(m, k.value);
  return m;
}

Rational PLFunction::max_value() const {
  Rational m = knots_[0][0].value;
  for (const auto& ks : knots_)
    for (const auto& k : ks) m = std::max(m, k.value);
  return m;
}

Rational PLFunction::max_on(const ClosedSegment& s) const {
  Rational m = std::max(eval_on_edge(s.edge, s.lo), eval_on_edge(s.edge, s.hi));
  for (const auto& k : knots_.at(s.edge))
    if (s.lo < k.offset && k.offset < s.hi) m = std::max(m, k.value);
  return m;
}

ClosedSet PLFunction::minimizer() const {
  Rational m = min_value();
  ClosedSet out;
  for (std::size_t v = 0; v < graph_->vertex_count(); ++v)
    if (eval(Point::vertex(v)) == m) out.points.push_back(Point::vertex(v));
  for (std::size_t e = 0; e < knots_.size(); ++e) {
    const auto& ks = knots_[e];
    for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
      if (ks[i].value == m && ks[i + 1].value == m) {
        if (!out.segments.empty() && out.segments.back().edge == e && out.segments.back().hi == ks[i].offset)
          out.segments.back().hi = ks[i + 1].offset;
        else
          out.segments.push_back(ClosedSegment{e, ks[i].offset, ks[i + 1].offset});
      }
    }
    for (std::size_t i = 1; i + 1 < ks.size(); ++i)
      if (ks[i].value == m) out.points.push_back(Point::on_edge(*graph_, e, ks[i].offset));
  }
  return out;
}

PLFunction PLFunction::normalized() const { return *this + Rational(-min_value()); }

bool same_graph(const PLFunction& a, const PLFunction& b) {
  return a.graph_ptr() == b.graph_ptr() || a.graph() == b.graph();
}

namespace {

template <class Op>
PLFunction combine(const PLFunction& a, const PLFunction& b, Op op) {
  if (!same_graph(a, b)) throw std::invalid_argument("functions live on different graphs");
  std::vector<std::vector<Knot>> ks(a.graph().edge_count());
  for (std::size_t e = 0; e < ks.size(); ++e)
    for (const auto& o : merged_offsets(a.knots(e), b.knots(e)))
      ks[e].push_back(Knot{o, op(a.eval_on_edge(e, o), b.eval_on_edge(e, o))});
  return PLFunction(a.graph_ptr(), std::move(ks));
}

}  // namespace

PLFunction PLFunction::operator+(const PLFunction& o) const {
  return combine(*this, o, [](const Rational& x, const Rational& y) { return Rational(x + y); });
}

PLFunction PLFunction::operator-(const PLFunction& o) const {
  return combine(*this, o, [](const Rational& x, const Rational& y) { return Rational(x - y); });
}

PLFunction PLFunction::operator+(const Rational& c) const {
  auto ks = knots_;
  for (auto& v : ks)
    for (auto& k : v) k.value += c;
  return PLFunction(graph_, std::move(ks));
}

PLFunction PLFunction::operator-() const {
  auto ks = knots_;
  for (auto& v : ks)
    for (auto& k : v) k.value = -k.value;
  return PLFunction(graph_, std::move(ks));
}

bool operator==(const PLFunction& a, const PLFunction& b) {
  if (!same_graph(a, b)) return false;
  for (std::size_t e = 0; e < a.knots_.size(); ++e) {
    const auto &x = a.knots_[e], &y = b.knots_[e];
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i].offset != y[i].offset || x[i].value != y[i].value) return false;
  }
  return true;
}

PLFunction pointwise_min(const PLFunction& a, const PLFunction& b) {
  if (!same_graph(a, b)) throw std::invalid_argument("functions live on different graphs");
  std::vector<std::vector<Knot>> ks(a.graph().edge_count());
  for (std::size_t e = 0; e < ks.size(); ++e) {
    auto offs = merged_offsets(a.knots(e), b.knots(e));
    for (std::size_t i = 0; i < offs.size(); ++i) {
      Rational fa = a.eval_on_edge(e, offs[i]), fb = b.eval_on_edge(e, offs[i]);
      ks[e].push_back(Knot{offs[i], std::min(fa, fb)});
      if (i + 1 == offs.size()) break;
      Rational ga = a.eval_on_edge(e, offs[i + 1]), gb = b.eval_on_edge(e, offs[i + 1]);
      Rational d0 = fa - fb, d1 = ga - gb;
      if ((d0 < 0 && d1 > 0) || (d0 > 0 && d1 < 0)) {
        Rational t = offs[i] + (offs[i + 1] - offs[i]) * d0 / (d0 - d1);
        ks[e].push_back(Knot{t, a.eval_on_edge(e, t)});
      }
    }
  }
  return PLFunction(a.graph_ptr(), std::move(ks));
}

PLFunction trop_min(const TropCombination& c) {
  if (c.generators.size() != c.coefficients.size()) throw std::invalid_argument("coefficient count mismatch");
  std::optional<PLFunction> acc;
  for (std::size_t i = 0; i < c.generators.size(); ++i) {
    if (c.coefficients[i].is_infinite()) continue;
    PLFunction f = c.generators[i] + c.coefficients[i].value();
    acc = acc ? pointwise_min(*acc, f) : f;
  }
  if (!acc) throw InputError("tropical combination with all coefficients infinite");
  return *acc;
}

PLFunction trop_min(const std::vector<PLFunction>& fns, const std::vector<Rational>& coefficients) {
  TropCombination c{fns, {}};
  for (const auto& a : coefficients) c.coefficients.emplace_back(a);
  return trop_min(c);
}

bool in_R_of(const PLFunction& f, const Divisor& d) { return (d + f.div()).is_effective(); }

std::vector<std::size_t> f_flat(const PLFunction& f, const Divisor& d) {
  if (!in_R_of(f, d)) throw InputError("function is not in R(D)");
  Rational m = f.min_value();
  auto comps = components_minus_support(f.graph(), d);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    bool inside = true;
    for (const auto& s : comps[i].segments)
      if (f.max_on(ClosedSegment{s.edge, s.lo, s.hi}) != m) inside = false;
    if (!inside) out.push_back(i);
  }
  return out;
}

PLFunction distance_function(GraphPtr g, const ClosedSet& s) {
  const MetricGraph& G = *g;
  std::vector<std::optional<Rational>> dist(G.vertex_count());
  auto relax = [&](std::size_t v, const Rational& d) {
    if (!dist[v] || d < *dist[v]) dist[v] = d;
  };
  for (const auto& p : s.points) {
    if (p.is_vertex()) {
      relax(p.vertex_index(), 0);
    } else {
      const Edge& e = G.edge(p.edge_index());
      relax(e.tail, p.offset());
      relax(e.head, Rational(e.length - p.offset()));
    }
  }
  for (const auto& seg : s.segments) {
    const Edge& e = G.edge(seg.edge);
    relax(e.tail, seg.lo);
    relax(e.head, Rational(e.length - seg.hi));
  }
  // Dijkstra over vertices (sizes are small; a linear scan is enough).
  std::vector<bool> done(G.vertex_count(), false);
  for (;;) {
    std::optional<std::size_t> best;
    for (std::size_t v = 0; v < G.vertex_count(); ++v)
      if (!done[v] && dist[v] && (!best || *dist[v] < *dist[*best])) best = v;
    if (!best) break;
    done[*best] = true;
    for (const auto& h : G.half_edges(*best)) {
      const Edge& e = G.edge(h.edge);
      relax(h.from_tail ? e.head : e.tail, Rational(*dist[*best] + e.length));
    }
  }
  for (const auto& d : dist)
    if (!d) throw InputError("distance to an empty set");

  std::vector<std::vector<Rational>> offs(G.edge_count());
  std::vector<std::vector<std::pair<Rational, Rational>>> sources(G.edge_count());
  for (std::size_t e = 0; e < G.edge_count(); ++e) {
    const Edge& edge = G.edge(e);
    sources[e].push_back({Rational(0), *dist[edge.tail]});
    sources[e].push_back({edge.length, *dist[edge.head]});
  }
  for (const auto& p : s.points)
    if (!p.is_vertex()) sources[p.edge_index()].push_back({p.offset(), Rational(0)});
  for (const auto& seg : s.segments) {
    sources[seg.edge].push_back({seg.lo, Rational(0)});
    sources[seg.edge].push_back({seg.hi, Rational(0)});
  }
  for (std::size_t e = 0; e < G.edge_count(); ++e) {
    const auto& src = sources[e];
    for (const auto& [a, da] : src) offs[e].push_back(a);
    for (const auto& [a, da] : src)
      for (const auto& [b, db] : src) {
        if (!(a < b)) continue;
        Rational x = (db - da + a + b) / 2;
        if (a < x && x < b) offs[e].push_back(x);
      }
  }
  auto value = [&](std::size_t e, const Rational& x) {
    for (const auto& seg : s.segments)
      if (seg.edge == e && seg.lo <= x && x <= seg.hi) return Rational(0);
    std::optional<Rational> best;
    for (const auto& [a, da] : sources[e]) {
      Rational d = da + abs(x - a);
      if (!best || d < *best) best = d;
    }
    return *best;
  };
  return PLFunction::sample(std::move(g), offs, value);
}

std::vector<std::vector<Rational>> order_refinement(const std::vector<PLFunction>& fns) {
  if (fns.empty()) throw std::invalid_argument("empty family");
  const MetricGraph& g = fns.front().graph();
  std::vector<std::vector<Rational>> out(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    std::set<Rational> offs;
    for (const auto& f : fns)
      for (const auto& k : f.knots(e)) offs.insert(k.offset);
    std::vector<Rational> base(offs.begin(), offs.end());
    for (std::size_t i = 0; i + 1 < base.size(); ++i)
      for (std::size_t a = 0; a < fns.size(); ++a)
        for (std::size_t b = a + 1; b < fns.size(); ++b) {
          Rational d0 = fns[a].eval_on_edge(e, base[i]) - fns[b].eval_on_edge(e, base[i]);
          Rational d1 = fns[a].eval_on_edge(e, base[i + 1]) - fns[b].eval_on_edge(e, base[i + 1]);
          if ((d0 < 0 && d1 > 0) || (d0 > 0 && d1 < 0))
            offs.insert(Rational(base[i] + (base[i + 1] - base[i]) * d0 / (d0 - d1)));
        }
    out[e].assign(offs.begin(), offs.end());
  }
  return out;
}

}  // namespace tropls
