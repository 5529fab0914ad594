#include "tropls/constructions.hpp"

#include <algorithm>

namespace tropls {

namespace {

ParametrizedSeries interval_with_shifts(int d, const Rational& length, const std::vector<Rational>& shift) {
  if (d < 0) throw InputError("degree must be nonnegative");
  if (sgn(length) <= 0) throw InputError("length must be positive");
  ParametrizedSeries s;
  s.graph = share(MetricGraph({"v", "w"}, {{"e", "v", "w", length}}));
  s.base = point_divisor(Point::vertex(0), d);
  for (int j = 0; j <= d; ++j)
    s.map.images.emplace_back(
        PLFunction(s.graph, {{{0, shift[j]}, {length, shift[j] + Rational(j * length)}}}));
  return s;
}

}  // namespace

ParametrizedSeries interval_phi(int d, const Rational& length) {
  return interval_with_shifts(d, length, std::vector<Rational>(static_cast<std::size_t>(std::max(d, 0)) + 1));
}

ParametrizedSeries interval_phi_prime(int d, std::optional<Rational> length) {
  Rational len = length ? *length : Rational(d + 1);
  // Slope d wins next to v and the winning slope drops by one at each crossing. Lines j and
  // j+1 cross where x equals shift_j - shift_{j+1} = (d-j)*step.
  Rational step = len / (d + 1);
  std::vector<Rational> shift;
  for (int j = 0; j <= d; ++j) shift.push_back(step * ((d - j) * (d - j + 1) / 2));
  return interval_with_shifts(d, len, shift);
}

ParametrizedSeries loop_phi(int d, const Rational& circumference) {
  if (d < 1) throw InputError("degree must be positive");
  if (sgn(circumference) <= 0) throw InputError("circumference must be positive");
  ParametrizedSeries s;
  s.graph = share(MetricGraph({"v"}, {{"c", "v", "v", circumference}}));
  s.base = point_divisor(Point::vertex(0), d);
  for (int k = 0; k < d; ++k) {
    // Slope d-k up to the target point, then -k back to v.
    Rational t = circumference * k / d;
    std::vector<Knot> knots{{0, 0}};
    if (k > 0) knots.push_back({t, t * (d - k)});
    knots.push_back({circumference, 0});
    s.map.images.emplace_back(PLFunction(s.graph, {knots}));
  }
  return s;
}

}  // namespace tropls

namespace tropls {

bool is_rigid(const GraphPtr& g, const Divisor& e, const mpz_class& n) {
  if (!e.is_effective()) throw InputError("rigidity is tested on effective divisors");
  for (const auto& p : lattice_points(*g, n))
    if (!is_v_reduced(g, e, p)) return false;
  return true;
}

namespace {

// The closed subgraph {phi <= level}, as a flag per edge of a refinement on which phi is linear.
struct Sublevel {
  Refinement refined;
  std::vector<bool> inside;
};

Sublevel sublevel(const PLFunction& phi, const Rational& level) {
  const MetricGraph& g = phi.graph();
  std::vector<Point> cuts = phi.breakpoints();
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& ks = phi.knots(e);
    for (std::size_t k = 0; k + 1 < ks.size(); ++k) {
      Rational a = ks[k].value - level, b = ks[k + 1].value - level;
      if (sgn(a) * sgn(b) < 0)
        cuts.push_back(Point::on_edge(g, e, ks[k].offset - a * (ks[k + 1].offset - ks[k].offset) / (b - a)));
    }
  }
  Sublevel s{refine(g, cuts), {}};
  for (const auto& span : s.refined.spans)
    s.inside.push_back(phi.eval_on_edge(span.edge, span.lo) <= level && phi.eval_on_edge(span.edge, span.hi) <= level);
  return s;
}

// Whether a refined edge of the sublevel set lies on a simple cycle inside it.
bool on_cycle(const Sublevel& s, std::size_t edge) {
  const MetricGraph& rg = s.refined.graph;
  const Edge& x = rg.edge(edge);
  if (x.is_loop()) return true;
  std::vector<std::size_t> parent(rg.vertex_count());
  for (std::size_t v = 0; v < parent.size(); ++v) parent[v] = v;
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t e = 0; e < rg.edge_count(); ++e)
    if (e != edge && s.inside[e]) parent[find(rg.edge(e).tail)] = find(rg.edge(e).head);
  return find(x.tail) == find(x.head);
}

}  // namespace

bool is_inconvenient(const PLFunction& phi, const Point& p) {
  const MetricGraph& g = phi.graph();
  long top = 0, falling = 0;
  bool first = true;
  for (const auto& z : tangents(g, p)) {
    long s = phi.outgoing_slope(z);
    if (s == 0) return false;
    if (s < 0) falling -= s;
    top = first ? s : std::max(top, s);
    first = false;
  }
  return !first && top > falling;
}

MUWReport muw_realizable(const PLFunction& phi) {
  const MetricGraph& g = phi.graph();
  if (!in_R_of(phi, canonical_divisor(g))) throw InputError("function is not in R(K)");
  MUWReport rep;
  rep.realizable = true;
  // Points of valence two are never inconvenient.
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    Point p = Point::vertex(v);
    if (valence(g, p) < 3 || !is_inconvenient(phi, p)) continue;
    Sublevel s = sublevel(phi, phi.eval(p));
    std::size_t rv = s.refined.vertex_of(p);
    InconvenientPoint ip{p, false};
    for (std::size_t e = 0; e < s.refined.graph.edge_count() && !ip.on_cycle; ++e) {
      const Edge& x = s.refined.graph.edge(e);
      if (s.inside[e] && (x.tail == rv || x.head == rv)) ip.on_cycle = on_cycle(s, e);
    }
    rep.realizable &= ip.on_cycle;
    rep.inconvenient.push_back(ip);
  }
  // Every tangent of slope zero points into a flat piece; each piece is checked once.
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& ks = phi.knots(e);
    for (std::size_t k = 0; k + 1 < ks.size(); ++k) {
      if (ks[k].value != ks[k + 1].value) continue;
      Sublevel s = sublevel(phi, ks[k].value);
      FlatSegment flat{e, ks[k].offset, ks[k + 1].offset, false};
      for (std::size_t r = 0; r < s.refined.spans.size(); ++r)
        if (s.refined.spans[r].edge == e && s.refined.spans[r].lo == flat.lo) flat.on_cycle = on_cycle(s, r);
      rep.realizable &= flat.on_cycle;
      rep.horizontal.push_back(flat);
    }
  }
  return rep;
}

bool realizable_closure_check(const PLFunction& a, const PLFunction& b,
                              const std::vector<std::pair<Rational, Rational>>& shifts) {
  if (!muw_realizable(a).realizable || !muw_realizable(b).realizable)
    throw InputError("closure check needs two realizable functions");
  for (const auto& [s, t] : shifts)
    if (!muw_realizable(pointwise_min(a + s, b + t)).realizable) return false;
  return true;
}

LeviGraph cartwright(const Matroid& m, const std::vector<Rational>& lengths) {
  if (m.rank() != 3 || !m.is_simple()) throw InputError("Levi graphs need a simple rank-3 matroid");
  LeviGraph levi;
  levi.lines = m.hyperplanes();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m.size(); ++i) {
    levi.point_vertex.push_back(names.size());
    names.push_back("e" + std::to_string(i));
  }
  for (std::size_t j = 0; j < levi.lines.size(); ++j) {
    levi.line_vertex.push_back(names.size());
    names.push_back("F" + std::to_string(j));
  }
  std::vector<EdgeSpec> edges;
  for (std::size_t j = 0; j < levi.lines.size(); ++j)
    for (int i : elements(levi.lines[j])) {
      std::size_t k = edges.size();
      Rational len = lengths.empty() ? Rational(1) : (k < lengths.size() ? lengths[k] : Rational(0));
      if (sgn(len) <= 0) throw InputError("edge lengths must be positive, one per incidence");
      edges.push_back({"e" + std::to_string(i) + "F" + std::to_string(j), names[static_cast<std::size_t>(i)],
                       names[levi.line_vertex[j]], len});
    }
  if (!lengths.empty() && lengths.size() != edges.size()) throw InputError("one length per incidence expected");
  levi.graph = share(MetricGraph(names, edges));
  for (std::size_t v : levi.point_vertex) levi.divisor.add(Point::vertex(v), 1);
  return levi;
}

namespace {

void require_unit_lengths(const LeviGraph& levi) {
  for (const auto& e : levi.graph->edges())
    if (e.length != 1) throw InputError("this construction needs unit edge lengths");
}

// Linear on every edge with the given vertex values.
PLFunction from_vertex_values(const GraphPtr& g, const std::vector<Rational>& values) {
  std::vector<std::vector<Knot>> ks;
  for (const auto& e : g->edges()) ks.push_back({{0, values[e.tail]}, {e.length, values[e.head]}});
  return PLFunction(g, ks);
}

}  // namespace

PLFunction distinguished_function(const LeviGraph& levi, const Matroid& m, std::size_t e, const Rational& c) {
  require_unit_lengths(levi);
  if (e >= m.size()) throw InputError("element out of range");
  if (sgn(c) <= 0 || c >= 1) throw InputError("c must lie strictly between 0 and 1");
  const MetricGraph& g = *levi.graph;
  std::vector<std::vector<Knot>> ks;
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    const Edge& edge = g.edge(k);
    std::size_t point = edge.tail, line = edge.head - m.size();
    if (!(levi.lines[line] >> e & 1u))
      ks.push_back({{0, 0}, {1, 0}});
    else if (point == levi.point_vertex[e])
      ks.push_back({{0, c}, {1, c}});
    else
      ks.push_back({{0, 0}, {c, c}, {1, c}});
  }
  return PLFunction(levi.graph, ks);
}

CartwrightSeries cartwright_series_from_adjoint(const Matroid& m, const Matroid& w, std::size_t generator_cap) {
  CartwrightSeries out;
  out.levi = cartwright(m);
  if (!is_adjoint(w, m)) throw InputError("the second matroid is not an adjoint");
  const LeviGraph& levi = out.levi;
  const std::size_t nv = levi.graph->vertex_count();

  for (std::size_t j = 0; j < levi.lines.size(); ++j) {
    ClosedSet closure;
    closure.points.push_back(Point::vertex(levi.line_vertex[j]));
    for (std::size_t k = 0; k < levi.graph->edge_count(); ++k)
      if (levi.graph->edge(k).head == levi.line_vertex[j]) closure.segments.push_back({k, 0, levi.graph->edge(k).length});
    out.psi.push_back(distance_function(levi.graph, closure));
    out.map.images.emplace_back(out.psi.back());
  }

  std::vector<ElementSet> point_flats;
  for (std::size_t e = 0; e < m.size(); ++e) {
    std::vector<Rational> val(nv, Rational(0));
    val[levi.point_vertex[e]] = 2;
    ElementSet through = 0;
    for (std::size_t j = 0; j < levi.lines.size(); ++j)
      if (levi.lines[j] >> e & 1u) {
        val[levi.line_vertex[j]] = 1;
        through |= 1u << j;
      }
    out.generators.push_back(from_vertex_values(levi.graph, val));
    out.adjoint_flats.push_back(through);
    point_flats.push_back(through);
  }
  for (ElementSet flat : w.flats(2)) {
    if (std::find(point_flats.begin(), point_flats.end(), flat) != point_flats.end()) continue;
    std::vector<Rational> val(nv, Rational(0));
    for (int j : elements(flat)) val[levi.line_vertex[static_cast<std::size_t>(j)]] = 1;
    out.generators.push_back(from_vertex_values(levi.graph, val));
    out.adjoint_flats.push_back(flat);
  }
  if (out.generators.size() > generator_cap)
    throw CapExceeded(std::to_string(out.generators.size()) + " generators exceed the cap");
  return out;
}

std::optional<Matroid> local_matroid_on_lines(const LeviGraph& levi, const TropSubmodule& s) {
  auto loc = local_matroid(s);
  if (!loc.ok() || loc.components.size() != levi.lines.size()) return std::nullopt;
  std::vector<int> line_of(loc.components.size(), -1);
  for (std::size_t c = 0; c < loc.components.size(); ++c)
    for (std::size_t j = 0; j < levi.lines.size(); ++j)
      for (std::size_t v : loc.components[c].vertices)
        if (v == levi.line_vertex[j]) line_of[c] = static_cast<int>(j);
  std::vector<ElementSet> bases;
  for (ElementSet b : loc.matroid->bases()) {
    ElementSet r = 0;
    for (int c : elements(b)) {
      if (line_of[static_cast<std::size_t>(c)] < 0) return std::nullopt;
      r |= 1u << line_of[static_cast<std::size_t>(c)];
    }
    bases.push_back(r);
  }
  return Matroid::from_bases(levi.lines.size(), bases);
}

bool has_fano_restriction(const Matroid& m) {
  if (m.size() < 7) return false;
  const Matroid f = fano();
  for (ElementSet s = 0; s <= m.ground(); ++s)
    if (set_size(s) == 7 && m.rank(s) == 3 && matroid_iso(submatroid(m, s), f)) return true;
  return false;
}

}  // namespace tropls
