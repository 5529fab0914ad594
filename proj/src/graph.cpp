#include "tropls/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace tropls {

namespace {

std::strong_ordering rat_order(const Rational& a, const Rational& b) {
  int c = cmp(a, b);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

MetricGraph::MetricGraph(std::vector<std::string> vertices, const std::vector<EdgeSpec>& edges)
    : names_(std::move(vertices)) {
  if (names_.empty()) throw InputError("graph has no vertices");
  if (edges.empty()) throw InputError("graph has no edges");
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (!index.emplace(names_[i], i).second) throw InputError("duplicate vertex id \"" + names_[i] + "\"");
  std::set<std::string> edge_ids;
  adj_.resize(names_.size());
  for (const auto& spec : edges) {
    if (!edge_ids.insert(spec.id).second) throw InputError("duplicate edge id \"" + spec.id + "\"");
    auto t = index.find(spec.tail), h = index.find(spec.head);
    if (t == index.end() || h == index.end())
      throw InputError("edge \"" + spec.id + "\" has an unknown endpoint");
    if (spec.length <= 0) throw InputError("edge \"" + spec.id + "\" has nonpositive length");
    std::size_t e = edges_.size();
    edges_.push_back(Edge{spec.id, t->second, h->second, spec.length});
    adj_[t->second].push_back(HalfEdge{e, true});
    adj_[h->second].push_back(HalfEdge{e, false});
  }
  UnionFind uf(names_.size());
  for (const auto& e : edges_) uf.unite(e.tail, e.head);
  for (std::size_t v = 1; v < names_.size(); ++v)
    if (uf.find(v) != uf.find(0)) throw InputError("graph is disconnected (vertex \"" + names_[v] + "\")");
}

std::optional<std::size_t> MetricGraph::find_vertex(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> MetricGraph::find_edge(std::string_view id) const {
  for (std::size_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].id == id) return i;
  return std::nullopt;
}

int MetricGraph::genus() const {
  return static_cast<int>(edges_.size()) - static_cast<int>(names_.size()) + 1;
}

Rational MetricGraph::total_length() const {
  Rational sum = 0;
  for (const auto& e : edges_) sum += e.length;
  return sum;
}

bool operator==(const MetricGraph& a, const MetricGraph& b) {
  if (a.names_ != b.names_ || a.edges_.size() != b.edges_.size()) return false;
  for (std::size_t i = 0; i < a.edges_.size(); ++i) {
    const auto &x = a.edges_[i], &y = b.edges_[i];
    if (x.id != y.id || x.tail != y.tail || x.head != y.head || x.length != y.length) return false;
  }
  return true;
}

Point Point::vertex(std::size_t v) {
  Point p;
  p.is_vertex_ = true;
  p.index_ = v;
  return p;
}

Point Point::on_edge(const MetricGraph& g, std::size_t e, const Rational& offset) {
  const Edge& edge = g.edge(e);
  if (offset < 0 || offset > edge.length)
    throw InputError("offset " + to_string(offset) + " outside edge \"" + edge.id + "\"");
  if (offset == 0) return vertex(edge.tail);
  if (offset == edge.length) return vertex(edge.head);
  Point p;
  p.is_vertex_ = false;
  p.index_ = e;
  p.offset_ = offset;
  return p;
}

std::size_t Point::vertex_index() const {
  if (!is_vertex_) throw std::logic_error("vertex_index of interior point");
  return index_;
}

std::size_t Point::edge_index() const {
  if (is_vertex_) throw std::logic_error("edge_index of vertex point");
  return index_;
}

std::strong_ordering operator<=>(const Point& a, const Point& b) {
  if (a.is_vertex_ != b.is_vertex_) return a.is_vertex_ ? std::strong_ordering::less : std::strong_ordering::greater;
  if (a.index_ != b.index_) return a.index_ <=> b.index_;
  return rat_order(a.offset_, b.offset_);
}

std::string describe(const MetricGraph& g, const Point& p) {
  if (p.is_vertex()) return g.vertex_name(p.vertex_index());
  return g.edge(p.edge_index()).id + "@" + to_string(p.offset());
}

std::vector<Tangent> tangents(const MetricGraph& g, const Point& p) {
  std::vector<Tangent> out;
  if (p.is_vertex()) {
    for (const auto& h : g.half_edges(p.vertex_index())) out.push_back(Tangent{p, h.edge, h.from_tail});
  } else {
    out.push_back(Tangent{p, p.edge_index(), true});
    out.push_back(Tangent{p, p.edge_index(), false});
  }
  return out;
}

int valence(const MetricGraph& g, const Point& p) {
  return p.is_vertex() ? static_cast<int>(g.half_edges(p.vertex_index()).size()) : 2;
}

std::vector<Rational> offsets_on_edge(const MetricGraph& g, const Point& p, std::size_t e) {
  const Edge& edge = g.edge(e);
  if (!p.is_vertex()) {
    if (p.edge_index() != e) return {};
    return {p.offset()};
  }
  std::vector<Rational> out;
  if (edge.tail == p.vertex_index()) out.push_back(Rational(0));
  if (edge.head == p.vertex_index()) out.push_back(edge.length);
  return out;
}

Point advance(const MetricGraph& g, const Tangent& z, const Rational& t) {
  const Edge& edge = g.edge(z.edge);
  Rational start;
  if (z.base.is_vertex())
    start = z.forward ? Rational(0) : edge.length;
  else
    start = z.base.offset();
  return Point::on_edge(g, z.edge, z.forward ? Rational(start + t) : Rational(start - t));
}

void Divisor::add(const Point& p, long mult) {
  if (mult == 0) return;
  long& m = chips_[p];
  m += mult;
  if (m == 0) chips_.erase(p);
}

long Divisor::at(const Point& p) const {
  auto it = chips_.find(p);
  return it == chips_.end() ? 0 : it->second;
}

long Divisor::degree() const {
  long d = 0;
  for (const auto& [p, m] : chips_) d += m;
  return d;
}

bool Divisor::is_effective() const {
  return std::all_of(chips_.begin(), chips_.end(), [](const auto& kv) { return kv.second > 0; });
}

std::vector<Point> Divisor::support() const {
  std::vector<Point> out;
  for (const auto& [p, m] : chips_) out.push_back(p);
  return out;
}

Divisor Divisor::operator+(const Divisor& o) const {
  Divisor r = *this;
  for (const auto& [p, m] : o.chips_) r.add(p, m);
  return r;
}

Divisor Divisor::operator-(const Divisor& o) const {
  Divisor r = *this;
  for (const auto& [p, m] : o.chips_) r.add(p, -m);
  return r;
}

Divisor Divisor::scaled(long k) const {
  Divisor r;
  for (const auto& [p, m] : chips_) r.add(p, m * k);
  return r;
}

Divisor point_divisor(const Point& p, long mult) {
  Divisor d;
  d.add(p, mult);
  return d;
}

std::string describe(const MetricGraph& g, const Divisor& d) {
  if (d.empty()) return "0";
  std::string s;
  for (const auto& [p, m] : d.chips()) {
    if (!s.empty()) s += m < 0 ? " - " : " + ";
    else if (m < 0) s += "-";
    long a = m < 0 ? -m : m;
    if (a != 1) s += std::to_string(a) + "*";
    s += describe(g, p);
  }
  return s;
}

long valence_one_degree(const MetricGraph& g, const Divisor& d) {
  long s = 0;
  for (const auto& [p, m] : d.chips())
    if (valence(g, p) == 1) s += m;
  return s;
}

Divisor canonical_divisor(const MetricGraph& g) {
  Divisor k;
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    k.add(Point::vertex(v), static_cast<long>(g.half_edges(v).size()) - 2);
  return k;
}

std::size_t Refinement::vertex_of(const Point& p) const {
  for (std::size_t i = 0; i < origin.size(); ++i)
    if (origin[i] == p) return i;
  throw std::logic_error("point is not a vertex of the refinement");
}

Refinement refine(const MetricGraph& g, const std::vector<Point>& pts) {
  std::vector<std::set<Rational>> cuts(g.edge_count());
  for (const auto& p : pts)
    if (!p.is_vertex()) cuts[p.edge_index()].insert(p.offset());

  std::vector<std::string> names = g.vertex_names();
  std::vector<Point> origin;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) origin.push_back(Point::vertex(v));
  std::set<std::string> taken(names.begin(), names.end());
  auto fresh = [&](std::string base) {
    std::string n = base;
    for (int k = 1; taken.count(n); ++k) n = base + "~" + std::to_string(k);
    taken.insert(n);
    return n;
  };

  std::vector<EdgeSpec> specs;
  std::vector<Refinement::Span> spans;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    std::string prev = names[edge.tail];
    Rational prev_off = 0;
    std::size_t k = 0;
    auto emit = [&](const std::string& to, const Rational& off) {
      std::string id = cuts[e].empty() ? edge.id : edge.id + "." + std::to_string(k);
      specs.push_back(EdgeSpec{id, prev, to, Rational(off - prev_off)});
      spans.push_back(Refinement::Span{e, prev_off, off});
      ++k;
    };
    for (const auto& off : cuts[e]) {
      std::string name = fresh(edge.id + "@" + to_string(off));
      names.push_back(name);
      origin.push_back(Point::on_edge(g, e, off));
      emit(name, off);
      prev = name;
      prev_off = off;
    }
    emit(names[edge.head], edge.length);
  }
  return Refinement{MetricGraph(names, specs), std::move(origin), std::move(spans)};
}

bool Component::contains(const Point& p) const {
  if (p.is_vertex()) return std::find(vertices.begin(), vertices.end(), p.vertex_index()) != vertices.end();
  for (const auto& s : segments)
    if (s.edge == p.edge_index() && s.lo < p.offset() && p.offset() < s.hi) return true;
  return false;
}

Point Component::sample(const MetricGraph& g) const {
  const auto& s = segments.front();
  return Point::on_edge(g, s.edge, Rational((s.lo + s.hi) / 2));
}

std::vector<Component> components_minus_support(const MetricGraph& g, const Divisor& d) {
  std::vector<bool> vertex_in_support(g.vertex_count(), false);
  std::vector<std::set<Rational>> cuts(g.edge_count());
  for (const auto& p : d.support()) {
    if (p.is_vertex())
      vertex_in_support[p.vertex_index()] = true;
    else
      cuts[p.edge_index()].insert(p.offset());
  }
  // Nodes: vertices first, then open pieces.
  std::vector<OpenSegment> pieces;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    Rational lo = 0;
    for (const auto& c : cuts[e]) {
      pieces.push_back(OpenSegment{e, lo, c});
      lo = c;
    }
    pieces.push_back(OpenSegment{e, lo, g.edge(e).length});
  }
  std::size_t nv = g.vertex_count();
  UnionFind uf(nv + pieces.size());
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& s = pieces[i];
    const Edge& edge = g.edge(s.edge);
    if (s.lo == 0 && !vertex_in_support[edge.tail]) uf.unite(nv + i, edge.tail);
    if (s.hi == edge.length && !vertex_in_support[edge.head]) uf.unite(nv + i, edge.head);
  }
  std::vector<Component> out;
  std::vector<std::ptrdiff_t> slot(nv + pieces.size(), -1);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    std::size_t r = uf.find(nv + i);
    if (slot[r] < 0) {
      slot[r] = static_cast<std::ptrdiff_t>(out.size());
      out.emplace_back();
    }
    out[static_cast<std::size_t>(slot[r])].segments.push_back(pieces[i]);
  }
  for (std::size_t v = 0; v < nv; ++v)
    if (!vertex_in_support[v]) out[static_cast<std::size_t>(slot[uf.find(v)])].vertices.push_back(v);
  return out;
}

mpz_class default_denominator(const MetricGraph& g) {
  mpz_class n = 1;
  for (const auto& e : g.edges()) n = lcm_of(n, e.length.get_den());
  return n;
}

mpz_class denominator_of(const Point& p) { return p.is_vertex() ? mpz_class(1) : mpz_class(p.offset().get_den()); }

mpz_class denominator_of(const Divisor& d) {
  mpz_class n = 1;
  for (const auto& [p, m] : d.chips()) n = lcm_of(n, denominator_of(p));
  return n;
}

bool is_lattice_compatible(const MetricGraph& g, const mpz_class& n) {
  for (const auto& e : g.edges())
    if (!is_integer(Rational(e.length * n))) return false;
  return true;
}

std::vector<Point> lattice_points(const MetricGraph& g, const mpz_class& n) {
  if (!is_lattice_compatible(g, n)) throw InputError("edge lengths are not multiples of 1/" + n.get_str());
  std::vector<Point> out;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) out.push_back(Point::vertex(v));
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    long steps = to_long(Rational(g.edge(e).length * n));
    for (long k = 1; k < steps; ++k) out.push_back(Point::on_edge(g, e, Rational(mpq_class(k) / n)));
  }
  return out;
}

}  // namespace tropls
