#include "tropls/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace tropls::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InputError((path.empty() ? std::string("/") : path) + ": " + what);
}

const Json& member(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, "missing \"" + key + "\"");
  return *it;
}

const Json& array_at(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

std::string string_at(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

long integer_at(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long>();
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

}  // namespace

Rational rational_from_json(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_float()) fail(path, "floating-point literals are not accepted; write \"p/q\"");
  if (!j.is_string()) fail(path, "expected a rational \"p/q\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const InputError& e) {
    fail(path, e.what());
  }
}

Json to_json(const Rational& q) { return to_string(q); }

ExtRational ext_rational_from_json(const Json& j, const std::string& path) {
  if (j.is_string() && j.get<std::string>() == "inf") return ExtRational::infinity();
  return ExtRational(rational_from_json(j, path));
}

Json to_json(const ExtRational& q) { return q.is_infinite() ? Json("inf") : to_json(q.value()); }

GraphPtr graph_from_json(const Json& j, const std::string& path) {
  std::vector<std::string> vertices;
  const Json& vs = array_at(member(j, "vertices", path), path + "/vertices");
  for (std::size_t i = 0; i < vs.size(); ++i) vertices.push_back(string_at(vs[i], path + "/vertices/" + std::to_string(i)));
  std::vector<EdgeSpec> edges;
  const Json& es = array_at(member(j, "edges", path), path + "/edges");
  for (std::size_t i = 0; i < es.size(); ++i) {
    std::string at = path + "/edges/" + std::to_string(i);
    const Json& ends = array_at(member(es[i], "ends", at), at + "/ends");
    if (ends.size() != 2) fail(at + "/ends", "an edge has exactly two ends");
    Rational len = rational_from_json(member(es[i], "length", at), at + "/length");
    if (sgn(len) <= 0) fail(at + "/length", "lengths must be positive");
    edges.push_back({string_at(member(es[i], "id", at), at + "/id"), string_at(ends[0], at + "/ends/0"),
                     string_at(ends[1], at + "/ends/1"), len});
  }
  try {
    return share(MetricGraph(std::move(vertices), edges));
  } catch (const InputError& e) {
    fail(path, e.what());
  }
}

Json to_json(const MetricGraph& g) {
  Json j;
  j["vertices"] = g.vertex_names();
  j["edges"] = Json::array();
  for (const Edge& e : g.edges())
    j["edges"].push_back({{"id", e.id}, {"ends", {g.vertex_name(e.tail), g.vertex_name(e.head)}}, {"length", to_json(e.length)}});
  return j;
}

Point point_from_json(const MetricGraph& g, const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected a point object");
  if (j.contains("vertex")) {
    std::string name = string_at(j["vertex"], path + "/vertex");
    auto v = g.find_vertex(name);
    if (!v) fail(path + "/vertex", "unknown vertex \"" + name + "\"");
    return Point::vertex(*v);
  }
  std::string id = string_at(member(j, "edge", path), path + "/edge");
  auto e = g.find_edge(id);
  if (!e) fail(path + "/edge", "unknown edge \"" + id + "\"");
  Rational off = rational_from_json(member(j, "offset", path), path + "/offset");
  if (sgn(off) < 0 || off > g.edge(*e).length) fail(path + "/offset", "offset outside the edge");
  return Point::on_edge(g, *e, off);
}

Json to_json(const MetricGraph& g, const Point& p) {
  if (p.is_vertex()) return {{"vertex", g.vertex_name(p.vertex_index())}};
  return {{"edge", g.edge(p.edge_index()).id}, {"offset", to_json(p.offset())}};
}

Point point_from_text(const MetricGraph& g, const std::string& text) {
  if (!text.empty() && text.front() == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw InputError(std::string("point: ") + e.what());
    }
    return point_from_json(g, j, "point");
  }
  auto at = text.find('@');
  if (at == std::string::npos) return point_from_json(g, Json{{"vertex", text}}, "point");
  return point_from_json(g, Json{{"edge", text.substr(0, at)}, {"offset", text.substr(at + 1)}}, "point");
}

Divisor divisor_from_json(const MetricGraph& g, const Json& j, const std::string& path) {
  Divisor d;
  const Json& arr = array_at(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string at = path + "/" + std::to_string(i);
    d.add(point_from_json(g, member(arr[i], "point", at), at + "/point"), integer_at(member(arr[i], "mult", at), at + "/mult"));
  }
  return d;
}

Json to_json(const MetricGraph& g, const Divisor& d) {
  Json j = Json::array();
  for (const auto& [p, k] : d.chips()) j.push_back({{"point", to_json(g, p)}, {"mult", k}});
  return j;
}

PLFunction function_from_json(const GraphPtr& g, const Json& j, const std::string& path) {
  const MetricGraph& base = *g;
  const Json& values = member(j, "values", path);
  if (!values.is_object()) fail(path + "/values", "expected an object of vertex values");
  auto value_of = [&](const std::string& name) {
    auto it = values.find(name);
    if (it == values.end()) fail(path + "/values", "missing value for vertex \"" + name + "\"");
    return rational_from_json(*it, path + "/values/" + name);
  };

  std::vector<std::vector<Knot>> knots(base.edge_count());
  if (!j.contains("refinement")) {
    for (std::size_t e = 0; e < base.edge_count(); ++e) {
      const Edge& x = base.edge(e);
      knots[e] = {{0, value_of(base.vertex_name(x.tail))}, {x.length, value_of(base.vertex_name(x.head))}};
    }
  } else {
    const std::string rpath = path + "/refinement";
    GraphPtr ref = graph_from_json(j["refinement"], rpath);
    std::vector<std::map<long, std::size_t>> pieces(base.edge_count());
    std::vector<bool> whole(base.edge_count(), false);
    for (std::size_t r = 0; r < ref->edge_count(); ++r) {
      const std::string& id = ref->edge(r).id;
      if (auto e = base.find_edge(id)) {
        whole[*e] = true;
        pieces[*e][0] = r;
        continue;
      }
      auto dot = id.rfind('.');
      auto e = dot == std::string::npos ? std::nullopt : base.find_edge(id.substr(0, dot));
      long k = -1;
      if (e) {
        try {
          std::size_t used = 0;
          k = std::stol(id.substr(dot + 1), &used);
          if (used != id.size() - dot - 1) k = -1;
        } catch (const std::exception&) {
          k = -1;
        }
      }
      if (!e || k < 0) fail(rpath + "/edges/" + std::to_string(r), "\"" + id + "\" names no piece of an edge");
      if (!pieces[*e].emplace(k, r).second) fail(rpath + "/edges/" + std::to_string(r), "duplicate piece \"" + id + "\"");
    }
    for (std::size_t e = 0; e < base.edge_count(); ++e) {
      const Edge& x = base.edge(e);
      const std::string where = rpath + " edge " + x.id;
      if (pieces[e].empty()) fail(where, "edge is not covered");
      if (whole[e] && pieces[e].size() > 1) fail(where, "edge is both whole and split");
      std::string at = base.vertex_name(x.tail);
      Rational off = 0;
      knots[e].push_back({0, value_of(at)});
      long expect = 0;
      for (const auto& [k, r] : pieces[e]) {
        if (k != expect++) fail(where, "pieces must be numbered 0, 1, ... without gaps");
        const Edge& piece = ref->edge(r);
        if (ref->vertex_name(piece.tail) != at) fail(where, "piece " + piece.id + " does not continue from " + at);
        at = ref->vertex_name(piece.head);
        off += piece.length;
        bool last = k + 1 == static_cast<long>(pieces[e].size());
        if (!last && base.find_vertex(at)) fail(where, "interior point " + at + " reuses a vertex name");
        knots[e].push_back({off, value_of(at)});
      }
      if (at != base.vertex_name(x.head)) fail(where, "pieces end at " + at + " instead of " + base.vertex_name(x.head));
      if (off != x.length) fail(where, "piece lengths add up to " + to_string(off) + " instead of " + to_string(x.length));
    }
  }
  try {
    return PLFunction(g, std::move(knots));
  } catch (const InputError& e) {
    fail(path, e.what());
  }
}

Json to_json(const PLFunction& f) {
  const MetricGraph& g = f.graph();
  Json vertices = g.vertex_names(), edges = Json::array(), values = Json::object();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) values[g.vertex_name(v)] = to_json(f.eval(Point::vertex(v)));
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Edge& x = g.edge(e);
    const auto& ks = f.knots(e);
    if (ks.size() == 2) {
      edges.push_back({{"id", x.id}, {"ends", {g.vertex_name(x.tail), g.vertex_name(x.head)}}, {"length", to_json(x.length)}});
      continue;
    }
    std::string prev = g.vertex_name(x.tail);
    for (std::size_t k = 0; k + 1 < ks.size(); ++k) {
      std::string next = k + 2 == ks.size() ? g.vertex_name(x.head) : x.id + "@" + to_string(ks[k + 1].offset);
      if (k + 2 < ks.size()) {
        vertices.push_back(next);
        values[next] = to_json(ks[k + 1].value);
      }
      edges.push_back({{"id", x.id + "." + std::to_string(k)},
                       {"ends", {prev, next}},
                       {"length", to_json(ks[k + 1].offset - ks[k].offset)}});
      prev = next;
    }
  }
  return {{"refinement", {{"vertices", vertices}, {"edges", edges}}}, {"values", values}};
}

std::vector<PLFunction> functions_from_json(const GraphPtr& g, const Json& j, const std::string& path) {
  std::vector<PLFunction> out;
  const Json& arr = array_at(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(function_from_json(g, arr[i], path + "/" + std::to_string(i)));
  if (out.empty()) fail(path, "at least one function is needed");
  return out;
}

namespace {

std::vector<ElementSet> sets_from_json(const Json& j, std::size_t n, const std::string& path) {
  std::vector<ElementSet> out;
  const Json& arr = array_at(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string at = path + "/" + std::to_string(i);
    ElementSet s = 0;
    const Json& elems = array_at(arr[i], at);
    for (std::size_t k = 0; k < elems.size(); ++k) {
      long e = integer_at(elems[k], at + "/" + std::to_string(k));
      if (e < 0 || static_cast<std::size_t>(e) >= n) fail(at + "/" + std::to_string(k), "element outside 0..n-1");
      s |= 1u << e;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace

Matroid matroid_from_json(const Json& j, const std::string& path) {
  long n = integer_at(member(j, "n", path), path + "/n");
  if (n < 0 || static_cast<std::size_t>(n) > kMaxGround) fail(path + "/n", "ground set size outside 0.." + std::to_string(kMaxGround));
  const auto size = static_cast<std::size_t>(n);
  std::optional<long> rank;
  if (j.contains("rank")) rank = integer_at(j["rank"], path + "/rank");
  auto build = [&](auto&& make) {
    try {
      return make();
    } catch (const InputError& e) {
      fail(path, e.what());
    }
  };
  if (j.contains("bases")) {
    auto bases = sets_from_json(j["bases"], size, path + "/bases");
    Matroid m = build([&] { return Matroid::from_bases(size, bases); });
    if (rank && *rank != m.rank()) fail(path + "/rank", "does not match the bases");
    return m;
  }
  if (j.contains("nonspanning_circuits")) {
    if (!rank || *rank < 0) fail(path, "nonspanning circuits need a nonnegative \"rank\"");
    auto circuits = sets_from_json(j["nonspanning_circuits"], size, path + "/nonspanning_circuits");
    return build([&] { return Matroid::from_nonspanning_circuits(static_cast<std::size_t>(*rank), size, circuits); });
  }
  if (j.contains("rank2_flats")) {
    if (rank && *rank != 3) fail(path + "/rank", "a line presentation has rank 3");
    auto lines = sets_from_json(j["rank2_flats"], size, path + "/rank2_flats");
    return build([&] { return Matroid::from_rank2_flats(size, lines); });
  }
  fail(path, "expected \"bases\", \"nonspanning_circuits\" or \"rank2_flats\"");
}

Json to_json(const Matroid& m) {
  Json bases = Json::array();
  for (ElementSet b : m.bases()) bases.push_back(elements(b));
  return {{"n", m.size()}, {"rank", m.rank()}, {"bases", bases}};
}

Json to_json(const TropVector& v) {
  Json j = Json::array();
  for (const auto& x : v) j.push_back(to_json(x));
  return j;
}

TropVector trop_vector_from_json(const Json& j, const std::string& path) {
  TropVector v;
  const Json& arr = array_at(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i) v.push_back(ext_rational_from_json(arr[i], path + "/" + std::to_string(i)));
  return v;
}

Json read_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw InputError(file + ": cannot open");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(file + ": " + e.what());
  }
}

std::string graph_dot(const MetricGraph& g, const std::string& name) {
  std::ostringstream out;
  out << "graph " << quoted(name) << " {\n";
  for (const auto& v : g.vertex_names()) out << "  " << quoted(v) << ";\n";
  for (const Edge& e : g.edges())
    out << "  " << quoted(g.vertex_name(e.tail)) << " -- " << quoted(g.vertex_name(e.head))
        << " [label=" << quoted(e.id + " (" + to_string(e.length) + ")") << "];\n";
  out << "}\n";
  return out.str();
}

std::string levi_dot(const LeviGraph& levi) {
  const MetricGraph& g = *levi.graph;
  std::set<std::size_t> lines(levi.line_vertex.begin(), levi.line_vertex.end());
  std::ostringstream out;
  out << "graph \"levi\" {\n";
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    out << "  " << quoted(g.vertex_name(v)) << " [shape=" << (lines.count(v) ? "box" : "circle") << "];\n";
  for (const Edge& e : g.edges()) out << "  " << quoted(g.vertex_name(e.tail)) << " -- " << quoted(g.vertex_name(e.head)) << ";\n";
  out << "}\n";
  return out.str();
}

std::string sublevel_dot(const PLFunction& phi, const Rational& level) {
  const MetricGraph& g = phi.graph();
  std::ostringstream out;
  out << "graph \"sublevel\" {\n";
  auto in = [&](const Rational& v) { return v <= level ? " [style=bold]" : " [style=dashed]"; };
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    out << "  " << quoted(g.vertex_name(v)) << (phi.eval(Point::vertex(v)) <= level ? " [style=filled]" : "") << ";\n";
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Edge& x = g.edge(e);
    // Cut at every knot and at every crossing of the level.
    std::set<Rational> cuts;
    const auto& ks = phi.knots(e);
    for (std::size_t k = 0; k < ks.size(); ++k) {
      cuts.insert(ks[k].offset);
      if (k + 1 < ks.size() && (ks[k].value - level) * (ks[k + 1].value - level) < 0)
        cuts.insert(ks[k].offset + (level - ks[k].value) * (ks[k + 1].offset - ks[k].offset) / (ks[k + 1].value - ks[k].value));
    }
    std::vector<Rational> c(cuts.begin(), cuts.end());
    auto name = [&](std::size_t i) {
      if (i == 0) return g.vertex_name(x.tail);
      if (i + 1 == c.size()) return g.vertex_name(x.head);
      return x.id + "@" + to_string(c[i]);
    };
    for (std::size_t i = 1; i + 1 < c.size(); ++i)
      out << "  " << quoted(name(i)) << " [shape=point" << (phi.eval_on_edge(e, c[i]) <= level ? "" : ", color=gray") << "];\n";
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
      out << "  " << quoted(name(i)) << " -- " << quoted(name(i + 1)) << in(phi.eval_on_edge(e, (c[i] + c[i + 1]) / 2))
          << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string cells_dot(const CellComplex& c) {
  std::ostringstream out;
  out << "graph \"cells\" {\n";
  for (std::size_t i = 0; i < c.regions.size(); ++i)
    out << "  r" << i << " [label=" << quoted("dim " + std::to_string(c.regions[i].dim) + "\\n" + c.regions[i].type) << "];\n";
  for (std::size_t i = 0; i < c.regions.size(); ++i)
    for (std::size_t k : c.regions[i].neighbors)
      if (i < k) out << "  r" << i << " -- r" << k << ";\n";
  out << "}\n";
  return out.str();
}

std::string lattice_dot(const Matroid& m) {
  std::ostringstream out;
  out << "digraph \"flats\" {\n  rankdir=BT;\n";
  std::vector<std::vector<ElementSet>> by_rank;
  for (int k = 0; k <= m.rank(); ++k) by_rank.push_back(m.flats(k));
  auto label = [](ElementSet s) { return quoted(set_to_string(s)); };
  for (const auto& level : by_rank)
    for (ElementSet f : level) out << "  " << label(f) << ";\n";
  for (std::size_t k = 0; k + 1 < by_rank.size(); ++k)
    for (ElementSet f : by_rank[k])
      for (ElementSet h : by_rank[k + 1])
        if (contains(h, f)) out << "  " << label(f) << " -> " << label(h) << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace tropls::io
