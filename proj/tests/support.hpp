#pragma once

#include "tropls/chip_firing.hpp"
#include "tropls/graph.hpp"
#include "tropls/pl.hpp"

#include <cstdlib>
#include <random>
#include <string>
#include <vector>

namespace testkit {

using namespace tropls;

inline std::uint64_t seed() {
  if (const char* s = std::getenv("TROPLS_SEED")) return std::strtoull(s, nullptr, 10);
  return 20240611ULL;
}

inline Rational q(long a, long b = 1) { return make_rational(a, b); }

inline GraphPtr graph(std::vector<std::string> vs, std::vector<EdgeSpec> es) {
  return share(MetricGraph(std::move(vs), es));
}

inline GraphPtr interval(Rational len = 1) { return graph({"v", "w"}, {{"e", "v", "w", len}}); }

inline GraphPtr circle(Rational len = 1) { return graph({"v"}, {{"c", "v", "v", len}}); }

inline GraphPtr theta() {
  return graph({"v", "w"}, {{"a", "v", "w", 1}, {"b", "v", "w", 1}, {"c", "v", "w", 1}});
}

// Two loops joined by the bridge [v,w].
inline GraphPtr barbell(Rational loop = 1, Rational bridge = 1) {
  return graph({"v", "w"}, {{"l", "v", "v", loop}, {"b", "v", "w", bridge}, {"r", "w", "w", loop}});
}

// Two loops sharing a single point.
inline GraphPtr two_loop_chain() { return graph({"u"}, {{"l", "u", "u", 2}, {"r", "u", "u", 2}}); }

// Tent of slope one on a single edge of the theta graph, zero elsewhere.
inline PLFunction theta_tent(const GraphPtr& g, const std::string& edge) {
  std::vector<std::vector<Knot>> ks;
  for (std::size_t e = 0; e < g->edge_count(); ++e) {
    if (g->edge(e).id == edge)
      ks.push_back({{0, 0}, {q(1, 2), q(1, 2)}, {1, 0}});
    else
      ks.push_back({{0, 0}, {1, 0}});
  }
  return PLFunction(g, ks);
}

inline Point vtx(const MetricGraph& g, const std::string& name) { return Point::vertex(*g.find_vertex(name)); }

inline Point at(const MetricGraph& g, const std::string& edge, Rational off) {
  return Point::on_edge(g, *g.find_edge(edge), off);
}

// Random connected multigraph with small integer lengths, no loops.
inline GraphPtr random_graph(std::mt19937_64& rng, int max_vertices, int max_genus) {
  std::uniform_int_distribution<int> nv_dist(1, max_vertices);
  int nv = nv_dist(rng);
  if (nv == 1) nv = 2;
  std::vector<std::string> names;
  for (int i = 0; i < nv; ++i) names.push_back("x" + std::to_string(i));
  std::vector<EdgeSpec> es;
  std::uniform_int_distribution<int> len(1, 2);
  for (int i = 1; i < nv; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    es.push_back({"t" + std::to_string(i), names[pick(rng)], names[i], len(rng)});
  }
  std::uniform_int_distribution<int> extra(0, max_genus);
  int g = extra(rng);
  std::uniform_int_distribution<int> any(0, nv - 1);
  for (int k = 0; k < g; ++k) {
    int a = any(rng), b = any(rng);
    while (b == a) b = any(rng);
    es.push_back({"c" + std::to_string(k), names[a], names[b], len(rng)});
  }
  return graph(names, es);
}

}  // namespace testkit
