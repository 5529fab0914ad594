#pragma once

#include "tropls/local_matroid.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tropls {

// A tropical-module map from coordinates into R(base).
struct ParametrizedSeries {
  GraphPtr graph;
  Divisor base;
  Parametrization map;

  TropSubmodule image(const ValuatedMatroid& v, std::size_t generator_cap = kDefaultGeneratorCap) const {
    return map.image(v, base, generator_cap);
  }
  PLFunction origin() const { return map.apply(TropVector(map.images.size(), ExtRational(0))); }
};

// Interval [v,w] with base d*v; coordinate j maps to j*x. d = 0 is allowed and gives constants.
ParametrizedSeries interval_phi(int d, const Rational& length = 1);
// interval_phi shifted so that the origin maps to a function with one chip at each
// k*length/(d+1), k = 1..d. Length defaults to d+1. Coordinate j wins on the component
// (d-j, d-j+1)*length/(d+1), so components listed from v correspond to coordinates d, d-1, ..., 0.
ParametrizedSeries interval_phi_prime(int d, std::optional<Rational> length = std::nullopt);
// Loop of the given circumference at v with base d*v; coordinate k maps to the extremal whose
// divisor is d times the point at offset k*circumference/d.
ParametrizedSeries loop_phi(int d, const Rational& circumference = 1);

// Tropical rank of the generator matrix of v. Rank cannot grow under a tropical-module map,
// so this bounds the independence rank of every image of v.
std::size_t image_rank_bound(const ValuatedMatroid& v);

// Same matroid with element i renamed to n-1-i.
Matroid reversed(const Matroid& m);

// True when no other divisor is linearly equivalent to e, tested by reducedness at every
// point of the 1/n lattice.
bool is_rigid(const GraphPtr& g, const Divisor& e, const mpz_class& n);

// Canonical-divisor realizability in residue characteristic zero.
struct InconvenientPoint {
  Point point;
  bool on_cycle = false;
};
struct FlatSegment {
  std::size_t edge = 0;  // a maximal flat piece of the function on this edge
  Rational lo, hi;
  bool on_cycle = false;
};
struct MUWReport {
  bool realizable = false;
  std::vector<InconvenientPoint> inconvenient;
  std::vector<FlatSegment> horizontal;
};
// phi must lie in R(K); throws InputError otherwise.
MUWReport muw_realizable(const PLFunction& phi);
bool is_inconvenient(const PLFunction& phi, const Point& p);
// Whether min(a + s, b + t) stays realizable for every given shift pair. Both inputs must be realizable.
bool realizable_closure_check(const PLFunction& a, const PLFunction& b,
                              const std::vector<std::pair<Rational, Rational>>& shifts);

// Bipartite incidence graph of points and lines of a simple rank-3 matroid, with one chip on
// every point vertex. Vertex names are "e<i>" and "F<j>", lines indexed as m.hyperplanes().
struct LeviGraph {
  GraphPtr graph;
  Divisor divisor;
  std::vector<ElementSet> lines;
  std::vector<std::size_t> point_vertex;
  std::vector<std::size_t> line_vertex;
};
// lengths, if given, follow the incidence order: lines in order, points in increasing order.
LeviGraph cartwright(const Matroid& m, const std::vector<Rational>& lengths = {});

// phi with value 0 on the components of lines avoiding e, slope one for distance c along each
// edge [e', F'] where F' is the line through e and e', and c elsewhere. Unit lengths only.
PLFunction distinguished_function(const LeviGraph& levi, const Matroid& m, std::size_t e, const Rational& c);

struct CartwrightSeries {
  LeviGraph levi;
  std::vector<PLFunction> psi;  // distance to the closed component of each line
  Parametrization map;          // coordinates indexed by lines
  std::vector<PLFunction> generators;
  std::vector<ElementSet> adjoint_flats;  // flat of W behind each generator, as a set of lines
};
// W must be an adjoint of m; unit edge lengths. Throws InputError otherwise.
CartwrightSeries cartwright_series_from_adjoint(const Matroid& m, const Matroid& w, std::size_t generator_cap = 24);
// Local matroid of a module on the Levi graph, with elements reindexed by lines.
std::optional<Matroid> local_matroid_on_lines(const LeviGraph& levi, const TropSubmodule& s);
// A restriction isomorphic to the Fano plane rules out realizability away from characteristic 2.
bool has_fano_restriction(const Matroid& m);

// Scripted examples, each reporting named checks.
struct ScenarioCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};
struct ScenarioReport {
  std::string scenario;
  std::vector<ScenarioCheck> checks;
  std::map<std::string, long> numbers;  // ranks and dimensions observed along the way
  bool passed() const;
  const ScenarioCheck* find(const std::string& name) const;
};

ScenarioReport barbell_scenario(unsigned seed = 1);
ScenarioReport luo_scenario();
// Requires l1 > l2 > l3, l2 + l3 > l1 and l1 - l2 <= x <= l2.
ScenarioReport loop_of_loops_scenario(const Rational& l1, const Rational& l2, const Rational& l3, const Rational& x);
ScenarioReport vamos_scenario();
// q1 and q2 must be elementary quotients of the relaxed Vamos matroid.
ScenarioReport vamos_relaxed_scenario(const Matroid& q1, const Matroid& q2);
ScenarioReport hyperelliptic_chain_scenario(unsigned seed = 1, int samples = 12);
ScenarioReport cartwright_scenario(const Matroid& m);

// Graphs used by the scenarios.
GraphPtr barbell_graph();
GraphPtr luo_graph();
GraphPtr loop_of_loops_graph(const Rational& l1, const Rational& l2, const Rational& l3);
GraphPtr hyperelliptic_chain_graph();

}  // namespace tropls
