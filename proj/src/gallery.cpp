#include "tropls/constructions.hpp"
#include "tropls/lp.hpp"
#include "tropls/trop_linalg.hpp"

#include <algorithm>
#include <random>

namespace tropls {

std::size_t image_rank_bound(const ValuatedMatroid& v) {
  std::vector<std::vector<ExtRational>> rows(v.generators().begin(), v.generators().end());
  return trop_rank(TropMatrix(rows).transposed());
}

Matroid reversed(const Matroid& m) {
  const int n = static_cast<int>(m.size());
  std::vector<ElementSet> bases;
  for (ElementSet b : m.bases()) {
    ElementSet r = 0;
    for (int e : elements(b)) r |= 1u << (n - 1 - e);
    bases.push_back(r);
  }
  return Matroid::from_bases(m.size(), bases);
}

bool ScenarioReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ScenarioCheck& c) { return c.passed; });
}

const ScenarioCheck* ScenarioReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

void check(ScenarioReport& r, std::string name, bool ok, std::string detail = {}) {
  r.checks.push_back({std::move(name), ok, std::move(detail)});
}

Point on(const MetricGraph& g, const std::string& edge, const Rational& off) {
  return Point::on_edge(g, *g.find_edge(edge), off);
}

Point vertex(const MetricGraph& g, const std::string& name) { return Point::vertex(*g.find_vertex(name)); }

// The function moving d to its p-reduced form, together with whether that form is the only
// divisor of |d| through p.
struct Through {
  PLFunction phi;
  Divisor divisor;
  bool contains = false;
  bool unique = false;
};

Through through(const GraphPtr& g, const Divisor& d, const Point& p, const mpz_class& n) {
  auto red = reduce(g, d, p);
  Through t{red.witness.normalized(), red.divisor, red.divisor.at(p) > 0, false};
  if (t.contains) t.unique = is_rigid(g, red.divisor - point_divisor(p), n);
  return t;
}

}  // namespace

GraphPtr barbell_graph() {
  return share(MetricGraph({"v", "w"}, {{"l", "v", "v", 2}, {"b", "v", "w", 1}, {"r", "w", "w", 2}}));
}

ScenarioReport barbell_scenario(unsigned seed) {
  ScenarioReport rep{"barbell", {}, {}};
  GraphPtr g = barbell_graph();
  const MetricGraph& G = *g;
  Divisor k = canonical_divisor(G);
  const mpz_class n = 2;
  Point x = on(G, "l", 1), y = on(G, "r", 1);
  Through tx = through(g, k, x, n), ty = through(g, k, y, n);
  check(rep, "unique_divisor_through_x", tx.contains && tx.unique && tx.divisor == point_divisor(x, 2));
  check(rep, "unique_divisor_through_y", ty.contains && ty.unique && ty.divisor == point_divisor(y, 2));

  TropSubmodule series(k, {tx.phi, ty.phi});
  auto tls = is_tls(series);
  rep.numbers["series_r_bn"] = tls.r_bn.rank;
  rep.numbers["series_r_ind"] = static_cast<long>(tls.r_ind);
  rep.numbers["series_r_bn_at_double"] = tls.r_bn.rank_at_double;
  check(rep, "series_is_tls_of_dimension_one", tls.is_tls && tls.r_bn.rank == 1);
  check(rep, "canonical_not_in_series", !membership(PLFunction::constant(g), series));

  // Generators of R(K): one function per vertex of |K|.
  Through tv = through(g, k, vertex(G, "v"), n), tw = through(g, k, vertex(G, "w"), n);
  TropSubmodule complete(k, {PLFunction::constant(g), tv.phi, tw.phi, tx.phi, ty.phi});
  auto full = is_tls(complete);
  rep.numbers["complete_r_bn"] = full.r_bn.rank;
  rep.numbers["complete_r_ind"] = static_cast<long>(full.r_ind);
  rep.numbers["complete_r_bn_at_double"] = full.r_bn.rank_at_double;
  check(rep, "complete_series_not_tls", !full.is_tls && full.r_ind == 3 && full.r_bn.rank == 1);

  // Realizability against membership, on every region of R(K) and on random combinations.
  auto complex = cells(complete);
  bool agree = true;
  int realizable_dim = -1;
  for (const auto& region : complex.regions) {
    PLFunction f = combination(complete, region.interior);
    bool real = muw_realizable(f).realizable;
    agree &= real == membership(f, series).has_value();
    if (real) realizable_dim = std::max(realizable_dim, region.dim);
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(0, 6);
  for (int t = 0; t < 40; ++t) {
    std::vector<std::optional<Rational>> a(complete.size());
    for (auto& c : a) c = make_rational(coef(rng), 2);
    PLFunction f = combination(complete, a);
    agree &= muw_realizable(f).realizable == membership(f, series).has_value();
  }
  rep.numbers["regions"] = static_cast<long>(complex.regions.size());
  rep.numbers["realizable_dimension"] = realizable_dim;
  check(rep, "muw_locus_is_series", agree);
  // Realizable cells of dimension g-1 only, so their hull is the unique series.
  check(rep, "realizable_hull_is_tls", realizable_dim == G.genus() - 1 && tls.is_tls);
  return rep;
}

GraphPtr luo_graph() {
  std::vector<EdgeSpec> es{{"ps", "p", "s", 1}, {"sq", "s", "q", 1}, {"qp", "q", "p", 1}};
  for (const auto& [a, b] : std::vector<std::pair<std::string, std::string>>{{"p", "x"}, {"q", "y"}, {"s", "z"}})
    for (int i = 1; i <= 3; ++i) es.push_back({a + b + std::to_string(i), a, b, 1});
  return share(MetricGraph({"p", "q", "s", "x", "y", "z"}, es));
}

ScenarioReport luo_scenario() {
  ScenarioReport rep{"luo", {}, {}};
  GraphPtr g = luo_graph();
  const MetricGraph& G = *g;
  Divisor d = point_divisor(vertex(G, "p")) + point_divisor(vertex(G, "q")) + point_divisor(vertex(G, "s"));
  auto rk = rank(g, d);
  rep.numbers["rank"] = rk.rank;
  rep.numbers["rank_at_double"] = rank(g, d, 2 * rk.denominator).rank;
  check(rep, "rank_one", rk.rank == 1);
  std::vector<PLFunction> fns;
  bool unique = true;
  for (const char* name : {"x", "y", "z"}) {
    Through t = through(g, d, vertex(G, name), 2);
    unique &= t.contains && t.unique;
    fns.push_back(t.phi);
  }
  // Each of the three must lie in any submodule of rank one.
  check(rep, "unique_divisors_through_x_y_z", unique);
  auto cert = independence_certificate(fns);
  check(rep, "independence_certificate", cert && verify_certificate(fns, *cert));
  TropSubmodule three(d, fns);
  std::size_t ri = r_ind(three);
  rep.numbers["r_ind"] = static_cast<long>(ri);
  Tangent along{vertex(G, "s"), *G.find_edge("sq"), true};
  std::vector<long> slopes;
  for (const auto& f : fns) slopes.push_back(f.outgoing_slope(along));
  std::sort(slopes.begin(), slopes.end());
  check(rep, "distinct_slopes_on_sq", std::unique(slopes.begin(), slopes.end()) == slopes.end());
  check(rep, "no_dimension_one_tls", ri == 3);
  return rep;
}

GraphPtr loop_of_loops_graph(const Rational& l1, const Rational& l2, const Rational& l3) {
  std::vector<EdgeSpec> es;
  // Each small loop is two arcs of length 2 through u_i and u'_i.
  auto loop = [&](const std::string& a, const std::string& b, const std::string& i) {
    for (const std::string u : {"u" + i, "u" + i + "'"}) {
      es.push_back({a + "-" + u, a, u, 1});
      es.push_back({u + "-" + b, u, b, 1});
    }
  };
  loop("w1", "v2", "3");
  loop("v1", "w3", "2");
  loop("w2", "v3", "1");
  es.push_back({"L1", "v1", "w1", l1});
  es.push_back({"L2", "v2", "w2", l2});
  es.push_back({"L3", "v3", "w3", l3});
  return share(MetricGraph({"v1", "w1", "v2", "w2", "v3", "w3", "u1", "u1'", "u2", "u2'", "u3", "u3'"}, es));
}

ScenarioReport loop_of_loops_scenario(const Rational& l1, const Rational& l2, const Rational& l3, const Rational& x) {
  if (!(l1 > l2 && l2 > l3 && sgn(l3) > 0 && l2 + l3 > l1))
    throw InputError("lengths must satisfy l1 > l2 > l3 > 0 and l2 + l3 > l1");
  if (x < l1 - l2 || x > l2) throw InputError("x must lie in [l1 - l2, l2]");
  ScenarioReport rep{"loop_of_loops", {}, {}};
  GraphPtr g = loop_of_loops_graph(l1, l2, l3);
  const MetricGraph& G = *g;
  Divisor d = point_divisor(vertex(G, "v1")) + point_divisor(vertex(G, "w3")) + point_divisor(on(G, "L2", x));
  mpz_class n = natural_denominator(G, d) * 2;
  auto rk = rank(g, d);
  rep.numbers["rank"] = rk.rank;
  rep.numbers["rank_at_double"] = rank(g, d, 2 * rk.denominator).rank;
  check(rep, "rank_one", rk.rank == 1);

  std::vector<PLFunction> outer, all;
  bool unique = true;
  for (const char* i : {"1", "2", "3"}) {
    Through t = through(g, d, vertex(G, std::string("u") + i), n);
    Through t2 = through(g, d, vertex(G, std::string("u") + i + "'"), n);
    unique &= t.contains && t.unique && t2.contains && t2.unique;
    outer.push_back(t.phi);
    all.push_back(t.phi);
    all.push_back(t2.phi);
  }
  check(rep, "unique_divisors_through_u", unique);
  // Any rank-one series holds phi_1, phi_2, phi_3, so they must be dependent.
  std::size_t ri = r_ind(TropSubmodule(d, outer));
  rep.numbers["outer_r_ind"] = static_cast<long>(ri);
  bool exists = false;
  if (ri <= 2) {
    auto tls = is_tls(TropSubmodule(d, all));
    rep.numbers["series_r_bn"] = tls.r_bn.rank;
    rep.numbers["series_r_ind"] = static_cast<long>(tls.r_ind);
    rep.numbers["series_r_bn_at_double"] = tls.r_bn.rank_at_double;
    exists = tls.is_tls && tls.r_bn.rank == 1;
    check(rep, "series_certified", exists);
  }
  rep.numbers["tls_exists"] = exists ? 1 : 0;
  check(rep, "verdict_matches_midpoint_rule", exists == (2 * x == l1 + l2 - l3));
  return rep;
}

namespace {

ElementSet flat_after_translation(const ParametrizedSeries& p, const TropVector& f) {
  PLFunction origin = p.origin();
  return flat_of(p.map.apply(f) - origin, p.base + origin.div());
}

ElementSet reversed_set(ElementSet s, std::size_t n) {
  ElementSet r = 0;
  for (int e : elements(s)) r |= 1u << (static_cast<int>(n) - 1 - e);
  return r;
}

struct SeriesFacts {
  TlsReport tls;
  std::size_t bound = 0;
  std::optional<Matroid> local;
};

SeriesFacts interval_facts(const ParametrizedSeries& p, const ValuatedMatroid& v) {
  SeriesFacts f;
  TropSubmodule s = p.image(v, std::max(kDefaultGeneratorCap, v.generators().size()));
  f.bound = image_rank_bound(v);
  f.tls = is_tls(s, std::nullopt, f.bound);
  auto loc = local_matroid(s.translated(p.origin()));
  if (loc.ok()) f.local = reversed(*loc.matroid);
  return f;
}

}  // namespace

ScenarioReport vamos_scenario() {
  ScenarioReport rep{"vamos", {}, {}};
  const Matroid v8 = vamos();
  auto p = interval_phi_prime(7);
  auto trop = ValuatedMatroid::trop(v8);
  SeriesFacts f = interval_facts(p, trop);
  rep.numbers["generators"] = static_cast<long>(trop.generators().size());
  rep.numbers["r_bn"] = f.tls.r_bn.rank;
  rep.numbers["r_ind"] = static_cast<long>(f.tls.r_ind);
  rep.numbers["r_bn_at_double"] = f.tls.r_bn.rank_at_double;
  check(rep, "dimension_three", f.tls.r_bn.rank == 3 && f.tls.r_bn.stable());
  check(rep, "is_tls", f.tls.is_tls && f.bound == 4);
  check(rep, "local_matroid_is_vamos", f.local && *f.local == v8);

  const std::vector<ElementSet> flats{make_set({0, 1, 2, 3}), make_set({1, 2, 4, 5}), make_set({0, 3, 4, 5})};
  bool realized = true;
  TropVector lowest(8, ExtRational::infinity());
  for (ElementSet flat : flats) {
    TropVector delta(8, ExtRational(0));
    for (int e : elements(flat)) delta[static_cast<std::size_t>(e)] = ExtRational::infinity();
    realized &= span_membership(delta, trop).has_value();
    realized &= flat_after_translation(p, delta) == reversed_set(flat, 8);
    for (std::size_t j = 0; j < 8; ++j) lowest[j] = std::min(lowest[j], delta[j]);
  }
  check(rep, "designated_flats_realized", realized);
  check(rep, "designated_minimum_is_origin", lowest == TropVector(8, ExtRational(0)));
  auto quotients = quotients_of_rank(v8, 3, flats);
  rep.numbers["rank3_quotients_with_flats"] = static_cast<long>(quotients.size());
  check(rep, "no_rank3_quotient_with_flats", quotients.empty());
  return rep;
}

ScenarioReport vamos_relaxed_scenario(const Matroid& q1, const Matroid& q2) {
  ScenarioReport rep{"vamos_relaxed", {}, {}};
  const Matroid relaxed = vamos_relaxed();
  for (const Matroid* q : {&q1, &q2})
    if (q->size() != 8 || q->rank() != 3 || !is_quotient(*q, relaxed))
      throw InputError("inputs must be elementary quotients of the relaxed Vamos matroid");
  auto p = interval_phi_prime(7);
  SeriesFacts whole = interval_facts(p, ValuatedMatroid::trop(relaxed));
  rep.numbers["r_bn"] = whole.tls.r_bn.rank;
  rep.numbers["r_bn_at_double"] = whole.tls.r_bn.rank_at_double;
  check(rep, "relaxed_series_dimension_three", whole.tls.is_tls && whole.tls.r_bn.rank == 3);
  int k = 1;
  for (const Matroid* q : {&q1, &q2}) {
    SeriesFacts f = interval_facts(p, ValuatedMatroid::trop(*q));
    std::string tag = std::to_string(k++);
    rep.numbers["r_bn_" + tag] = f.tls.r_bn.rank;
    rep.numbers["r_bn_" + tag + "_at_double"] = f.tls.r_bn.rank_at_double;
    check(rep, "subseries_" + tag + "_codimension_one", f.tls.is_tls && f.tls.r_bn.rank == 2);
    check(rep, "subseries_" + tag + "_local_matroid", f.local && *f.local == *q);
  }
  auto common = common_quotients(q1, q2, 2);
  rep.numbers["common_rank2_quotients"] = static_cast<long>(common.size());
  rep.numbers["no_codimension_two_subseries"] = common.empty() ? 1 : 0;
  return rep;
}

GraphPtr hyperelliptic_chain_graph() {
  return share(MetricGraph({"v1", "w2", "v2", "w3"}, {{"g1", "v1", "v1", 2},
                                                      {"b1", "v1", "w2", 1},
                                                      {"top", "w2", "v2", 2},
                                                      {"bot", "w2", "v2", 2},
                                                      {"b2", "v2", "w3", 1},
                                                      {"g3", "w3", "w3", 4}}));
}

ScenarioReport hyperelliptic_chain_scenario(unsigned seed, int samples) {
  ScenarioReport rep{"hyperelliptic_chain", {}, {}};
  GraphPtr g = hyperelliptic_chain_graph();
  const MetricGraph& G = *g;
  Divisor k = canonical_divisor(G);
  std::mt19937_64 rng(seed);
  // Positions on the last loop with fixed sum 8, so every sample is equivalent to 4*w3.
  std::uniform_int_distribution<int> pick(12, 20);
  bool all_real = true, only_v2 = true, in_class = true;
  std::vector<std::vector<Rational>> positions;
  for (int t = 0; t < samples; ++t) {
    std::vector<Rational> pos;
    for (int i = 0; i < 3; ++i) pos.push_back(make_rational(pick(rng), 8));
    pos.push_back(8 - pos[0] - pos[1] - pos[2]);
    std::sort(pos.begin(), pos.end());
    Divisor d;
    for (const auto& x : pos) d.add(on(G, "g3", x), 1);
    auto phi = is_equiv(g, k, d);
    if (!phi) {
      in_class = false;
      continue;
    }
    auto muw = muw_realizable(*phi);
    all_real &= muw.realizable;
    only_v2 &= muw.inconvenient.size() == 1 && muw.inconvenient[0].point == vertex(G, "v2");
    positions.push_back(pos);
  }
  check(rep, "samples_in_canonical_class", in_class);
  check(rep, "all_samples_realizable", all_real);
  check(rep, "only_v2_inconvenient", only_v2);
  std::vector<std::vector<Rational>> diffs;
  for (std::size_t i = 1; i < positions.size(); ++i) {
    std::vector<Rational> row;
    for (std::size_t j = 0; j < 4; ++j) row.push_back(positions[i][j] - positions[0][j]);
    diffs.push_back(row);
  }
  long dim = static_cast<long>(matrix_rank(diffs));
  rep.numbers["realizable_dimension"] = dim;
  rep.numbers["genus"] = G.genus();
  check(rep, "dimension_exceeds_g_minus_one", dim == 3 && dim > G.genus() - 1);
  // Any series of dimension g-1 is smaller than the realizable locus found here.
  rep.numbers["single_tls_equals_locus"] = dim == G.genus() - 1 ? 1 : 0;
  return rep;
}

ScenarioReport cartwright_scenario(const Matroid& m) {
  ScenarioReport rep{"cartwright", {}, {}};
  LeviGraph levi = cartwright(m);
  rep.numbers["vertices"] = static_cast<long>(levi.graph->vertex_count());
  rep.numbers["edges"] = static_cast<long>(levi.graph->edge_count());
  auto r1 = rank(levi.graph, levi.divisor, mpz_class(1));
  auto r2 = rank(levi.graph, levi.divisor, mpz_class(2));
  rep.numbers["rank"] = r1.rank;
  rep.numbers["rank_at_double"] = rank(levi.graph, levi.divisor, mpz_class(4)).rank;
  check(rep, "divisor_rank_two", r1.rank == 2 && r2.rank == 2);

  Matroid w = free_adjoint(m);
  auto cs = cartwright_series_from_adjoint(m, w);
  TropSubmodule s(levi.divisor, cs.generators, cs.generators.size());
  bool param = true;
  for (std::size_t i = 0; i < cs.generators.size(); ++i) {
    TropVector covector(levi.lines.size(), ExtRational(0));
    for (int j : elements(cs.adjoint_flats[i])) covector[static_cast<std::size_t>(j)] = ExtRational::infinity();
    param &= cs.map.apply(covector) == cs.generators[i];
  }
  check(rep, "parametrized_by_adjoint", param);
  auto tls = is_tls(s);
  rep.numbers["r_bn"] = tls.r_bn.rank;
  rep.numbers["r_bn_at_double"] = tls.r_bn.rank_at_double;
  rep.numbers["r_ind"] = static_cast<long>(tls.r_ind);
  check(rep, "series_is_tls_of_dimension_two", tls.is_tls && tls.r_bn.rank == 2);
  check(rep, "divisor_nondegenerate", nondegenerate(levi.divisor, s).nondegenerate);
  auto local = local_matroid_on_lines(levi, s);
  check(rep, "local_matroid_is_adjoint", local && *local == w && is_adjoint(*local, m));
  rep.numbers["fano_restriction"] = has_fano_restriction(m) ? 1 : 0;

  // Distinguished divisors are rigid once e and one more support point are removed.
  bool rigid = true;
  for (std::size_t e = 0; e < m.size(); ++e) {
    PLFunction phi = distinguished_function(levi, m, e, make_rational(1, 2));
    Divisor de = levi.divisor + phi.div();
    rigid &= membership(phi, s).has_value();
    for (const auto& [pt, mult] : de.chips()) {
      if (pt == Point::vertex(levi.point_vertex[e])) continue;
      rigid &= is_rigid(levi.graph, de - point_divisor(Point::vertex(levi.point_vertex[e])) - point_divisor(pt), 2);
      break;
    }
  }
  check(rep, "distinguished_divisors_rigid", rigid);
  return rep;
}

}  // namespace tropls
