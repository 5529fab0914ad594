// One line per acceptance criterion. Exit status is nonzero when any line fails.

#include "support.hpp"

#include "tropls/constructions.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

using namespace testkit;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

// r_BN values seen by criteria 2-12, each with its value at the doubled denominator.
struct StabilityRecord {
  std::string what;
  long rank, at_double;
};
std::vector<StabilityRecord> stability;

void note(const std::string& what, long rank, long at_double) { stability.push_back({what, rank, at_double}); }
void note(const std::string& what, const BNRank& r) { note(what, r.rank, r.rank_at_double); }
void note_number(const std::string& what, const ScenarioReport& r, const std::string& key) {
  note(what, r.numbers.at(key), r.numbers.at(key + "_at_double"));
}

std::string failed_checks(const ScenarioReport& r) {
  std::string out;
  for (const auto& c : r.checks)
    if (!c.passed) out += (out.empty() ? "failed: " : ", ") + c.name;
  return out;
}

// -- corpus shared by the pure-dimension and slope criteria --------------------------------

struct Entry {
  std::string name;
  TropSubmodule module;
  std::optional<mpz_class> denominator;
};

PLFunction witness(const GraphPtr& g, const Divisor& d, const Point& p) { return reduce(g, d, p).witness; }

std::vector<Entry> corpus() {
  std::vector<Entry> out;
  auto p2 = interval_phi(2);
  out.push_back({"interval U(2,3)", p2.image(ValuatedMatroid::trop(Matroid::uniform(2, 3))), std::nullopt});
  out.push_back({"interval free(3)", p2.image(ValuatedMatroid::free_module(3)), std::nullopt});
  auto p3 = interval_phi_prime(3);
  out.push_back({"shifted interval U(2,4)", p3.image(ValuatedMatroid::trop(Matroid::uniform(2, 4))), std::nullopt});
  out.push_back({"shifted interval U(3,4)", p3.image(ValuatedMatroid::trop(Matroid::uniform(3, 4))), std::nullopt});
  auto loop = loop_phi(3);
  out.push_back({"loop U(2,3)", loop.image(ValuatedMatroid::trop(Matroid::uniform(2, 3))), mpz_class(6)});
  out.push_back({"loop free(3)", loop.image(ValuatedMatroid::free_module(3)), mpz_class(6)});

  auto t = theta();
  out.push_back({"theta canonical",
                 TropSubmodule(canonical_divisor(*t), {PLFunction::constant(t), theta_tent(t, "a"), theta_tent(t, "b"),
                                                       theta_tent(t, "c")}),
                 std::nullopt});

  auto b = barbell_graph();
  Divisor k = canonical_divisor(*b);
  PLFunction fx = witness(b, k, at(*b, "l", 1)), fy = witness(b, k, at(*b, "r", 1));
  out.push_back({"barbell series", TropSubmodule(k, {fx, fy}), std::nullopt});
  out.push_back({"barbell R(K)",
                 TropSubmodule(k, {PLFunction::constant(b), witness(b, k, vtx(*b, "v")), witness(b, k, vtx(*b, "w")), fx, fy}),
                 std::nullopt});

  auto luo = luo_graph();
  Divisor dl = point_divisor(vtx(*luo, "p")) + point_divisor(vtx(*luo, "q")) + point_divisor(vtx(*luo, "s"));
  out.push_back({"Luo triple",
                 TropSubmodule(dl, {witness(luo, dl, vtx(*luo, "x")), witness(luo, dl, vtx(*luo, "y")),
                                    witness(luo, dl, vtx(*luo, "z"))}),
                 std::nullopt});

  auto lol = loop_of_loops_graph(5, 4, 3);
  Divisor dd = point_divisor(vtx(*lol, "v1")) + point_divisor(vtx(*lol, "w3")) + point_divisor(at(*lol, "L2", 3));
  std::vector<PLFunction> six;
  for (const char* u : {"u1", "u1'", "u2", "u2'", "u3", "u3'"}) six.push_back(witness(lol, dd, vtx(*lol, u)));
  out.push_back({"loop of loops at x=3", TropSubmodule(dd, six), std::nullopt});

  Matroid u34 = Matroid::uniform(3, 4);
  auto cs = cartwright_series_from_adjoint(u34, free_adjoint(u34));
  out.push_back({"Cartwright U(3,4)", TropSubmodule(cs.levi.divisor, cs.generators, cs.generators.size()), std::nullopt});
  return out;
}

struct CorpusFacts {
  Entry entry;
  TlsReport tls;
  std::vector<int> maximal;
};

const std::vector<CorpusFacts>& corpus_facts() {
  static const std::vector<CorpusFacts> facts = [] {
    std::vector<CorpusFacts> out;
    for (auto& e : corpus()) {
      auto tls = is_tls(e.module, e.denominator);
      auto dims = cells(e.module).maximal_dimensions();
      out.push_back({std::move(e), tls, dims});
    }
    return out;
  }();
  return facts;
}

// -- criteria ---------------------------------------------------------------------------------

Verdict check_riemann_roch() {
  std::mt19937_64 rng(seed() + 1);
  int graphs = 0;
  for (int t = 0; graphs < 60 && t < 400; ++t) {
    auto g = random_graph(rng, 6, 3);
    if (g->genus() > 3) continue;
    ++graphs;
    auto pts = lattice_points(*g, 1);
    std::uniform_int_distribution<long> deg(0, 6);
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    Divisor d;
    for (long c = deg(rng); c > 0; --c) d.add(pts[pick(rng)], 1);
    if (rng() % 3 == 0) d.add(pts[pick(rng)], -1);
    Divisor k = canonical_divisor(*g);
    long lhs = rank(g, d).rank - rank(g, k - d).rank;
    if (lhs != d.degree() - g->genus() + 1)
      return {false, "Riemann-Roch fails for " + describe(*g, d) + " on a genus " + std::to_string(g->genus()) + " graph"};
    Point q = pts[pick(rng)];
    auto once = reduce(g, d, q);
    if (reduce(g, once.divisor, q).divisor != once.divisor) return {false, "reduction is not idempotent"};
    // A different representative of the same class reduces to the same divisor.
    Divisor other = reduce(g, d, pts[pick(rng)]).divisor;
    if (reduce(g, other, q).divisor != once.divisor) return {false, "reduced representative is not unique"};
  }
  return {graphs >= 50, std::to_string(graphs) + " graphs"};
}

Verdict check_cartwright_rank() {
  std::ostringstream detail;
  bool ok = true;
  for (const auto& [name, m] : std::vector<std::pair<std::string, Matroid>>{
           {"U(3,4)", Matroid::uniform(3, 4)}, {"Fano", fano()}, {"non-Fano", non_fano()}}) {
    LeviGraph levi = cartwright(m);
    long r1 = rank(levi.graph, levi.divisor, mpz_class(1)).rank;
    long r2 = rank(levi.graph, levi.divisor, mpz_class(2)).rank;
    note("Cartwright rank " + name + " N=1", r1, r2);
    note("Cartwright rank " + name + " N=2", r2, rank(levi.graph, levi.divisor, mpz_class(4)).rank);
    ok &= r1 == 2 && r2 == 2;
    detail << name << ":" << r1 << "/" << r2 << " ";
  }
  return {ok, detail.str()};
}

Verdict check_interval_matroids() {
  int count = 0;
  for (std::size_t n = 1; n <= 5; ++n) {
    auto p = interval_phi_prime(static_cast<int>(n) - 1);
    for (const auto& m : loopless_matroids(n)) {
      ++count;
      auto v = ValuatedMatroid::trop(m);
      auto s = p.image(v, std::max(kDefaultGeneratorCap, v.generators().size()));
      auto tls = is_tls(s, std::nullopt, image_rank_bound(v));
      note("interval image of a rank " + std::to_string(m.rank()) + " matroid on " + std::to_string(n), tls.r_bn);
      auto loc = local_matroid(s.translated(p.origin()));
      bool nondeg = nondegenerate(p.base + p.origin().div(), s).nondegenerate;
      if (!tls.is_tls || tls.r_bn.rank != m.rank() - 1 || !nondeg || !loc.ok() || !matroid_iso(*loc.matroid, m))
        return {false, "fails on a rank " + std::to_string(m.rank()) + " matroid on " + std::to_string(n) + " elements"};
    }
  }
  return {true, std::to_string(count) + " matroids"};
}

Verdict check_pure_dimension() {
  int tls_count = 0, total = 0;
  std::string others;
  for (const auto& f : corpus_facts()) {
    ++total;
    long r = f.tls.r_bn.rank;
    for (int d : f.maximal) {
      if (f.tls.is_tls && d != r) return {false, f.entry.name + ": maximal cell of dimension " + std::to_string(d)};
      if (d < r) return {false, f.entry.name + ": maximal cell below r_BN"};
    }
    tls_count += f.tls.is_tls;
    if (!f.tls.is_tls) others += "; not a series: " + f.entry.name;
  }
  return {tls_count >= 8, std::to_string(tls_count) + " series of " + std::to_string(total) + " modules" + others};
}

Verdict check_barbell() {
  auto r = barbell_scenario(static_cast<unsigned>(seed()));
  note_number("barbell series", r, "series_r_bn");
  note_number("barbell R(K)", r, "complete_r_bn");
  bool ok = r.passed() && r.numbers.at("complete_r_ind") == 3 && r.numbers.at("complete_r_bn") == 1 &&
            r.numbers.at("series_r_bn") == 1;
  return {ok, ok ? std::to_string(r.numbers.at("regions")) + " regions classified" : failed_checks(r)};
}

Verdict check_luo() {
  auto r = luo_scenario();
  note_number("Luo rank", r, "rank");
  bool ok = r.passed() && r.numbers.at("r_ind") == 3;
  return {ok, ok ? "r_ind 3" : failed_checks(r)};
}

Verdict check_loop_of_loops() {
  std::string seen;
  bool ok = true;
  for (int x : {2, 3, 4}) {
    auto r = loop_of_loops_scenario(5, 4, 3, x);
    note_number("loop of loops rank x=" + std::to_string(x), r, "rank");
    if (r.numbers.count("series_r_bn")) note_number("loop of loops series x=" + std::to_string(x), r, "series_r_bn");
    bool exists = r.numbers.at("tls_exists") == 1;
    ok &= r.passed() && exists == (x == 3);
    seen += (seen.empty() ? "" : ",") + std::string(exists ? "true" : "false");
  }
  return {ok, "verdicts " + seen};
}

Verdict check_vamos() {
  auto r = vamos_scenario();
  note_number("Vamos series", r, "r_bn");
  bool ok = r.passed() && r.numbers.at("r_bn") == 3 && r.numbers.at("rank3_quotients_with_flats") == 0;
  return {ok, ok ? "dimension 3, no rank-3 quotient holds the three flats" : failed_checks(r)};
}

Verdict check_adjoint_pipeline() {
  std::string detail;
  bool ok = true;
  for (const auto& [name, m, fano_flag] :
       std::vector<std::tuple<std::string, Matroid, bool>>{{"U(3,4)", Matroid::uniform(3, 4), false}, {"Fano", fano(), true}}) {
    auto r = cartwright_scenario(m);
    note_number("Cartwright series " + name, r, "r_bn");
    ok &= r.passed() && r.numbers.at("fano_restriction") == (fano_flag ? 1 : 0);
    detail += name + (r.passed() ? " ok " : " " + failed_checks(r) + " ");
  }
  return {ok, detail};
}

Verdict check_local_is_initial() {
  // The fixed example: U(2,4) with its first coordinate forgotten lands on U(2,3).
  auto p = interval_phi_prime(2);
  Parametrization forget;
  forget.images.push_back(std::nullopt);
  for (const auto& f : p.map.images) forget.images.push_back(f);
  auto fixed = section_and_submatroid(ValuatedMatroid::trop(Matroid::uniform(2, 4)), forget, p.base, p.origin());
  if (!fixed.ok() || !(*fixed.local == Matroid::uniform(2, 3))) return {false, "U(2,4) example: " + fixed.defect};

  std::mt19937_64 rng(seed() + 10);
  int done = 0;
  for (int attempt = 0; done < 10 && attempt < 200; ++attempt) {
    std::size_t n = 3 + rng() % 2;
    auto ms = loopless_matroids(n);
    const Matroid& m = ms[rng() % ms.size()];
    auto q = interval_phi_prime(static_cast<int>(n) - 1, make_rational(static_cast<long>(n) + 1 + static_cast<long>(rng() % 3), 1));
    auto v = ValuatedMatroid::trop(m);
    // A random point of Trop(M) as a combination of its generators.
    std::vector<ExtRational> coeffs;
    for (std::size_t i = 0; i < v.generators().size(); ++i)
      coeffs.push_back(rng() % 4 == 0 ? ExtRational::infinity() : ExtRational(make_rational(static_cast<long>(rng() % 3), 2)));
    if (std::all_of(coeffs.begin(), coeffs.end(), [](const ExtRational& c) { return c.is_infinite(); })) continue;
    TropVector w = trop_combination(v.generators(), coeffs);
    if (std::all_of(w.begin(), w.end(), [](const ExtRational& x) { return x.is_infinite(); })) continue;
    PLFunction phi = q.map.apply(w);
    auto s = q.image(v, std::max(kDefaultGeneratorCap, v.generators().size()));
    if (!nondegenerate(q.base + phi.div(), s).nondegenerate) continue;
    auto rep = section_and_submatroid(v, q.map, q.base, phi);
    if (!rep.ok()) return {false, "random case " + std::to_string(done) + ": " + rep.defect};
    ++done;
  }
  return {done == 10, std::to_string(done) + " random parametrizations plus the U(2,4) example"};
}

Verdict check_canonical_local() {
  auto t = theta();
  TropSubmodule s(canonical_divisor(*t),
                  {PLFunction::constant(t), theta_tent(t, "a"), theta_tent(t, "b"), theta_tent(t, "c")});
  auto loc = local_matroid(s);
  auto r = r_bn(s);
  note("theta canonical", r);
  bool theta_ok = loc.ok() && *loc.matroid == Matroid::uniform(2, 3) && r.rank == rank(t, s.base()).rank &&
                  nondegenerate(s.base(), s).nondegenerate;

  auto chain = two_loop_chain();
  auto tent = [&](const std::string& loop) {
    std::vector<std::vector<Knot>> ks;
    for (std::size_t e = 0; e < chain->edge_count(); ++e)
      ks.push_back(chain->edge(e).id == loop ? std::vector<Knot>{{0, 0}, {1, 1}, {2, 0}} : std::vector<Knot>{{0, 0}, {2, 0}});
    return PLFunction(chain, ks);
  };
  TropSubmodule c(canonical_divisor(*chain), {PLFunction::constant(chain), tent("l"), tent("r")});
  bool chain_degenerate = !nondegenerate(c.base(), c).nondegenerate;
  return {theta_ok && chain_degenerate,
          std::string("theta ") + (theta_ok ? "U(2,3)" : "wrong") + ", chain " + (chain_degenerate ? "degenerate" : "nondegenerate")};
}

Verdict check_hyperelliptic() {
  auto r = hyperelliptic_chain_scenario(static_cast<unsigned>(seed()));
  bool ok = r.passed() && r.numbers.at("realizable_dimension") == 3 && r.numbers.at("single_tls_equals_locus") == 0;
  return {ok, ok ? "realizable cell of dimension 3 > g-1 = 2: no single TLS equals Real" : failed_checks(r)};
}

Verdict check_slope_counts() {
  int tangents = 0, series = 0;
  for (const auto& f : corpus_facts()) {
    if (!f.tls.is_tls) continue;
    ++series;
    auto need = static_cast<std::size_t>(f.tls.r_bn.rank + 1);
    for (const auto& z : refinement_tangents(f.entry.module)) {
      ++tangents;
      if (slopes_along(f.entry.module, z).size() != need) return {false, f.entry.name + ": wrong slope count"};
    }
  }
  return {series > 0, std::to_string(tangents) + " tangents over " + std::to_string(series) + " series"};
}

Verdict check_lattice_stability() {
  for (const auto& f : corpus_facts()) note("corpus " + f.entry.name, f.tls.r_bn);
  for (const auto& s : stability)
    if (s.at_double != s.rank)
      return {false, s.what + ": " + std::to_string(s.rank) + " becomes " + std::to_string(s.at_double)};
  return {!stability.empty(), std::to_string(stability.size()) + " results recomputed"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double budget_seconds;  // 0 when no runtime target is set
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "Riemann-Roch and reduction on random graphs", 60, check_riemann_roch},
      {2, "Cartwright divisors have rank 2", 120, check_cartwright_rank},
      {3, "interval images of loopless matroids on <= 5 elements", 600, check_interval_matroids},
      {4, "pure dimension and lower bound on cells", 0, check_pure_dimension},
      {5, "barbell canonical series", 0, check_barbell},
      {6, "Luo graph has no dimension-1 series", 0, check_luo},
      {7, "loop of loops verdicts at x = 2, 3, 4", 0, check_loop_of_loops},
      {8, "Vamos series and quotient search", 600, check_vamos},
      {9, "adjoint pipeline on U(3,4) and Fano", 0, check_adjoint_pipeline},
      {10, "local matroid embeds in the initial matroid", 0, check_local_is_initial},
      {11, "canonical local matroid and degeneracy", 0, check_canonical_local},
      {12, "hyperelliptic chain realizable locus", 0, check_hyperelliptic},
      {13, "slope counts along tangents", 0, check_slope_counts},
      {14, "r_BN unchanged at doubled denominator", 0, check_lattice_stability},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && secs > c.budget_seconds) {
      v.pass = false;
      v.detail += " (over the " + std::to_string(static_cast<int>(c.budget_seconds)) + " s budget)";
    }
    failures += !v.pass;
    std::printf("[%s] %2d %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.title, v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
