#include "support.hpp"
#include "tropls/matroid.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

using namespace testkit;

namespace {

const ExtRational INF = ExtRational::infinity();

// Vectors of the projective plane over two elements, ranked over GF(2) or over the rationals.
std::vector<unsigned> plane_points() { return {1, 2, 3, 4, 5, 6, 7}; }

int gf2_rank(std::vector<unsigned> vs) {
  int r = 0;
  for (unsigned bit = 4; bit; bit >>= 1) {
    auto it = std::find_if(vs.begin(), vs.end(), [&](unsigned v) { return v & bit; });
    if (it == vs.end()) continue;
    unsigned p = *it;
    vs.erase(it);
    for (auto& v : vs)
      if (v & bit) v ^= p;
    ++r;
  }
  return r;
}

int rational_rank(const std::vector<unsigned>& vs) {
  std::vector<std::vector<Rational>> m;
  for (unsigned v : vs) m.push_back({Rational(v >> 2 & 1), Rational(v >> 1 & 1), Rational(v & 1)});
  int r = 0;
  for (std::size_t c = 0; c < 3; ++c) {
    std::size_t p = static_cast<std::size_t>(r);
    while (p < m.size() && sgn(m[p][c]) == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[static_cast<std::size_t>(r)]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == static_cast<std::size_t>(r) || sgn(m[i][c]) == 0) continue;
      Rational f = m[i][c] / m[static_cast<std::size_t>(r)][c];
      for (std::size_t j = 0; j < 3; ++j) m[i][j] -= f * m[static_cast<std::size_t>(r)][j];
    }
    ++r;
  }
  return r;
}

template <class RankFn>
std::vector<ElementSet> bases_from_vectors(RankFn rank_fn) {
  std::vector<ElementSet> out;
  auto pts = plane_points();
  for (ElementSet s = 0; s < 128; ++s) {
    if (set_size(s) != 3) continue;
    std::vector<unsigned> vs;
    for (int e : elements(s)) vs.push_back(pts[static_cast<std::size_t>(e)]);
    if (rank_fn(vs) == 3) out.push_back(s);
  }
  return out;
}

// Every basis family of the given rank on n elements that satisfies exchange.
std::vector<Matroid> all_matroids(std::size_t n, int rank) {
  std::vector<ElementSet> cand;
  for (ElementSet s = 0; s <= full_set(n); ++s)
    if (set_size(s) == rank) cand.push_back(s);
  std::vector<Matroid> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << cand.size()); ++mask) {
    std::vector<ElementSet> b;
    for (std::size_t i = 0; i < cand.size(); ++i)
      if (mask >> i & 1) b.push_back(cand[i]);
    try {
      out.push_back(Matroid::from_bases(n, b));
    } catch (const InputError&) {
    }
  }
  return out;
}

Matroid relabel(const Matroid& m, const std::vector<int>& perm) {
  std::vector<ElementSet> b;
  for (ElementSet s : m.bases()) {
    ElementSet t = 0;
    for (int e : elements(s)) t |= 1u << perm[static_cast<std::size_t>(e)];
    b.push_back(t);
  }
  return Matroid::from_bases(m.size(), b);
}

std::vector<Matroid> small_corpus() {
  std::vector<Matroid> out{Matroid::uniform(2, 3), Matroid::uniform(2, 4), Matroid::uniform(3, 5), fano(),
                           non_fano(), vamos(), vamos_relaxed(), Matroid::boolean(4)};
  for (std::size_t n = 1; n <= 4; ++n)
    for (auto& m : loopless_matroids(n)) out.push_back(m);
  return out;
}

TropVector random_member(std::mt19937_64& rng, const std::vector<TropVector>& gens, bool finite) {
  std::uniform_int_distribution<int> coef(0, 4), drop(0, 3);
  for (;;) {
    std::vector<ExtRational> a;
    for (std::size_t i = 0; i < gens.size(); ++i) a.push_back(drop(rng) == 0 ? INF : ExtRational(Rational(coef(rng))));
    auto w = trop_combination(gens, a);
    if (!finite || std::all_of(w.begin(), w.end(), [](const ExtRational& x) { return x.is_finite(); })) return w;
  }
}

}  // namespace

TEST(Matroid, ConstructionExamples) {
  auto v8 = vamos();
  EXPECT_EQ(v8.rank(), 4);
  EXPECT_TRUE(v8.is_flat(make_set({0, 1, 2, 3})));
  EXPECT_EQ(v8.rank(make_set({0, 1, 2, 3})), 3);
  EXPECT_FALSE(v8.is_flat(make_set({4, 5, 6, 7})));
  // 5 four-point hyperplanes plus the 56 - 20 three-sets outside them.
  EXPECT_EQ(v8.hyperplanes().size(), 41u);
  EXPECT_TRUE(vamos_relaxed().is_basis(make_set({1, 2, 6, 7})));
  auto u23 = Matroid::from_nonspanning_circuits(2, 3, {});
  EXPECT_EQ(u23, Matroid::uniform(2, 3));
  EXPECT_EQ(u23.closure(0), 0u);
  EXPECT_EQ(u23.hyperplanes(), (std::vector<ElementSet>{1, 2, 4}));
  EXPECT_THROW(Matroid::from_bases(4, {make_set({0, 1}), make_set({2, 3})}), InputError);
  try {
    Matroid::from_bases(4, {make_set({0, 1}), make_set({2, 3})});
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("{0,1}"), std::string::npos);
  }
  EXPECT_THROW(Matroid::from_nonspanning_circuits(2, 4, {make_set({0, 1, 2})}), InputError);
}

TEST(Matroid, FanoAgreesWithCoordinates) {
  EXPECT_EQ(fano().bases(), bases_from_vectors(gf2_rank));
  EXPECT_EQ(non_fano().bases(), bases_from_vectors(rational_rank));
  EXPECT_EQ(fano().flats(2).size(), 7u);
  EXPECT_EQ(non_fano().flats(2).size(), 9u);
  EXPECT_FALSE(matroid_iso(fano(), non_fano()));
}

TEST(Matroid, FlatLatticeAxioms) {
  for (const auto& m : small_corpus()) {
    const auto& fl = m.flats();
    for (ElementSet a : fl)
      for (ElementSet b : fl) EXPECT_TRUE(m.is_flat(a & b));
    // Covers partition the complement and chains have length equal to the rank.
    for (ElementSet f : fl) {
      if (f == m.ground()) continue;
      ElementSet seen = 0;
      for (ElementSet g : fl)
        if (contains(g, f) && m.rank(g) == m.rank(f) + 1) {
          EXPECT_EQ(seen & g & ~f, 0u);
          seen |= g & ~f;
        }
      EXPECT_EQ(seen | f, m.ground());
    }
    auto rebuilt = from_flats(m.size(), fl);
    ASSERT_TRUE(rebuilt.matroid) << rebuilt.defect;
    EXPECT_EQ(*rebuilt.matroid, m);
  }
}

TEST(Matroid, FromFlatsReportsDefects) {
  EXPECT_FALSE(from_flats(3, {0, 1, 2}).matroid);
  auto bad = from_flats(3, {0, make_set({0, 1}), make_set({1, 2}), 7});
  EXPECT_FALSE(bad.matroid);
  EXPECT_NE(bad.defect.find("intersection"), std::string::npos);
  auto gap = from_flats(3, {0, 1, 7});
  EXPECT_FALSE(gap.matroid);
  EXPECT_NE(gap.defect.find("miss"), std::string::npos);
}

TEST(Matroid, QuotientBasics) {
  for (const auto& m : small_corpus()) {
    EXPECT_TRUE(is_quotient(m, m));
    if (m.is_loopless() && m.size() > 0) EXPECT_TRUE(is_quotient(Matroid::uniform(1, m.size()), m));
  }
  // Quotients of equal rank coincide.
  for (std::size_t n = 2; n <= 4; ++n)
    for (int r = 1; r <= static_cast<int>(n); ++r) {
      auto all = all_matroids(n, r);
      for (const auto& a : all)
        for (const auto& b : all)
          if (is_quotient(a, b)) EXPECT_EQ(a, b);
    }
}

TEST(Matroid, ElementaryQuotientsMatchBruteForce) {
  for (std::size_t n = 2; n <= 5; ++n)
    for (const auto& m : loopless_matroids(n)) {
      if (m.rank() < 2 || (n == 5 && m.rank() > 3)) continue;
      std::set<std::vector<ElementSet>> expect, got;
      for (const auto& q : all_matroids(n, m.rank() - 1))
        if (is_quotient(q, m)) expect.insert(q.bases());
      for (const auto& q : elementary_quotients(m)) got.insert(q.bases());
      EXPECT_EQ(got, expect);
    }
}

TEST(Matroid, VamosHasNoQuotientWithDesignatedFlats) {
  auto q = elementary_quotients(vamos(), {make_set({0, 1, 2, 3}), make_set({1, 2, 4, 5}), make_set({0, 3, 4, 5})});
  EXPECT_TRUE(q.empty());
  // Two of the three are fine.
  EXPECT_FALSE(elementary_quotients(vamos(), {make_set({0, 1, 2, 3}), make_set({1, 2, 4, 5})}).empty());
}

TEST(Matroid, SubmatroidDefinitionsAgree) {
  std::mt19937_64 rng(seed() + 40);
  for (const auto& m : small_corpus()) {
    for (int t = 0; t < 4; ++t) {
      ElementSet keep = static_cast<ElementSet>(rng()) & m.ground();
      if (m.rank(keep) != m.rank()) continue;
      auto sub = submatroid(m, keep);
      auto kept = elements(keep);
      auto lift = [&](ElementSet s) {
        ElementSet o = 0;
        for (int i : elements(s)) o |= 1u << kept[static_cast<std::size_t>(i)];
        return o;
      };
      for (ElementSet s = 0; s <= sub.ground(); ++s) EXPECT_EQ(sub.rank(s), m.rank(lift(s)));
      std::set<ElementSet> traces;
      for (ElementSet f : m.flats()) traces.insert(f & keep);
      std::set<ElementSet> sub_flats;
      for (ElementSet f : sub.flats()) sub_flats.insert(lift(f));
      EXPECT_EQ(sub_flats, traces);
    }
    EXPECT_EQ(submatroid(m, m.ground()), m);
  }
  EXPECT_EQ(submatroid(Matroid::uniform(2, 4), make_set({1, 2, 3})), Matroid::uniform(2, 3));
  EXPECT_THROW(submatroid(Matroid::uniform(2, 4), make_set({1})), InputError);
}

TEST(Matroid, Simplify) {
  // U(2,3) with element 0 doubled as element 3, plus a loop at 4.
  auto m = Matroid::from_bases(5, {make_set({0, 1}), make_set({0, 2}), make_set({1, 2}), make_set({3, 1}), make_set({3, 2})});
  auto s = simplify(m);
  EXPECT_EQ(s.matroid.size(), 3u);
  EXPECT_TRUE(matroid_iso(s.matroid, Matroid::uniform(2, 3)));
  EXPECT_EQ(s.element_map, (std::vector<int>{0, 1, 2, 0, -1}));
  EXPECT_EQ(m.flats().size(), s.matroid.flats().size());
  EXPECT_EQ(simplify(fano()).matroid, fano());
}

TEST(Matroid, IsomorphismSearch) {
  EXPECT_TRUE(matroid_iso(vamos(), vamos()));
  auto parallel = Matroid::from_bases(3, {make_set({0, 2}), make_set({1, 2})});
  EXPECT_FALSE(matroid_iso(Matroid::uniform(2, 3), parallel));
  std::mt19937_64 rng(seed() + 41);
  for (const auto& m : {vamos(), fano(), non_fano()}) {
    std::vector<int> perm(m.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto image = matroid_iso(m, relabel(m, perm));
    ASSERT_TRUE(image);
    EXPECT_EQ(relabel(m, *image), relabel(m, perm));
  }
  EXPECT_FALSE(matroid_iso(vamos(), vamos_relaxed()));
}

TEST(Matroid, LooplessCountsUpToIsomorphism) {
  // Known counts of loopless matroids on 1..4 elements up to isomorphism.
  EXPECT_EQ(loopless_matroids(1).size(), 1u);
  EXPECT_EQ(loopless_matroids(2).size(), 2u);
  EXPECT_EQ(loopless_matroids(3).size(), 4u);
  EXPECT_EQ(loopless_matroids(4).size(), 9u);
}

TEST(Matroid, Adjoints) {
  auto u34 = Matroid::uniform(3, 4);
  auto w = free_adjoint(u34);
  EXPECT_EQ(w.size(), 6u);
  auto hyper = u34.hyperplanes();
  for (int e = 0; e < 4; ++e) {
    ElementSet through = 0;
    for (std::size_t i = 0; i < hyper.size(); ++i)
      if (hyper[i] >> e & 1) through |= 1u << i;
    EXPECT_EQ(set_size(through), 3);
    EXPECT_TRUE(w.is_flat(through));
    EXPECT_EQ(w.rank(through), 2);
  }
  EXPECT_TRUE(is_adjoint(w, u34));
  auto wf = free_adjoint(fano());
  EXPECT_TRUE(is_adjoint(wf, fano()));
  EXPECT_TRUE(matroid_iso(wf, fano()));
  EXPECT_FALSE(is_adjoint(Matroid::boolean(3), fano()));
  EXPECT_FALSE(is_adjoint(Matroid::uniform(3, 6), u34));
  EXPECT_THROW(free_adjoint(Matroid::uniform(2, 3)), InputError);
}

TEST(Matroid, TropicalMembership) {
  for (const auto& m : small_corpus()) {
    TropVector zero(m.size(), ExtRational(0));
    EXPECT_EQ(trop_membership(zero, m), m.is_loopless());
  }
  auto u23 = Matroid::uniform(2, 3);
  TropVector single{ExtRational(0), INF, INF};
  EXPECT_FALSE(trop_membership(single, u23));
  TropVector pair{ExtRational(0), ExtRational(0), INF};
  EXPECT_TRUE(trop_membership(pair, u23));
  // Supports of members are exactly the covectors.
  std::mt19937_64 rng(seed() + 42);
  for (const auto& m : {fano(), vamos(), Matroid::uniform(2, 4)}) {
    auto v = ValuatedMatroid::trop(m);
    std::set<ElementSet> covectors;
    for (ElementSet f : m.flats()) covectors.insert(m.ground() & ~f);
    std::set<ElementSet> seen;
    for (int t = 0; t < 400; ++t) {
      auto w = random_member(rng, v.generators(), false);
      ElementSet s = 0;
      for (std::size_t j = 0; j < w.size(); ++j)
        if (w[j].is_finite()) s |= 1u << j;
      EXPECT_TRUE(covectors.count(s));
      EXPECT_TRUE(trop_membership(w, m));
      seen.insert(s);
    }
    EXPECT_EQ(v.underlying(), m);
    for (ElementSet c : covectors) {
      TropVector ind(m.size(), INF);
      for (int j : elements(c)) ind[static_cast<std::size_t>(j)] = ExtRational(0);
      EXPECT_TRUE(trop_membership(ind, m));
    }
  }
}

TEST(Matroid, SpanMembershipMatchesGridSearch) {
  std::mt19937_64 rng(seed() + 43);
  std::uniform_int_distribution<int> val(0, 3), pick(0, 2);
  for (int t = 0; t < 60; ++t) {
    std::size_t n = 2 + static_cast<std::size_t>(t % 2), k = 2;
    std::vector<TropVector> gens(k, TropVector(n));
    for (auto& g : gens)
      for (auto& x : g) x = ExtRational(Rational(val(rng)));
    TropVector w = gens[static_cast<std::size_t>(pick(rng)) % k];
    w[static_cast<std::size_t>(pick(rng)) % n] = ExtRational(Rational(w[0].value() - 1));
    bool found = false;
    for (int a = -8; a <= 8 && !found; ++a)
      for (int b = -8; b <= 9 && !found; ++b) {
        std::vector<ExtRational> c{ExtRational(Rational(a)), b == 9 ? INF : ExtRational(Rational(b))};
        found = trop_combination(gens, c) == w;
      }
    EXPECT_EQ(span_membership(w, gens).has_value(), found);
  }
  // Free module: every vector is a member.
  auto free3 = ValuatedMatroid::free_module(3);
  EXPECT_TRUE(span_membership(TropVector{ExtRational(1), INF, ExtRational(-2)}, free3));
  for (const auto& g : free3.generators()) {
    auto lam = span_membership(g, free3);
    ASSERT_TRUE(lam);
  }
}

TEST(Matroid, InitialMatroidExamples) {
  for (const auto& m : small_corpus()) {
    if (!m.is_loopless() || m.size() == 0) continue;
    EXPECT_EQ(initial_matroid(ValuatedMatroid::trop(m), TropVector(m.size(), ExtRational(0))), m);
  }
  auto free4 = ValuatedMatroid::free_module(4);
  TropVector w{ExtRational(1), ExtRational(q(1, 2)), ExtRational(0), ExtRational(-3)};
  EXPECT_EQ(initial_matroid(free4, w), Matroid::boolean(4));
  EXPECT_THROW(initial_matroid(ValuatedMatroid::trop(Matroid::uniform(2, 3)),
                               TropVector{ExtRational(0), ExtRational(1), ExtRational(2)}),
               InputError);
}

TEST(Matroid, InitialMatroidMatchesCoefficientSweep) {
  std::mt19937_64 rng(seed() + 44);
  for (const auto& m : {Matroid::uniform(2, 3), Matroid::uniform(2, 4), Matroid::uniform(3, 4),
                        Matroid::from_bases(4, {make_set({0, 2}), make_set({0, 3}), make_set({1, 2}), make_set({1, 3})})}) {
    auto v = ValuatedMatroid::trop(m);
    const auto& gens = v.generators();
    for (int t = 0; t < 6; ++t) {
      auto w = random_member(rng, gens, true);
      auto lam = span_membership(w, v);
      ASSERT_TRUE(lam);
      // Sweep every coefficient over lambda, lambda + 1/2, ..., lambda + 3 and infinity.
      std::set<ElementSet> supports;
      std::vector<int> step(gens.size(), 0);
      for (;;) {
        std::vector<ExtRational> a;
        for (std::size_t i = 0; i < gens.size(); ++i)
          a.push_back(step[i] == 7 || (*lam)[i].is_infinite() ? INF
                                                               : ExtRational(Rational((*lam)[i].value() + q(step[i], 2))));
        auto w2 = trop_combination(gens, a);
        ElementSet s = 0;
        for (std::size_t j = 0; j < w.size(); ++j)
          if (w2[j] != w[j]) s |= 1u << j;
        supports.insert(s);
        std::size_t i = 0;
        while (i < step.size() && step[i] == 7) step[i++] = 0;
        if (i == step.size()) break;
        ++step[i];
      }
      auto init = initial_matroid(v, w);
      std::set<ElementSet> flats(init.flats().begin(), init.flats().end());
      EXPECT_EQ(flats, supports);
      EXPECT_EQ(init.rank(), m.rank());
    }
  }
}
