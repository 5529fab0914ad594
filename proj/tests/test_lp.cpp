#include "support.hpp"
#include "tropls/lp.hpp"

#include <gtest/gtest.h>

using namespace testkit;

namespace {

// Best objective over all vertices obtained by making two constraints tight (two variables,
// bounded feasible region). Returns nullopt when no vertex is feasible.
std::optional<Rational> best_vertex(const LinearProgram& lp, const std::vector<Rational>& c) {
  std::optional<Rational> best;
  for (std::size_t i = 0; i < lp.rows.size(); ++i)
    for (std::size_t j = i + 1; j < lp.rows.size(); ++j) {
      const auto &a = lp.rows[i], &b = lp.rows[j];
      Rational det = a[0] * b[1] - a[1] * b[0];
      if (sgn(det) == 0) continue;
      Rational x = (lp.rhs[i] * b[1] - a[1] * lp.rhs[j]) / det;
      Rational y = (a[0] * lp.rhs[j] - lp.rhs[i] * b[0]) / det;
      bool ok = true;
      for (std::size_t k = 0; k < lp.rows.size() && ok; ++k)
        ok = lp.rows[k][0] * x + lp.rows[k][1] * y <= lp.rhs[k];
      if (!ok) continue;
      Rational v = c[0] * x + c[1] * y;
      if (!best || v > *best) best = v;
    }
  return best;
}

}  // namespace

TEST(Lp, SmallExamples) {
  LinearProgram lp(2);
  lp.less_equal({1, 1}, 4);
  lp.less_equal({1, 0}, 3);
  lp.less_equal({-1, 0}, 0);
  lp.less_equal({0, -1}, 0);
  auto r = maximize(lp, {2, 1});
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_EQ(r.value, 7);
  EXPECT_EQ(r.x[0], 3);
  EXPECT_EQ(r.x[1], 1);

  auto open = maximize(lp, {-1, -1});
  EXPECT_EQ(open.value, 0);

  LinearProgram ray(2);
  ray.less_equal({-1, 0}, 0);
  EXPECT_EQ(maximize(ray, {1, 0}).status, LpStatus::unbounded);
  EXPECT_EQ(maximize(ray, {0, 1}).status, LpStatus::unbounded);
  EXPECT_EQ(maximize(ray, {-1, 0}).status, LpStatus::optimal);

  LinearProgram empty(1);
  empty.less_equal({1}, 0);
  empty.less_equal({-1}, -1);
  EXPECT_EQ(maximize(empty, {1}).status, LpStatus::infeasible);
  EXPECT_FALSE(is_feasible(empty));
}

TEST(Lp, Equalities) {
  LinearProgram lp(3);
  lp.equal({1, 1, 1}, 1);
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<Rational> row(3, Rational(0));
    row[i] = -1;
    lp.less_equal(row, 0);
  }
  auto r = maximize(lp, {1, 2, 3});
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_EQ(r.value, 3);
  lp.equal({0, 0, 1}, 0);
  EXPECT_EQ(maximize(lp, {1, 2, 3}).value, 2);
  lp.equal({0, 1, 0}, q(1, 3));
  r = maximize(lp, {1, 0, 0});
  EXPECT_EQ(r.value, q(2, 3));
}

TEST(Lp, InteriorPoints) {
  LinearProgram seg(1);
  seg.less_equal({1}, 1);
  seg.less_equal({-1}, 0);
  auto ip = interior_point(seg, {true, true});
  ASSERT_TRUE(ip);
  EXPECT_EQ(ip->margin, q(1, 2));
  EXPECT_EQ(ip->x[0], q(1, 2));
  LinearProgram flat(1);
  flat.less_equal({1}, 0);
  flat.less_equal({-1}, 0);
  EXPECT_FALSE(interior_point(flat, {true, false}));
  EXPECT_TRUE(interior_point(flat, {false, false}));
}

TEST(Lp, MatchesVertexEnumeration) {
  std::mt19937_64 rng(seed() + 30);
  std::uniform_int_distribution<int> coef(-4, 4), bound(-3, 6);
  for (int t = 0; t < 200; ++t) {
    LinearProgram lp(2);
    // A box keeps the region bounded so the vertex oracle applies.
    lp.less_equal({1, 0}, 5);
    lp.less_equal({-1, 0}, 5);
    lp.less_equal({0, 1}, 5);
    lp.less_equal({0, -1}, 5);
    int extra = 1 + t % 5;
    for (int k = 0; k < extra; ++k) lp.less_equal({coef(rng), coef(rng)}, bound(rng));
    std::vector<Rational> c{coef(rng), coef(rng)};
    auto r = maximize(lp, c);
    auto oracle = best_vertex(lp, c);
    if (!oracle) {
      EXPECT_EQ(r.status, LpStatus::infeasible);
      continue;
    }
    ASSERT_EQ(r.status, LpStatus::optimal);
    EXPECT_EQ(r.value, *oracle);
    for (std::size_t k = 0; k < lp.rows.size(); ++k)
      EXPECT_LE(lp.rows[k][0] * r.x[0] + lp.rows[k][1] * r.x[1], lp.rhs[k]);
  }
}
