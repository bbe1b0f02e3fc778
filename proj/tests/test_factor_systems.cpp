#include <gtest/gtest.h>

#include "instances.hpp"

using namespace ospace;
using inst::w;

TEST(Thistle, Shapes) {
  auto a = inst::z2z3();
  EXPECT_EQ(a.graph().vertex_count(), 2);
  EXPECT_EQ(a.graph().unoriented_count(), 1);
  EXPECT_FALSE(a.is_free(0));
  EXPECT_FALSE(a.is_free(1));
  auto b = inst::thistle(3);
  EXPECT_EQ(b.graph().vertex_count(), 4);
  auto centre = b.graph().find_vertex("v0").value();
  EXPECT_TRUE(b.is_free(centre));
  EXPECT_EQ(b.graph().degree(centre), 3);
  auto c = build_thistle({cyclic_group(2), cyclic_group(3)}, 1);
  EXPECT_EQ(c.graph().degree(c.graph().find_vertex("v0").value()), 4);
  EXPECT_THROW(build_thistle({}, 1), Error);
  EXPECT_THROW(build_thistle({cyclic_group(1)}, 2), Error);
}

TEST(Thistle, ValidForManyConfigurations) {
  for (int k = 0; k <= 4; ++k)
    for (int r = 0; r <= 3; ++r) {
      if (k + r < 2 || (k == 0 && r == 1)) continue;
      auto x = build_thistle(std::vector<FiniteGroupTable>(k, symmetric_group_3()), r);
      EXPECT_TRUE(validate(x).ok()) << k << " " << r;
      EXPECT_EQ(rank_and_factors(x).factors, k);
      EXPECT_EQ(rank_and_factors(x).rank, r);
      EXPECT_EQ(covolume(x), 1);
    }
}

TEST(FactorSystem, ReadOffVertexGroups) {
  auto f = ffs_of(inst::thistle(3));
  EXPECT_EQ(f.size(), 3u);
  EXPECT_TRUE(f.is_proper());
  SerreGraph g;
  int v = g.add_vertex("v");
  g.add_edge("x", "X", v, v);
  g.add_edge("y", "Y", v, v);
  EXPECT_EQ(ffs_of(GraphOfGroups(g, {Rational(1), Rational(1)}, {VertexGroup{}})).size(), 0u);
}

TEST(FactorSystem, CommonFixedVertex) {
  auto x = inst::thistle(3);
  EXPECT_TRUE(common_fixed_vertex({w("v1.g1", x)}, x));
  EXPECT_TRUE(common_fixed_vertex({w("v2.g1*v1.g1*v2.g1", x)}, x));
  EXPECT_FALSE(common_fixed_vertex({w("v1.g1", x), w("v2.g1", x)}, x));
  EXPECT_FALSE(common_fixed_vertex({w("v1.g1*v2.g1", x)}, x));
}

TEST(FactorSystem, LeqIsReflexive) {
  auto x = inst::thistle(3);
  EXPECT_TRUE(ffs_leq(ffs_of(x), ffs_of(x), identity_homomorphism(x)));
}

TEST(FactorSystem, JoinedFactorsAreNotBelowSeparateOnes) {
  // {[A*B]} <= {[A],[B]} fails: a.b is hyperbolic in the Z2*Z2 edge.
  auto sep = inst::thistle(2);
  SerreGraph g;
  g.add_vertex("u");
  GraphOfGroups joined(g, {}, {VertexGroup{{cyclic_group(2), cyclic_group(2)}}});
  Homomorphism dict;
  dict.images[Syllable::vertex(0, 1, 0)] = w("v1.g1", sep);
  dict.images[Syllable::vertex(0, 1, 1)] = w("v2.g1", sep);
  FreeFactorSystem f{joined, {0}};
  EXPECT_FALSE(ffs_leq(f, ffs_of(sep), dict));
}
