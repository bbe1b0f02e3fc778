#include <gtest/gtest.h>

#include "instances.hpp"

using namespace ospace;
using inst::w;

namespace {
std::vector<int> edges(const GraphOfGroups& x, std::initializer_list<const char*> ids) {
  std::vector<int> out;
  for (const char* id : ids) out.push_back(SerreGraph::unoriented(x.graph().find_edge(id).value()));
  return out;
}

GraphOfGroups rose2() {
  SerreGraph g;
  int v = g.add_vertex("v");
  g.add_edge("p1", "p1'", v, v);
  g.add_edge("p2", "p2'", v, v);
  return GraphOfGroups(g, {Rational(1, 2), Rational(1, 2)}, {VertexGroup{{cyclic_group(2)}}});
}
}  // namespace

TEST(Representative, CyclicAtCenterIsSpokeRotation) {
  auto a = inst::cyclic();
  auto s = find_isometric_representative(a, barycenter(3), 6);
  ASSERT_TRUE(s.found());
  EXPECT_EQ(s.lambda_r, 1);
  const auto& x = a.graph();
  auto c = edge_orbit_cycle_check(*s.rep);
  EXPECT_TRUE(c.single_cycle);
  EXPECT_EQ(format_cycles(c, x), "(e1 e2 e3)");
  for (const auto& [h, h2] : s.rep->decoration) {
    EXPECT_EQ(h, -1);
    EXPECT_EQ(h2, 0);
  }
  EXPECT_TRUE(s.rep->conjugator.empty());
}

TEST(Representative, IdentityIsIdentityMap) {
  auto x = build_thistle({cyclic_group(2), cyclic_group(3)}, 1);
  auto s = find_isometric_representative(OuterAutomorphism::identity(x), x.lengths(), 4);
  ASSERT_TRUE(s.found());
  for (int v = 0; v < x.graph().vertex_count(); ++v) EXPECT_EQ(s.rep->vertex_map[v], v);
  for (int e = 0; e < x.graph().edge_count(); ++e) EXPECT_EQ(s.rep->edge_map[e], e);
}

TEST(Representative, NoneAtSkewMetric) {
  auto s = find_isometric_representative(inst::cyclic(), {Rational(1, 2), Rational(1, 4), Rational(1, 4)}, 6);
  EXPECT_FALSE(s.found());
  EXPECT_EQ(s.lambda_r, Rational(3, 2));
}

TEST(Representative, TransportReproducesTwistedLengths) {
  for (const auto& a : {inst::cyclic(), inst::double_swap()}) {
    const int n = a.graph().graph().unoriented_count();
    auto s = find_isometric_representative(a, barycenter(n), 6);
    ASSERT_TRUE(s.found());
    const auto& x = a.graph();
    for (const auto& c : enumerate_candidates(x))
      EXPECT_EQ(twisted_translation_length(a, c.witness), translation_length(transport(*s.rep, c.witness, x), x));
  }
}

TEST(Representative, FindsNonTrivialVertexIsomorphism) {
  // Z3 * Z3 with a1 -> a2^2, a2 -> a1: needs the inverting isomorphism on one end.
  auto x = inst::thistle(2, 3);
  auto fwd = inst::images(x, {{"v1.g1", "v2.g2"}, {"v2.g1", "v1.g1"}});
  auto bwd = inst::images(x, {{"v2.g2", "v1.g1"}, {"v1.g1", "v2.g1"}});
  OuterAutomorphism a(x, fwd, bwd);
  auto s = find_isometric_representative(a, {Rational(1)}, 4);
  ASSERT_TRUE(s.found());
  EXPECT_EQ(s.rep->vertex_map[0], 1);
}

TEST(EdgeCycles, Examples) {
  auto s = find_isometric_representative(inst::double_swap(), barycenter(4), 6);
  ASSERT_TRUE(s.found());
  auto c = edge_orbit_cycle_check(*s.rep);
  EXPECT_FALSE(c.single_cycle);
  EXPECT_EQ(format_cycles(c, inst::thistle(4)), "(e1 e2)(e3 e4)");
  auto x = build_thistle({cyclic_group(2)}, 1);
  auto id = find_isometric_representative(OuterAutomorphism::identity(x), x.lengths(), 2);
  ASSERT_TRUE(id.found());
  auto ci = edge_orbit_cycle_check(*id.rep);
  EXPECT_FALSE(ci.single_cycle);
  EXPECT_EQ(ci.cycles.size(), 2u);
}

TEST(Subgraph, Classification) {
  auto x = inst::thistle(3);
  EXPECT_EQ(classify_subgraph(edges(x, {"e1"}), x), SubgraphClass::Elliptic);
  EXPECT_EQ(classify_subgraph(edges(x, {"e1", "e2"}), x), SubgraphClass::Hyperbolic);
  auto r = rose2();
  EXPECT_EQ(classify_subgraph(edges(r, {"p1"}), r), SubgraphClass::Hyperbolic);
}

// Elliptic iff the fundamental group of every component is a single factor
// or trivial (no free rank, at most one factor).
TEST(Subgraph, ClassificationMatchesComponentRank) {
  auto x = build_thistle({cyclic_group(2), cyclic_group(3), cyclic_group(2)}, 2);
  const int n = x.graph().unoriented_count();
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> s;
    for (int u = 0; u < n; ++u)
      if (mask & (1 << u)) s.push_back(u);
    bool elliptic = true;
    for (const auto& c : subgraph_components(s, x)) {
      const int rank = static_cast<int>(c.edges.size()) - static_cast<int>(c.vertices.size()) + 1;
      elliptic = elliptic && rank == 0 && c.non_free <= 1;
    }
    EXPECT_EQ(classify_subgraph(s, x) == SubgraphClass::Elliptic, elliptic);
  }
}

TEST(ReducibilityScan, Examples) {
  auto ds = inst::double_swap();
  auto s = find_isometric_representative(ds, barycenter(4), 6);
  ASSERT_TRUE(s.found());
  auto cert = reducibility_scan(*s.rep, ds.graph());
  ASSERT_TRUE(cert);
  EXPECT_EQ(cert->edges, edges(ds.graph(), {"e1", "e2"}));
  ASSERT_EQ(cert->components.size(), 1u);
  EXPECT_EQ(cert->components[0].non_free, 2);

  auto cyc = find_isometric_representative(inst::cyclic(), barycenter(3), 6);
  ASSERT_TRUE(cyc.found());
  EXPECT_FALSE(reducibility_scan(*cyc.rep, inst::thistle(3)));

  auto r = rose2();
  auto id = find_isometric_representative(OuterAutomorphism::identity(r), r.lengths(), 2);
  ASSERT_TRUE(id.found());
  auto rc = reducibility_scan(*id.rep, r);
  ASSERT_TRUE(rc);
  EXPECT_EQ(rc->edges.size(), 1u);
}

TEST(Collapse, RejectsWholeGraphAndLoops) {
  auto x = inst::z2z3();
  try {
    collapse_subforest(x, {0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotProper);
  }
  auto y = build_thistle({cyclic_group(2), cyclic_group(3)}, 1);
  try {
    collapse_subforest(y, edges(y, {"p1"}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAForest);
  }
}

TEST(Collapse, TwoSpokesOfFourGiveFormalProduct) {
  auto x = inst::thistle(4);
  auto r = collapse_subforest(x, edges(x, {"e1", "e2"}));
  EXPECT_TRUE(validate(r.graph).ok());
  EXPECT_EQ(r.graph.graph().vertex_count(), 3);
  EXPECT_EQ(r.graph.graph().unoriented_count(), 2);
  auto merged = r.graph.graph().find_vertex("v0").value();
  EXPECT_TRUE(r.graph.group(merged).is_formal_product());
  EXPECT_EQ(r.graph.group(merged).factors.size(), 2u);
  EXPECT_EQ(ffs_of(r.graph).size(), 3u);
  EXPECT_TRUE(ffs_leq(ffs_of(x), ffs_of(r.graph), r.forward));
  EXPECT_FALSE(ffs_leq(ffs_of(r.graph), ffs_of(x), r.backward));
  EXPECT_EQ(rank_and_factors(r.graph).rank, rank_and_factors(x).rank);
  // The dictionaries are mutually inverse on generators.
  for (const auto& g : standard_generators(x))
    EXPECT_EQ(apply(r.backward, r.forward.image(g, x), r.graph, x), Word{g});
}

TEST(Collapse, OneSpokeAbsorbsTheCenter) {
  auto x = inst::thistle(3);
  auto r = collapse_subforest(x, edges(x, {"e1"}));
  EXPECT_TRUE(validate(r.graph).ok());
  EXPECT_EQ(r.graph.graph().vertex_count(), 3);
  EXPECT_FALSE(r.graph.group(r.graph.graph().find_vertex("v0").value()).is_formal_product());
  EXPECT_TRUE(ffs_leq(ffs_of(x), ffs_of(r.graph), r.forward));
  EXPECT_TRUE(ffs_leq(ffs_of(r.graph), ffs_of(x), r.backward));
}

TEST(Collapse, KeepsRankWithPetals) {
  auto x = build_thistle({cyclic_group(2), cyclic_group(3), cyclic_group(2)}, 2);
  auto r = collapse_subforest(x, edges(x, {"e2", "e3"}));
  EXPECT_EQ(rank_and_factors(r.graph).rank, 2);
  EXPECT_EQ(r.graph.graph().unoriented_count(), x.graph().unoriented_count() - 2);
  for (const auto& g : standard_generators(x))
    EXPECT_EQ(apply(r.backward, r.forward.image(g, x), r.graph, x), Word{g});
}
