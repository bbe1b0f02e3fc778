#include <gtest/gtest.h>

#include "instances.hpp"

using namespace ospace;
using inst::w;

namespace {
GraphOfGroups rose_free_center() {
  // Z2 at the centre, two petals: G = Z2 * F2.
  SerreGraph g;
  int v = g.add_vertex("v");
  g.add_edge("x", "X", v, v);
  g.add_edge("y", "Y", v, v);
  return GraphOfGroups(g, {Rational(1, 2), Rational(1, 2)}, {VertexGroup{{cyclic_group(2)}}});
}
}  // namespace

TEST(BassSerre, LoopRoundTrip) {
  for (const auto& x : {inst::z2z3(), inst::thistle(3), rose_free_center(), build_thistle({cyclic_group(2)}, 2)}) {
    for (const auto& u : enumerate_words(x, 4)) ASSERT_EQ(loop_to_word(word_to_loop(u, x), x), u) << format(u, x);
  }
  auto r = rose_free_center();
  auto loop = word_to_loop(w("x", r), r);
  ASSERT_EQ(loop.steps.size(), 1u);
  EXPECT_TRUE(loop.steps[0].is_edge());
  EXPECT_TRUE(word_to_loop(Word{}, r).steps.empty());
}

TEST(BassSerre, TranslationLengthExamples) {
  auto x = inst::z2z3();
  EXPECT_EQ(translation_length(w("v1.g1", x), x), 0);
  EXPECT_EQ(translation_length(w("v1.g1*v2.g1", x), x), 2);
  EXPECT_EQ(translation_length(w("v1.g1*v2.g1*v1.g1*v2.g1", x), x), 4);
  auto t = build_thistle({cyclic_group(2), cyclic_group(3)}, 1);
  auto t2 = t.with_lengths({Rational(1, 2), Rational(1, 2), Rational(1)});
  EXPECT_EQ(translation_length(w("v1.g1*v2.g1", t2), t2), 2);
  auto r = rose_free_center();
  EXPECT_EQ(translation_length(w("x", r), r), Rational(1, 2));
  EXPECT_EQ(translation_length(w("x*v.g1*y", r), r), 1);
}

TEST(BassSerre, ConjugationInvarianceAndPowers) {
  auto x = inst::thistle(3, 3);
  auto words = enumerate_words(x, 3);
  for (std::size_t i = 0; i < words.size(); i += 3) {
    const auto& u = words[i];
    const Rational l = translation_length(u, x);
    for (std::size_t j = 0; j < words.size(); j += 17) ASSERT_EQ(translation_length(conjugate(u, words[j], x), x), l);
    ASSERT_EQ(translation_length(power(u, 3, x), x), 3 * l);
  }
}

TEST(BassSerre, CrossingVectorsAreLinearInLengths) {
  auto x = build_thistle({cyclic_group(2), cyclic_group(3)}, 1);
  std::mt19937 rng(7);
  auto n = crossing_vector(w("v1.g1*v2.g1", x), x);
  EXPECT_EQ(n, (std::vector<int>{2, 2, 0}));
  for (int trial = 0; trial < 3; ++trial) {
    auto metric = inst::random_simplex_point(3, rng);
    auto y = x.with_lengths(metric);
    for (const auto& u : enumerate_words(x, 4)) {
      if (is_elliptic(u, x)) continue;
      ASSERT_EQ(translation_length(u, y), dot(crossing_vector(u, x), metric));
    }
  }
  auto r = rose_free_center();
  EXPECT_EQ(crossing_vector(w("x", r), r), (std::vector<int>{1, 0}));
  EXPECT_THROW(crossing_vector(w("v.g1", r), r), Error);
}

TEST(BassSerre, BallSizeOnSingleEdge) {
  auto x = inst::z2z3();
  // Radius 2 around the base vertex v1: v1, its 2 neighbours (Z2 cosets of
  // the edge), and each neighbour's 2 further neighbours (Z3 minus one).
  EXPECT_EQ(build_ball(x, Rational(2)).size(), 7u);
  EXPECT_EQ(build_ball(x, Rational(0)).size(), 1u);
}

TEST(BassSerre, OracleOnEllipticAndHyperbolicWords) {
  auto x = inst::z2z3();
  auto ball = build_ball(x, Rational(5));
  auto e = oracle_translation_length(w("v1.g1", x), ball);
  ASSERT_TRUE(e.length);
  EXPECT_EQ(*e.length, 0);
  EXPECT_EQ(e.fixed_vertices, 1);
  auto h = oracle_translation_length(w("v1.g1*v2.g1", x), ball);
  ASSERT_TRUE(h.length);
  EXPECT_EQ(*h.length, 2);
  EXPECT_EQ(h.fixed_vertices, 0);
}

TEST(BassSerre, OracleAgreesOnFreeRose) {
  auto x = rose_free_center();
  auto ball = build_ball(x, Rational(3));
  for (const auto& u : enumerate_words(x, 3)) {
    auto o = oracle_translation_length(u, ball);
    ASSERT_TRUE(o.length) << format(u, x);
    ASSERT_EQ(*o.length, translation_length(u, x)) << format(u, x);
    if (is_elliptic(u, x)) ASSERT_EQ(o.fixed_vertices, 1);
  }
}

TEST(BassSerre, FixedVertexOfConjugatedElement) {
  auto x = inst::thistle(3);
  auto u = w("v2.g1*v1.g1*v2.g1", x);
  auto fv = fixed_vertex(u, x);
  ASSERT_TRUE(fv);
  EXPECT_EQ(x.graph().vertex_id(fv->vertex), "v1");
  EXPECT_FALSE(fixed_vertex(w("v1.g1*v2.g1", x), x));
  auto ball = build_ball(x, Rational(2));
  auto idx = ball.find(*fv);
  ASSERT_TRUE(idx);
  EXPECT_EQ(ball.act(u, *idx), idx);
}

TEST(BassSerre, DotExport) {
  auto dot_text = build_ball(inst::z2z3(), Rational(1)).to_dot();
  EXPECT_NE(dot_text.find("graph cover"), std::string::npos);
}
