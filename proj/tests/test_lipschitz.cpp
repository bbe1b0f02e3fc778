#include <gtest/gtest.h>

#include "instances.hpp"

using namespace ospace;
using inst::w;

namespace {
const std::vector<Rational> skew{Rational(1, 2), Rational(1, 4), Rational(1, 4)};
}

TEST(Candidates, AreHyperbolicAndCanonical) {
  for (const auto& x : {inst::z2z3(), inst::thistle(3), inst::thistle(4), build_thistle({cyclic_group(2)}, 2),
                        build_thistle({cyclic_group(2), symmetric_group_3()}, 1)}) {
    auto cands = enumerate_candidates(x);
    EXPECT_FALSE(cands.empty());
    for (const auto& c : cands) {
      EXPECT_FALSE(is_elliptic(c.witness, x));
      EXPECT_EQ(c.crossing, crossing_vector(c.witness, x));
      EXPECT_TRUE(is_cyclically_reduced(c.witness));
      for (int n : c.crossing) EXPECT_LE(n, 2);
    }
  }
}

TEST(Stretch, IdentityIsOne) {
  auto id = OuterAutomorphism::identity(inst::thistle(3));
  auto r = stretch_factor(id, skew);
  EXPECT_EQ(r.lambda_r, 1);
  EXPECT_EQ(r.lambda_l, 1);
  EXPECT_EQ(brute_force_stretch(id, skew, 5).lambda_r, 1);
}

TEST(Stretch, CyclicAtSkewMetric) {
  auto a = inst::cyclic();
  auto r = stretch_factor(a, skew);
  EXPECT_EQ(r.lambda_r, Rational(3, 2));
  EXPECT_EQ(format(r.witness_r, a.graph()), "v2.g1*v3.g1");
  auto b = brute_force_stretch(a, skew, 8);
  EXPECT_EQ(b.lambda_r, Rational(3, 2));
  EXPECT_EQ(b.witness_r, r.witness_r);
  EXPECT_EQ(stretch_factor(a, barycenter(3)).lambda_r, 1);
  EXPECT_EQ(brute_force_stretch(a, barycenter(3), 8).lambda_r, 1);
}

TEST(Stretch, RejectsBadMetrics) {
  auto a = inst::cyclic();
  EXPECT_THROW(stretch_factor(a, {Rational(1), Rational(1)}), Error);
  EXPECT_THROW(stretch_factor(a, {Rational(1), Rational(0), Rational(1)}), Error);
  EXPECT_THROW(brute_force_stretch(a, skew, 1), Error);
}

TEST(Stretch, CandidatesMatchBruteForceOnRandomMetrics) {
  std::mt19937 rng(11);
  for (const auto& a : {inst::cyclic(), inst::partial_conjugation(), inst::double_swap(), inst::petal_twist()}) {
    const int n = a.graph().graph().unoriented_count();
    for (int t = 0; t < 3; ++t) {
      auto m = inst::random_simplex_point(n, rng);
      auto s = stretch_factor(a, m);
      auto b = brute_force_stretch(a, m, 6);
      EXPECT_EQ(s.lambda_r, b.lambda_r);
      EXPECT_EQ(s.lambda_l, b.lambda_l);
    }
  }
}

TEST(Stretch, ScaleInvariant) {
  auto a = inst::partial_conjugation();
  for (const Rational& mu : {Rational(1, 2), Rational(2), Rational(7, 3)}) {
    std::vector<Rational> scaled;
    for (const auto& l : skew) scaled.push_back(l * mu);
    EXPECT_EQ(stretch_factor(a, scaled).lambda_r, stretch_factor(a, skew).lambda_r);
  }
}

TEST(FourierMotzkin, FeasibleAndInfeasibleSystems) {
  // x + y <= 1, x >= 1/4, y >= 1/4.
  std::vector<LinearConstraint> sys{{{Rational(1), Rational(1)}, Rational(1), false},
                                    {{Rational(-1), Rational(0)}, Rational(-1, 4), false},
                                    {{Rational(0), Rational(-1)}, Rational(-1, 4), false}};
  auto p = fourier_motzkin_solve(sys, 2);
  ASSERT_TRUE(p);
  EXPECT_LE((*p)[0] + (*p)[1], 1);
  EXPECT_GE((*p)[0], Rational(1, 4));
  sys.push_back({{Rational(-1), Rational(-1)}, Rational(-1), true});  // x + y > 1
  EXPECT_FALSE(fourier_motzkin_solve(sys, 2));
  // Strict versus non-strict at the boundary.
  std::vector<LinearConstraint> edge{{{Rational(1)}, Rational(0), false}, {{Rational(-1)}, Rational(0), false}};
  EXPECT_TRUE(fourier_motzkin_solve(edge, 1));
  edge[0].strict = true;
  EXPECT_FALSE(fourier_motzkin_solve(edge, 1));
}

TEST(Displacement, CyclicMinimumIsTheCenter) {
  auto d = displacement_on_simplex(inst::cyclic(), Rational(1, 1000));
  EXPECT_EQ(d.value, 1);
  EXPECT_TRUE(d.exact);
  EXPECT_EQ(d.argmin, barycenter(3));
}

TEST(Displacement, IdentityIsOne) {
  auto d = displacement_on_simplex(OuterAutomorphism::identity(inst::thistle(3)), Rational(1, 1000));
  EXPECT_EQ(d.value, 1);
  EXPECT_TRUE(d.exact);
}

TEST(Displacement, SingleEdgeSwap) {
  auto x = inst::thistle(2);
  auto h = inst::images(x, {{"v1.g1", "v2.g1"}, {"v2.g1", "v1.g1"}});
  auto d = displacement_on_simplex(OuterAutomorphism(x, h, h), Rational(1, 1000));
  EXPECT_EQ(d.value, 1);
  EXPECT_EQ(d.argmin, std::vector<Rational>{Rational(1)});
}

TEST(Displacement, NeverBeatenByGrid) {
  for (const auto& a : {inst::partial_conjugation(), inst::petal_twist(), inst::double_swap()}) {
    auto table = candidate_table(a);
    auto d = displacement_on_simplex(table, a.graph(), Rational(1, 1000));
    EXPECT_LE(d.lower_bound, d.value);
    EXPECT_LE(d.value - d.lower_bound, Rational(1, 1000));
    const int n = a.graph().graph().unoriented_count();
    for (const auto& p : simplex_grid(n, n == 4 ? 16 : 30))
      ASSERT_GE(stretch_factor(table, a.graph(), p).lambda_r, d.lower_bound);
  }
}

TEST(Displacement, RejectsBadParameters) {
  auto a = inst::cyclic();
  EXPECT_THROW(displacement_on_simplex(a, Rational(0)), Error);
  EXPECT_THROW(displacement_on_simplex(a, Rational(1, 100), Rational(1, 2)), Error);
}

TEST(FixedPoint, CenterOnlyForCyclic) {
  auto a = inst::cyclic();
  EXPECT_TRUE(is_fixed_point(a, barycenter(3)).fixed);
  auto skewed = is_fixed_point(a, skew);
  EXPECT_FALSE(skewed.fixed);
  EXPECT_EQ(skewed.stretch.lambda_r, Rational(3, 2));
  auto id = OuterAutomorphism::identity(a.graph());
  EXPECT_TRUE(is_fixed_point(id, skew).fixed);
}

TEST(Simplex, CenterTest) {
  EXPECT_TRUE(is_simplex_center(barycenter(3)));
  EXPECT_FALSE(is_simplex_center(skew));
  EXPECT_EQ(simplex_grid(3, 6).size(), 10u);
}

TEST(SimplicialPath, SegmentsFromCenterLeaveTheCenters) {
  SimplicialPath p{{{"s", barycenter(3)}, {"s", skew}}};
  auto r = validate_simplicial_path(p);
  ASSERT_EQ(r.segments.size(), 1u);
  EXPECT_TRUE(r.segments[0].contains_non_center);
  EXPECT_FALSE(r.all_center);
  SimplicialPath constant{{{"s", barycenter(3)}, {"s", barycenter(3)}}};
  EXPECT_TRUE(validate_simplicial_path(constant).all_center);
  EXPECT_TRUE(validate_simplicial_path(constant).constant);
  SimplicialPath bad{{{"s", {Rational(1, 2), Rational(1, 4)}}}};
  EXPECT_THROW(validate_simplicial_path(bad), Error);
}

TEST(Stretch, CandidatesMatchBruteForceWithS3Factor) {
  auto x = build_thistle({symmetric_group_3(), cyclic_group(2), cyclic_group(2)}, 0);
  const Word s = w("v1.g1", x), s_inv = invert(s, x);
  Homomorphism fwd, bwd;
  for (int k = 1; k < 6; ++k) {
    auto g = Syllable::vertex(x.graph().find_vertex("v1").value(), k);
    fwd.images[g] = bwd.images[g] = Word{g};
  }
  const auto a2 = parse_syllable("v2.g1", x), a3 = parse_syllable("v3.g1", x);
  fwd.images[a2] = multiply(multiply(s_inv, Word{a2}, x), s, x);
  bwd.images[a2] = multiply(multiply(s, Word{a2}, x), s_inv, x);
  fwd.images[a3] = bwd.images[a3] = Word{a3};
  OuterAutomorphism a(x, fwd, bwd);
  std::mt19937 rng(5);
  for (int t = 0; t < 3; ++t) {
    auto m = inst::random_simplex_point(3, rng);
    auto c = stretch_factor(a, m);
    auto b = brute_force_stretch(a, m, 5);
    EXPECT_EQ(c.lambda_r, b.lambda_r);
    EXPECT_EQ(c.lambda_l, b.lambda_l);
  }
}
