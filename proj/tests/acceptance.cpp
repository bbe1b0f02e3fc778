// Acceptance checks A1-A9: one PASS/FAIL line each, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "instances.hpp"

using namespace ospace;
using inst::w;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

void run(const char* id, const char* title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (o.ok && s > limit_s) {
    o.ok = false;
    o.detail = "too slow";
  }
  if (!o.ok) ++failures;
  std::printf("%s %s  %s  (%.2fs, limit %.0fs)%s%s\n", id, o.ok ? "PASS" : "FAIL", title, s, limit_s,
              o.detail.empty() ? "" : "  ", o.detail.c_str());
  std::fflush(stdout);
}

std::string list(const std::vector<Rational>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
  return s + ")";
}

std::vector<Rational> scaled(const std::vector<Rational>& v, const Rational& mu) {
  std::vector<Rational> out;
  for (const auto& q : v) out.push_back(q * mu);
  return out;
}

}  // namespace

int main() {
  const auto cyclic = inst::cyclic();
  const auto& x3 = cyclic.graph();
  const auto center3 = barycenter(3);

  run("A1", "cyclic Z2*Z2*Z2: displacement exactly 1, unique minimum at the center", 10, [&](Outcome& o) {
    auto table = candidate_table(cyclic);
    auto d = displacement_on_simplex(table, x3, Rational(1, 1000));
    o.require(d.exact && d.value == 1, "displacement " + to_string(d.value));
    o.require(d.argmin == center3, "argmin " + list(d.argmin));
    int off_center = 0;
    for (const auto& p : simplex_grid(3, 60)) {
      const auto fp = is_fixed_point(table, x3, p);
      if (is_simplex_center(p)) {
        o.require(fp.fixed, "center not fixed");
        continue;
      }
      ++off_center;
      o.require(fp.stretch.lambda_r > 1, "Lambda_R <= 1 at " + list(p));
      o.require(!fp.fixed, "fixed off center at " + list(p));
    }
    o.require(off_center == 1710, "grid size " + std::to_string(off_center));
    o.detail = o.ok ? "value 1, argmin " + list(d.argmin) + ", " + std::to_string(off_center) + " grid points > 1"
                    : o.detail;
  });

  run("A2", "isometric representative at the center cycles the edges (e1 e2 e3)", 5, [&](Outcome& o) {
    auto s = find_isometric_representative(cyclic, center3, 6);
    o.require(s.found(), "no representative");
    if (!s.found()) return;
    auto c = edge_orbit_cycle_check(*s.rep);
    o.require(c.single_cycle, "not a single cycle");
    o.require(format_cycles(c, x3) == "(e1 e2 e3)", "cycle " + format_cycles(c, x3));
    if (o.ok) o.detail = format_cycles(c, x3);
  });

  const auto swap = inst::double_swap();
  const auto& x4 = swap.graph();

  run("A3", "double swap on Z2^*4 is reducible via {e1,e2}; cyclic yields none", 5, [&](Outcome& o) {
    auto s = find_isometric_representative(swap, barycenter(4), 6);
    o.require(s.found(), "no representative for the double swap");
    if (!s.found()) return;
    auto cert = reducibility_scan(*s.rep, x4);
    o.require(cert.has_value(), "no certificate");
    if (!cert) return;
    std::vector<int> e12{SerreGraph::unoriented(*x4.graph().find_edge("e1")),
                         SerreGraph::unoriented(*x4.graph().find_edge("e2"))};
    o.require(cert->edges == e12, "certificate is not {e1,e2}");
    o.require(classify_subgraph(cert->edges, x4) == SubgraphClass::Hyperbolic, "certificate not hyperbolic");
    o.require(cert->components.size() == 1 && cert->components[0].non_free == 2, "component structure");
    auto c = find_isometric_representative(cyclic, center3, 6);
    o.require(c.found() && !reducibility_scan(*c.rep, x3), "cyclic instance produced a certificate");
  });

  run("A4", "candidate stretch factors equal brute force at word bound 8", 60, [&](Outcome& o) {
    std::mt19937 rng(2024);
    int compared = 0;
    auto check = [&](const OuterAutomorphism& a, const std::vector<Rational>& m, const std::string& name) {
      auto s = stretch_factor(a, m);
      auto b = brute_force_stretch(a, m, 8);
      o.require(s.lambda_r == b.lambda_r, name + " lambdaR " + to_string(s.lambda_r) + " vs " + to_string(b.lambda_r));
      o.require(s.lambda_l == b.lambda_l, name + " lambdaL " + to_string(s.lambda_l) + " vs " + to_string(b.lambda_l));
      ++compared;
    };
    for (int i = 0; i < 10; ++i) check(cyclic, inst::random_simplex_point(3, rng), "cyclic");
    auto z = inst::z2z3();
    check(OuterAutomorphism::identity(z), {Rational(1)}, "identity Z2*Z3");
    auto inv = inst::images(z, {{"v1.g1", "v1.g1"}, {"v2.g1", "v2.g2"}});
    check(OuterAutomorphism(z, inv, inv), {Rational(1)}, "Z3 inversion on Z2*Z3");
    check(OuterAutomorphism::identity(x3), inst::random_simplex_point(3, rng), "identity Z2^*3");
    check(inst::partial_conjugation(), inst::random_simplex_point(3, rng), "partial conjugation");
    check(swap, inst::random_simplex_point(4, rng), "double swap");
    auto t = inst::petal_twist();
    check(t, inst::random_simplex_point(3, rng), "petal twist");
    o.detail = o.ok ? std::to_string(compared) + " instances agree" : o.detail;
  });

  run("A5", "translation length equals the radius-6 ball oracle for words up to length 6", 120, [&](Outcome& o) {
    int words = 0, elliptic = 0;
    for (const auto& x : {inst::z2z3(), inst::thistle(3)}) {
      auto ball = build_ball(x, Rational(6));
      for (const auto& u : enumerate_words(x, 6)) {
        auto r = oracle_translation_length(u, ball);
        const Rational l = translation_length(u, x);
        o.require(r.length && *r.length == l, "mismatch on " + format(u, x));
        if (l == 0) {
          ++elliptic;
          o.require(r.fixed_vertices == 1, "elliptic " + format(u, x) + " fixes " +
                                                std::to_string(r.fixed_vertices) + " ball vertices");
        }
        ++words;
      }
    }
    o.detail = o.ok ? std::to_string(words) + " words, " + std::to_string(elliptic) + " elliptic" : o.detail;
  });

  run("A6", "fixed points have isometric representatives; other points have Lambda_R > 1", 30, [&](Outcome& o) {
    std::vector<OuterAutomorphism> autos{cyclic, swap, OuterAutomorphism::identity(x3), inst::partial_conjugation()};
    int fixed = 0, moved = 0;
    for (const auto& a : autos) {
      const int n = a.graph().graph().unoriented_count();
      auto table = candidate_table(a);
      for (const auto& p : simplex_grid(n, n == 4 ? 8 : 12)) {
        auto fp = is_fixed_point(table, a.graph(), p);
        if (fp.fixed) {
          ++fixed;
          o.require(detail::search_representative(a, p, 4).has_value(), "no representative at " + list(p));
        } else {
          ++moved;
          o.require(fp.stretch.lambda_r > 1, "Lambda_R " + to_string(fp.stretch.lambda_r) + " at " + list(p));
        }
      }
    }
    o.detail = o.ok ? std::to_string(fixed) + " fixed, " + std::to_string(moved) + " moved" : o.detail;
  });

  run("A7", "collapsing {e1,e2} gives A*B and a strictly larger free factor system", 5, [&](Outcome& o) {
    std::vector<int> e12{SerreGraph::unoriented(*x4.graph().find_edge("e1")),
                         SerreGraph::unoriented(*x4.graph().find_edge("e2"))};
    auto r = collapse_subforest(x4, e12);
    o.require(validate(r.graph).ok(), "collapsed graph invalid");
    auto merged = r.graph.graph().find_vertex("v0");
    o.require(merged && r.graph.group(*merged).is_formal_product() && r.graph.group(*merged).factors.size() == 2,
              "merged vertex is not A*B");
    o.require(ffs_leq(ffs_of(x4), ffs_of(r.graph), r.forward), "old <= new fails");
    o.require(!ffs_leq(ffs_of(r.graph), ffs_of(x4), r.backward), "new <= old holds");
  });

  run("A8", "Lambda_R is invariant under rescaling by 1/2, 2, 7/3", 10, [&](Outcome& o) {
    std::mt19937 rng(8);
    for (const auto& a : {cyclic, inst::partial_conjugation(), inst::petal_twist()}) {
      auto m = inst::random_simplex_point(a.graph().graph().unoriented_count(), rng);
      const Rational base = stretch_factor(a, m).lambda_r;
      for (const Rational& mu : {Rational(1, 2), Rational(2), Rational(7, 3)}) {
        o.require(stretch_factor(a, scaled(m, mu)).lambda_r == base, "scaling by " + to_string(mu));
        o.require(brute_force_stretch(a, scaled(m, mu), 4).lambda_r == brute_force_stretch(a, m, 4).lambda_r,
                  "brute force scaling by " + to_string(mu));
      }
    }
  });

  run("A9", "paths from simplex centers leave the centers at once", 60, [&](Outcome& o) {
    // Closed 2-simplex at resolution 1/12.
    std::vector<std::vector<Rational>> pts;
    for (int i = 0; i <= 12; ++i)
      for (int j = 0; i + j <= 12; ++j) pts.push_back({Rational(i, 12), Rational(j, 12), Rational(12 - i - j, 12)});
    auto on_segment = [](const std::vector<Rational>& a, const std::vector<Rational>& b,
                         const std::vector<Rational>& p) {
      std::optional<Rational> t;
      for (std::size_t k = 0; k < a.size(); ++k) {
        const Rational d = b[k] - a[k];
        if (d == 0) {
          if (p[k] != a[k]) return false;
          continue;
        }
        const Rational tk = (p[k] - a[k]) / d;
        if (t && *t != tk) return false;
        t = tk;
      }
      return t && *t > 0 && *t < 1;
    };
    long paths = 0, from_center = 0;
    for (const auto& a : pts)
      for (const auto& b : pts)
        for (const auto& c : pts) {
          SimplicialPath path{{{"s", a}, {"s", b}, {"s", c}}};
          auto rep = validate_simplicial_path(path);
          ++paths;
          o.require(rep.all_center == (rep.constant && is_face_center(a)), "all-center path is not constant");
          const std::vector<Rational>* ends[3] = {&a, &b, &c};
          for (int s = 0; s < 2; ++s) {
            const auto& seg = rep.segments[s];
            if (*ends[s] == *ends[s + 1] || !is_face_center(*ends[s])) continue;
            ++from_center;
            o.require(seg.contains_non_center && seg.non_center_witness, "segment from a center not flagged");
            if (seg.non_center_witness)
              o.require(on_segment(*ends[s], *ends[s + 1], *seg.non_center_witness) &&
                            !is_face_center(*seg.non_center_witness),
                        "witness is not an interior non-center point");
          }
        }
    o.detail = o.ok ? std::to_string(paths) + " paths, " + std::to_string(from_center) + " segments from centers"
                    : o.detail;
  });

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
