#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ospace/automorphism.hpp"
#include "ospace/bass_serre.hpp"
#include "ospace/fourier_motzkin.hpp"

namespace ospace {

struct CandidateLoop {
  enum class Kind { SimpleLoop, FigureEight, Barbell, Dumbbell };

  Kind kind = Kind::SimpleLoop;
  Word witness;  // conjugacy canonical form
  std::vector<int> crossing;
};

inline const char* to_string(CandidateLoop::Kind k) {
  switch (k) {
    case CandidateLoop::Kind::SimpleLoop: return "simple-loop";
    case CandidateLoop::Kind::FigureEight: return "figure-eight";
    case CandidateLoop::Kind::Barbell: return "barbell";
    case CandidateLoop::Kind::Dumbbell: return "dumbbell";
  }
  return "?";
}

namespace detail {

/// Key identifying the unordered pair {class of u, class of u^-1}.
inline std::string class_key(const Word& u, const GraphOfGroups& x) {
  const std::string a = format(conjugacy_canonical(u, x), x);
  const std::string b = format(conjugacy_canonical(invert(u, x), x), x);
  return std::min(a, b);
}

inline CandidateLoop::Kind classify_walk(const std::vector<LoopStep>& steps, const GraphOfGroups& x) {
  std::vector<int> uses(x.graph().unoriented_count(), 0), visits(x.graph().vertex_count(), 0);
  bool decorated = false;
  for (const auto& s : steps) {
    if (!s.is_edge()) {
      decorated = true;
      continue;
    }
    ++uses[SerreGraph::unoriented(s.edge)];
    ++visits[x.graph().terminal(s.edge)];
  }
  if (decorated) return CandidateLoop::Kind::Dumbbell;
  if (std::any_of(uses.begin(), uses.end(), [](int n) { return n > 1; })) return CandidateLoop::Kind::Barbell;
  if (std::any_of(visits.begin(), visits.end(), [](int n) { return n > 1; })) return CandidateLoop::Kind::FigureEight;
  return CandidateLoop::Kind::SimpleLoop;
}

}  // namespace detail

/// Closed reduced walks in the quotient crossing every unoriented edge at
/// most twice, with an optional decoration (one fixed nontrivial element) at
/// each visit of a non-free vertex. This covers embedded loops, figure-eights,
/// barbells and dumbbells with elliptic ends. Hyperbolic classes only, one
/// per {u, u^-1} conjugacy pair, sorted by canonical text.
inline std::vector<CandidateLoop> enumerate_candidates(const GraphOfGroups& x) {
  require_valid(x);
  const auto& g = x.graph();
  std::vector<std::optional<Word>> decoration(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v)
    if (!x.is_free(v)) {
      const auto& table = x.group(v).factors[0];
      decoration[v] = Word{Syllable::vertex(v, table.nonidentity_elements().front(), 0)};
    }

  std::map<std::string, CandidateLoop> found;
  std::vector<int> uses(g.unoriented_count(), 0);
  std::vector<LoopStep> steps;

  auto record = [&](const std::vector<LoopStep>& walk) {
    BassLoop loop{0, walk};
    Word w = loop_to_word(loop, x);
    if (w.empty() || is_elliptic(w, x)) return;
    std::string key = detail::class_key(w, x);
    if (found.count(key)) return;
    CandidateLoop c;
    c.kind = detail::classify_walk(walk, x);
    c.witness = conjugacy_canonical(w, x);
    c.crossing = crossing_vector(w, x);
    found.emplace(std::move(key), std::move(c));
  };

  std::function<void(int, int, int)> extend = [&](int start, int here, int last_edge) {
    for (int e : g.outgoing(here)) {
      const int u = SerreGraph::unoriented(e);
      if (uses[u] >= 2) continue;
      const bool backtrack = last_edge >= 0 && e == SerreGraph::reverse(last_edge);
      for (int decorate = 0; decorate <= 1; ++decorate) {
        if (decorate && !decoration[here]) continue;
        if (backtrack && !decorate) continue;
        if (decorate && last_edge < 0) continue;  // start decoration is added on closing
        const std::size_t mark = steps.size();
        if (decorate) steps.push_back(LoopStep::decorate(here, *decoration[here]));
        steps.push_back(LoopStep::along(e));
        ++uses[u];
        const int there = g.terminal(e);
        if (there == start) {
          const int first = steps.front().edge;
          const bool closing_backtrack = e == SerreGraph::reverse(first);
          if (!closing_backtrack) record(steps);
          if (decoration[start]) {
            auto closed = steps;
            closed.push_back(LoopStep::decorate(start, *decoration[start]));
            record(closed);
          }
        }
        extend(start, there, e);
        --uses[u];
        steps.resize(mark);
      }
    }
  };
  for (int v = 0; v < g.vertex_count(); ++v) extend(v, v, -1);

  std::vector<CandidateLoop> out;
  for (auto& [_, c] : found) out.push_back(std::move(c));
  std::sort(out.begin(), out.end(), [&](const CandidateLoop& a, const CandidateLoop& b) {
    return format(a.witness, x) < format(b.witness, x);
  });
  return out;
}

/// Candidate loops with the crossing vectors of their images under alpha and
/// alpha^-1; every ratio is then linear-fractional in the edge lengths.
struct CandidateTable {
  std::vector<CandidateLoop> loops;
  std::vector<std::vector<int>> forward;   // crossings of (c)alpha
  std::vector<std::vector<int>> backward;  // crossings of (c)alpha^-1
};

inline CandidateTable candidate_table(const OuterAutomorphism& alpha) {
  CandidateTable t;
  t.loops = enumerate_candidates(alpha.graph());
  for (const auto& c : t.loops) {
    t.forward.push_back(crossing_vector(alpha.apply(c.witness), alpha.graph()));
    t.backward.push_back(crossing_vector(alpha.apply_inverse(c.witness), alpha.graph()));
  }
  return t;
}

struct StretchReport {
  Rational lambda_r;
  Rational lambda_l;
  Rational lambda_sym;
  Word witness_r;
  Word witness_l;
};

inline void check_metric(const std::vector<Rational>& metric, const GraphOfGroups& x) {
  if (static_cast<int>(metric.size()) != x.graph().unoriented_count())
    throw Error(ErrorKind::InvalidMetric, "metric needs " + std::to_string(x.graph().unoriented_count()) + " entries");
  for (const auto& l : metric)
    if (l <= 0) throw Error(ErrorKind::InvalidMetric, "metric entries must be positive");
}

namespace detail {
inline std::pair<Rational, std::size_t> max_ratio(const std::vector<std::vector<int>>& numerators,
                                                  const std::vector<CandidateLoop>& loops,
                                                  const std::vector<Rational>& metric) {
  Rational best = -1;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < loops.size(); ++i) {
    Rational r = dot(numerators[i], metric) / dot(loops[i].crossing, metric);
    if (r > best) {
      best = r;
      arg = i;
    }
  }
  return {best, arg};
}
}  // namespace detail

inline StretchReport stretch_factor(const CandidateTable& table, const GraphOfGroups& x,
                                    const std::vector<Rational>& metric) {
  check_metric(metric, x);
  if (table.loops.empty()) throw Error(ErrorKind::Structural, "graph has no hyperbolic candidate loops");
  auto [r, ir] = detail::max_ratio(table.forward, table.loops, metric);
  auto [l, il] = detail::max_ratio(table.backward, table.loops, metric);
  return {r, l, r * l, table.loops[ir].witness, table.loops[il].witness};
}

/// Right/left stretching factors from T (metric `metric` on alpha's graph)
/// to alpha.T, maximised over candidate loops.
inline StretchReport stretch_factor(const OuterAutomorphism& alpha, const std::vector<Rational>& metric) {
  return stretch_factor(candidate_table(alpha), alpha.graph(), metric);
}

/// Truncated supremum over every hyperbolic reduced word with at most
/// `max_length` syllables; a lower bound for the true stretching factors.
inline StretchReport brute_force_stretch(const OuterAutomorphism& alpha, const std::vector<Rational>& metric,
                                         int max_length) {
  if (max_length < 2) throw Error(ErrorKind::InvalidConfiguration, "word bound must be at least 2");
  const GraphOfGroups x = alpha.graph().with_lengths(metric);
  check_metric(metric, x);
  StretchReport best{-1, -1, 0, {}, {}};
  std::string best_r_text, best_l_text;
  auto consider = [&](Rational ratio, const Word& w, Rational& value, Word& witness, std::string& text) {
    if (ratio < value) return;
    Word canonical = conjugacy_canonical(w, x);
    std::string t = format(canonical, x);
    if (ratio > value || t < text) {
      value = ratio;
      witness = std::move(canonical);
      text = std::move(t);
    }
  };
  for (const auto& w : enumerate_words(x, max_length)) {
    const Rational len = translation_length(w, x);
    if (len == 0) continue;
    consider(translation_length(alpha.apply(w), x) / len, w, best.lambda_r, best.witness_r, best_r_text);
    consider(translation_length(alpha.apply_inverse(w), x) / len, w, best.lambda_l, best.witness_l, best_l_text);
  }
  if (best.lambda_r < 0) throw Error(ErrorKind::Structural, "no hyperbolic word within the bound");
  best.lambda_sym = best.lambda_r * best.lambda_l;
  return best;
}

// --- simplex coordinates -----------------------------------------------------

inline bool is_simplex_center(const std::vector<Rational>& coords) {
  if (coords.empty()) return false;
  for (const auto& c : coords)
    if (c <= 0 || c != coords.front()) return false;
  return true;
}

inline std::vector<Rational> barycenter(int n) { return std::vector<Rational>(n, Rational(1, n)); }

/// All points of the open (n-1)-simplex whose coordinates are multiples of
/// 1/resolution.
inline std::vector<std::vector<Rational>> simplex_grid(int n, int resolution) {
  std::vector<std::vector<Rational>> out;
  std::vector<int> parts(n, 1);
  std::function<void(int, int)> fill = [&](int i, int remaining) {
    if (i == n - 1) {
      parts[i] = remaining;
      std::vector<Rational> p;
      for (int k : parts) p.emplace_back(k, resolution);
      out.push_back(std::move(p));
      return;
    }
    for (int k = 1; k <= remaining - (n - 1 - i); ++k) {
      parts[i] = k;
      fill(i + 1, remaining - k);
    }
  };
  if (n >= 1 && resolution >= n) fill(0, resolution);
  return out;
}

struct DisplacementReport {
  Rational value;        // max candidate ratio at argmin
  Rational lower_bound;  // no point of the floored simplex does better than this
  bool exact = false;    // value == lower_bound, certified by an infeasible strict system
  std::vector<Rational> argmin;
  std::vector<Word> active;
  int feasibility_checks = 0;
};

/// Minimises max_c (m_c . x)/(n_c . x) over the simplex {sum x = 1, x >= floor}
/// by bisection on lambda with exact Fourier-Motzkin feasibility checks.
/// Bisection steps alternate with probes at the simplest rational inside the
/// bracket; a probe value v is certified optimal when {ratio_c(x) < v for all
/// c} is infeasible, in which case the bracket collapses to v.
inline DisplacementReport displacement_on_simplex(const CandidateTable& table, const GraphOfGroups& x,
                                                  const Rational& tolerance,
                                                  const Rational& floor = Rational(1, 1000)) {
  if (tolerance <= 0) throw Error(ErrorKind::InvalidConfiguration, "tolerance must be positive");
  const int n = x.graph().unoriented_count();
  if (floor <= 0 || floor * n >= 1)
    throw Error(ErrorKind::InfeasibleFloor, "coordinate floor too large for a simplex with " + std::to_string(n) +
                                                " edges");
  if (table.loops.empty()) throw Error(ErrorKind::Structural, "graph has no hyperbolic candidate loops");

  // Distinct (numerator, denominator) crossing pairs.
  std::set<std::pair<std::vector<int>, std::vector<int>>> pairs;
  for (std::size_t i = 0; i < table.loops.size(); ++i) pairs.emplace(table.forward[i], table.loops[i].crossing);

  auto value_at = [&](const std::vector<Rational>& p) { return detail::max_ratio(table.forward, table.loops, p).first; };
  auto active_at = [&](const std::vector<Rational>& p, const Rational& v) {
    std::vector<Word> out;
    for (std::size_t i = 0; i < table.loops.size(); ++i)
      if (dot(table.forward[i], p) == v * dot(table.loops[i].crossing, p)) out.push_back(table.loops[i].witness);
    return out;
  };

  DisplacementReport report;
  if (n == 1) {
    report.argmin = {Rational(1)};
    report.value = report.lower_bound = value_at(report.argmin);
    report.exact = true;
    report.active = active_at(report.argmin, report.value);
    return report;
  }

  // Variables y_0..y_{n-2}; x_{n-1} = 1 - sum y.
  auto feasible = [&](const Rational& lambda, bool strict) -> std::optional<std::vector<Rational>> {
    ++report.feasibility_checks;
    std::vector<LinearConstraint> sys;
    for (const auto& [m, c] : pairs) {
      std::vector<Rational> d(n);
      for (int i = 0; i < n; ++i) d[i] = Rational(m[i]) - lambda * c[i];
      LinearConstraint lc;
      lc.coeffs.resize(n - 1);
      for (int i = 0; i < n - 1; ++i) lc.coeffs[i] = d[i] - d[n - 1];
      lc.rhs = -d[n - 1];
      lc.strict = strict;
      sys.push_back(std::move(lc));
    }
    for (int i = 0; i < n - 1; ++i) {
      LinearConstraint lc;
      lc.coeffs.assign(n - 1, Rational(0));
      lc.coeffs[i] = -1;
      lc.rhs = -floor;
      sys.push_back(std::move(lc));
    }
    LinearConstraint last;
    last.coeffs.assign(n - 1, Rational(1));
    last.rhs = 1 - floor;
    sys.push_back(std::move(last));
    auto y = fourier_motzkin_solve(sys, n - 1);
    if (!y) return std::nullopt;
    std::vector<Rational> p(*y);
    Rational rest = 1;
    for (const auto& v : p) rest -= v;
    p.push_back(rest);
    return p;
  };

  std::vector<Rational> best_point = barycenter(n);
  Rational hi = value_at(best_point);
  Rational lo = 1 - tolerance;
  if (lo < 0 || feasible(lo, false)) lo = 0;

  auto finish = [&](bool exact) {
    report.value = hi;
    report.lower_bound = exact ? hi : lo;
    report.exact = exact;
    report.argmin = best_point;
    report.active = active_at(best_point, hi);
    return report;
  };
  // A feasible probe at q yields a point p with value_at(p) <= q.
  auto accept = [&](std::vector<Rational> p) -> bool {
    best_point = std::move(p);
    hi = value_at(best_point);
    return !feasible(hi, true);
  };

  if (!feasible(hi, true)) return finish(true);
  bool simplest_turn = true;
  while (hi - lo > tolerance) {
    Rational q = simplest_turn ? simplest_between(lo + (hi - lo) / 1024, hi - (hi - lo) / 1024) : (lo + hi) / 2;
    simplest_turn = !simplest_turn;
    if (auto p = feasible(q, false)) {
      if (accept(std::move(*p))) return finish(true);
    } else {
      lo = q;
    }
  }
  const Rational q = simplest_between(lo, hi);
  if (q > lo) {
    if (auto p = feasible(q, false))
      if (accept(std::move(*p))) return finish(true);
  }
  return finish(false);
}

inline DisplacementReport displacement_on_simplex(const OuterAutomorphism& alpha, const Rational& tolerance,
                                                  const Rational& floor = Rational(1, 1000)) {
  return displacement_on_simplex(candidate_table(alpha), alpha.graph(), tolerance, floor);
}

struct FixedPointCertificate {
  bool fixed = false;
  StretchReport stretch;
};

/// T ~ alpha.T exactly when both stretching factors equal 1.
inline FixedPointCertificate is_fixed_point(const CandidateTable& table, const GraphOfGroups& x,
                                            const std::vector<Rational>& metric) {
  auto s = stretch_factor(table, x, metric);
  return {s.lambda_r == 1 && s.lambda_l == 1, s};
}

inline FixedPointCertificate is_fixed_point(const OuterAutomorphism& alpha, const std::vector<Rational>& metric) {
  return is_fixed_point(candidate_table(alpha), alpha.graph(), metric);
}

// --- simplicial paths ----------------------------------------------------------

struct GridScan {
  int resolution = 0;
  int points = 0;
  Rational min_off_center;          // least Lambda_R over grid points other than the center
  std::vector<Rational> min_point;  // where it is attained
  bool center_on_grid = false;
  bool off_center_above_one = false;
};

/// Evaluates Lambda_R at every open-simplex point with coordinates in
/// (1/resolution)Z.
inline GridScan grid_scan(const CandidateTable& table, const GraphOfGroups& x, int resolution) {
  const int n = x.graph().unoriented_count();
  GridScan out;
  out.resolution = resolution;
  bool any = false;
  for (const auto& p : simplex_grid(n, resolution)) {
    ++out.points;
    if (is_simplex_center(p)) {
      out.center_on_grid = true;
      continue;
    }
    const Rational v = detail::max_ratio(table.forward, table.loops, p).first;
    if (!any || v < out.min_off_center) {
      out.min_off_center = v;
      out.min_point = p;
      any = true;
    }
  }
  out.off_center_above_one = !any || out.min_off_center > 1;
  return out;
}

struct PathPoint {
  std::string simplex;
  std::vector<Rational> coords;  // closed-simplex coordinates, summing to 1
};

struct SimplicialPath {
  std::vector<PathPoint> points;
};

struct SegmentReport {
  bool trivial = false;
  bool contains_non_center = false;
  std::optional<std::vector<Rational>> non_center_witness;
};

struct PathReport {
  std::vector<SegmentReport> segments;
  bool all_center = false;  // every point of the path is the centre of its open face
  bool constant = false;
};

/// Centre of the open face containing the point: all nonzero coordinates equal.
inline bool is_face_center(const std::vector<Rational>& coords) {
  std::optional<Rational> common;
  for (const auto& c : coords) {
    if (c == 0) continue;
    if (common && *common != c) return false;
    common = c;
  }
  return common.has_value();
}

inline PathReport validate_simplicial_path(const SimplicialPath& path) {
  if (path.points.empty()) throw Error(ErrorKind::MalformedPath, "path has no points");
  for (const auto& p : path.points) {
    Rational sum = 0;
    for (const auto& c : p.coords) {
      if (c < 0) throw Error(ErrorKind::MalformedPath, "negative coordinate");
      sum += c;
    }
    if (p.coords.empty() || sum != 1) throw Error(ErrorKind::MalformedPath, "coordinates must sum to 1");
  }
  PathReport report;
  report.all_center = is_face_center(path.points.front().coords);
  report.constant = true;
  for (std::size_t i = 1; i < path.points.size(); ++i) {
    const auto& a = path.points[i - 1];
    const auto& b = path.points[i];
    if (a.simplex != b.simplex || a.coords.size() != b.coords.size())
      throw Error(ErrorKind::MalformedPath, "consecutive points do not share a closed simplex");
    SegmentReport seg;
    if (a.coords == b.coords) {
      seg.trivial = true;
      seg.contains_non_center = !is_face_center(a.coords);
      if (seg.contains_non_center) seg.non_center_witness = a.coords;
    } else {
      report.constant = false;
      // At most one interior point of a nontrivial segment is a face centre.
      for (const Rational& t : {Rational(1, 2), Rational(1, 4)}) {
        std::vector<Rational> p(a.coords.size());
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = a.coords[k] + t * (b.coords[k] - a.coords[k]);
        if (!is_face_center(p)) {
          seg.contains_non_center = true;
          seg.non_center_witness = std::move(p);
          break;
        }
      }
    }
    if (seg.contains_non_center || !is_face_center(b.coords)) report.all_center = false;
    report.segments.push_back(std::move(seg));
  }
  return report;
}

}  // namespace ospace
