#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ospace/automorphism.hpp"
#include "ospace/bass_serre.hpp"
#include "ospace/factor_systems.hpp"
#include "ospace/lipschitz.hpp"

namespace ospace {

/// A length-preserving automorphism of a graph of groups, decorated so that
/// it induces an automorphism of the fundamental group:
///   phi on vertices and oriented edges (commuting with reverse and initial),
///   an isomorphism G_v -> G_phi(v) for each non-free vertex,
///   and for each unoriented edge e a pair of vertex-group elements (h, h')
///   so that e is carried to the path h . phi(e) . h'.
struct GraphMapRep {
  std::vector<int> vertex_map;
  std::vector<int> edge_map;                   // oriented edges
  std::vector<std::vector<int>> vertex_iso;    // per vertex; empty for free vertices
  std::vector<std::pair<int, int>> decoration; // per unoriented edge; element indices, -1 at free ends
  Homomorphism induced;                        // on standard generators
  Word conjugator;                             // (induced(g))alpha^-1 = conjugator^-1 g conjugator
};

namespace detail {

inline std::vector<LoopStep> image_of_edge(const GraphMapRep& rep, int e, const GraphOfGroups& x) {
  const int c = e & ~1;
  const int u = SerreGraph::unoriented(e);
  const int img = rep.edge_map[c];
  const auto [h, h2] = rep.decoration[u];
  auto deco = [&](int v, int element) {
    std::vector<LoopStep> out;
    if (element >= 0 && element != x.group(v).factors[0].identity())
      out.push_back(LoopStep::decorate(v, Word{Syllable::vertex(v, element)}));
    return out;
  };
  const int a = x.graph().initial(img), b = x.graph().terminal(img);
  std::vector<LoopStep> path;
  if (SerreGraph::is_canonical(e)) {
    auto d1 = deco(a, h), d2 = deco(b, h2);
    path.insert(path.end(), d1.begin(), d1.end());
    path.push_back(LoopStep::along(img));
    path.insert(path.end(), d2.begin(), d2.end());
  } else {
    auto d1 = deco(b, h2 < 0 ? -1 : x.group(b).factors[0].inverse(h2));
    auto d2 = deco(a, h < 0 ? -1 : x.group(a).factors[0].inverse(h));
    path.insert(path.end(), d1.begin(), d1.end());
    path.push_back(LoopStep::along(SerreGraph::reverse(img)));
    path.insert(path.end(), d2.begin(), d2.end());
  }
  return path;
}

}  // namespace detail

/// Pushes a loop through the decorated graph map.
inline BassLoop transport(const GraphMapRep& rep, const BassLoop& loop, const GraphOfGroups& x) {
  BassLoop out{rep.vertex_map[loop.start], {}};
  for (const auto& s : loop.steps) {
    if (s.is_edge()) {
      for (auto& t : detail::image_of_edge(rep, s.edge, x)) detail::push_step(out.steps, std::move(t), x);
    } else {
      const int w = rep.vertex_map[s.vertex];
      std::vector<Syllable> raw;
      for (const auto& syl : s.element.syllables) raw.push_back(Syllable::vertex(w, rep.vertex_iso[s.vertex][syl.value]));
      detail::push_step(out.steps, LoopStep::decorate(w, reduce(std::span<const Syllable>(raw), x)), x);
    }
  }
  return out;
}

inline Word transport(const GraphMapRep& rep, const Word& u, const GraphOfGroups& x) {
  return loop_to_word(transport(rep, word_to_loop(u, x), x), x);
}

/// Length-preserving automorphisms of the quotient (free/non-free status and
/// isomorphism type of vertex groups preserved), in lexicographic order of
/// the vertex map and then the edge map.
inline std::vector<std::pair<std::vector<int>, std::vector<int>>> graph_automorphisms(const GraphOfGroups& x) {
  const auto& g = x.graph();
  const int nv = g.vertex_count(), nu = g.unoriented_count();
  std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
  auto compatible = [&](int v, int w) {
    if (g.degree(v) != g.degree(w)) return false;
    const auto& a = x.group(v).factors;
    const auto& b = x.group(w).factors;
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (isomorphisms(a[i], b[i]).empty()) return false;
    return true;
  };
  std::vector<int> vmap(nv, -1), emap(2 * nu, -1);
  std::vector<bool> vused(nv, false), uused(nu, false);
  std::function<void(int)> edges = [&](int u) {
    if (u == nu) {
      out.emplace_back(vmap, emap);
      return;
    }
    const int e = 2 * u;
    for (int f = 0; f < 2 * nu; ++f) {
      const int fu = SerreGraph::unoriented(f);
      if (uused[fu]) continue;
      if (g.initial(f) != vmap[g.initial(e)] || g.terminal(f) != vmap[g.terminal(e)]) continue;
      if (x.lengths()[fu] != x.lengths()[u]) continue;
      uused[fu] = true;
      emap[e] = f;
      emap[e + 1] = SerreGraph::reverse(f);
      edges(u + 1);
      uused[fu] = false;
    }
  };
  std::function<void(int)> vertices = [&](int v) {
    if (v == nv) {
      edges(0);
      return;
    }
    for (int w = 0; w < nv; ++w) {
      if (vused[w] || !compatible(v, w)) continue;
      vused[w] = true;
      vmap[v] = w;
      vertices(v + 1);
      vused[w] = false;
    }
  };
  vertices(0);
  return out;
}

inline Homomorphism induced_homomorphism(const GraphMapRep& rep, const GraphOfGroups& x) {
  Homomorphism h;
  for (const auto& s : standard_generators(x)) h.images[s] = transport(rep, Word{s}, x);
  return h;
}

/// Outcome of the representative search. Without a representative the search
/// is inconclusive; lambda_r is the exact stretch factor at the metric.
struct RepresentativeSearch {
  std::optional<GraphMapRep> rep;
  Rational lambda_r;
  bool found() const noexcept { return rep.has_value(); }
};

namespace detail {

inline std::optional<GraphMapRep> search_representative(const OuterAutomorphism& alpha,
                                                         const std::vector<Rational>& metric, int bound) {
  const GraphOfGroups x = alpha.graph().with_lengths(metric);
  const auto& g = x.graph();
  for (int v = 0; v < g.vertex_count(); ++v)
    if (x.group(v).is_formal_product())
      throw Error(ErrorKind::TooLarge, "representative search needs finite vertex groups");
  const int nv = g.vertex_count(), nu = g.unoriented_count();

  for (auto& [vmap, emap] : graph_automorphisms(x)) {
    GraphMapRep rep;
    rep.vertex_map = vmap;
    rep.edge_map = emap;
    rep.vertex_iso.assign(nv, {});
    rep.decoration.assign(nu, {-1, -1});

    std::vector<std::vector<std::vector<int>>> iso_choices(nv);
    for (int v = 0; v < nv; ++v)
      if (!x.is_free(v)) iso_choices[v] = isomorphisms(x.group(v).factors[0], x.group(vmap[v]).factors[0]);
    // Decoration choices per edge end, identity first.
    std::vector<std::vector<std::pair<int, int>>> deco_choices(nu);
    for (int u = 0; u < nu; ++u) {
      const int img = emap[2 * u];
      const int a = g.initial(img), b = g.terminal(img);
      std::vector<int> at_a{-1}, at_b{-1};
      if (!x.is_free(a)) {
        const auto& t = x.group(a).factors[0];
        at_a = {t.identity()};
        for (int h : t.nonidentity_elements()) at_a.push_back(h);
      }
      if (!x.is_free(b)) {
        const auto& t = x.group(b).factors[0];
        at_b = {t.identity()};
        for (int h : t.nonidentity_elements()) at_b.push_back(h);
      }
      for (int h : at_a)
        for (int h2 : at_b) deco_choices[u].emplace_back(h, h2);
    }

    std::optional<GraphMapRep> hit;
    std::function<bool(int)> choose_deco = [&](int u) -> bool {
      if (u == nu) {
        rep.induced = induced_homomorphism(rep, x);
        Homomorphism beta = compose(rep.induced, alpha.backward(), x);
        if (auto w = is_inner(beta, x, bound)) {
          rep.conjugator = *w;
          hit = rep;
          return true;
        }
        return false;
      }
      for (const auto& d : deco_choices[u]) {
        rep.decoration[u] = d;
        if (choose_deco(u + 1)) return true;
      }
      return false;
    };
    std::function<bool(int)> choose_iso = [&](int v) -> bool {
      if (v == nv) return choose_deco(0);
      if (x.is_free(v)) return choose_iso(v + 1);
      for (const auto& m : iso_choices[v]) {
        rep.vertex_iso[v] = m;
        if (choose_iso(v + 1)) return true;
      }
      return false;
    };
    if (choose_iso(0)) return hit;
  }
  return std::nullopt;
}

}  // namespace detail

/// Searches decorated graph automorphisms of the quotient at `metric` for one
/// inducing alpha up to an inner automorphism of at most `bound` syllables.
inline RepresentativeSearch find_isometric_representative(const OuterAutomorphism& alpha,
                                                          const std::vector<Rational>& metric, int bound) {
  check_metric(metric, alpha.graph());
  return {detail::search_representative(alpha, metric, bound), stretch_factor(alpha, metric).lambda_r};
}

struct CycleStructure {
  std::vector<std::vector<int>> cycles;  // unoriented edges, each cycle led by its smallest edge
  bool single_cycle = false;
};

/// single_cycle iff phi permutes the unoriented quotient edges in one cycle.
inline CycleStructure edge_orbit_cycle_check(const GraphMapRep& rep) {
  const int nu = static_cast<int>(rep.edge_map.size()) / 2;
  CycleStructure out;
  std::vector<bool> seen(nu, false);
  for (int u = 0; u < nu; ++u) {
    if (seen[u]) continue;
    std::vector<int> cycle;
    for (int w = u; !seen[w]; w = SerreGraph::unoriented(rep.edge_map[2 * w])) {
      seen[w] = true;
      cycle.push_back(w);
    }
    out.cycles.push_back(std::move(cycle));
  }
  out.single_cycle = out.cycles.size() == 1;
  return out;
}

/// "(e1 e2 e3)(e4)".
inline std::string format_cycles(const CycleStructure& c, const GraphOfGroups& x) {
  std::string out;
  for (const auto& cycle : c.cycles) {
    out += "(";
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      if (i) out += " ";
      out += x.graph().unoriented_id(cycle[i]);
    }
    out += ")";
  }
  return out;
}


// --- subgraphs ---------------------------------------------------------------

struct ComponentInfo {
  std::vector<int> edges;
  std::vector<int> vertices;
  bool is_tree = false;
  int non_free = 0;
  bool elliptic() const { return is_tree && non_free <= 1; }
};

enum class SubgraphClass { Elliptic, Hyperbolic };

inline const char* to_string(SubgraphClass c) { return c == SubgraphClass::Elliptic ? "elliptic" : "hyperbolic"; }

inline std::vector<ComponentInfo> subgraph_components(const std::vector<int>& edges, const GraphOfGroups& x) {
  const auto& g = x.graph();
  std::vector<int> parent(g.vertex_count());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> root = [&](int v) { return parent[v] == v ? v : parent[v] = root(parent[v]); };
  std::vector<bool> touched(g.vertex_count(), false);
  for (int u : edges) {
    const int a = g.initial(2 * u), b = g.terminal(2 * u);
    touched[a] = touched[b] = true;
    parent[root(a)] = root(b);
  }
  std::map<int, ComponentInfo> by_root;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (touched[v]) {
      auto& c = by_root[root(v)];
      c.vertices.push_back(v);
      if (!x.is_free(v)) ++c.non_free;
    }
  for (int u : edges) by_root[root(g.initial(2 * u))].edges.push_back(u);
  std::vector<ComponentInfo> out;
  for (auto& [_, c] : by_root) {
    std::sort(c.edges.begin(), c.edges.end());
    c.is_tree = c.edges.size() + 1 == c.vertices.size();
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const ComponentInfo& a, const ComponentInfo& b) { return a.edges < b.edges; });
  return out;
}

/// Elliptic iff every component is a tree with at most one non-free vertex.
inline SubgraphClass classify_subgraph(const std::vector<int>& edges, const GraphOfGroups& x) {
  for (const auto& c : subgraph_components(edges, x))
    if (!c.elliptic()) return SubgraphClass::Hyperbolic;
  return SubgraphClass::Elliptic;
}

struct ReductionCertificate {
  std::vector<int> edges;
  std::vector<ComponentInfo> components;
  std::vector<std::vector<int>> orbits;
};

inline constexpr int max_scan_orbits = 20;

/// Scans unions of <phi>-orbits of unoriented edges (proper: nonempty and not
/// everything), fewest edges first, and returns the first hyperbolic one. A
/// nullopt result does not prove irreducibility.
inline std::optional<ReductionCertificate> reducibility_scan(const GraphMapRep& rep, const GraphOfGroups& x) {
  const auto orbits = edge_orbit_cycle_check(rep).cycles;
  const int k = static_cast<int>(orbits.size());
  if (k > max_scan_orbits) throw Error(ErrorKind::TooLarge, "more than 20 edge orbits");
  std::vector<std::vector<int>> subsets;
  for (unsigned long mask = 1; mask + 1 < (1UL << k); ++mask) {
    std::vector<int> edges;
    for (int i = 0; i < k; ++i)
      if (mask & (1UL << i)) edges.insert(edges.end(), orbits[i].begin(), orbits[i].end());
    std::sort(edges.begin(), edges.end());
    subsets.push_back(std::move(edges));
  }
  std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  for (const auto& s : subsets) {
    if (classify_subgraph(s, x) == SubgraphClass::Hyperbolic)
      return ReductionCertificate{s, subgraph_components(s, x), orbits};
  }
  return std::nullopt;
}

// --- collapse ----------------------------------------------------------------

struct CollapseResult {
  GraphOfGroups graph;
  Homomorphism forward;   // old standard generators -> words over the collapsed graph
  Homomorphism backward;  // collapsed standard generators -> words over the old graph
  std::vector<int> vertex_image;
};

/// Collapses each component of a subforest to one vertex carrying the free
/// product of the component's vertex groups.
inline CollapseResult collapse_subforest(const GraphOfGroups& x, std::vector<int> forest) {
  require_valid(x);
  const auto& g = x.graph();
  std::sort(forest.begin(), forest.end());
  forest.erase(std::unique(forest.begin(), forest.end()), forest.end());
  for (int u : forest)
    if (u < 0 || u >= g.unoriented_count()) throw Error(ErrorKind::UnknownSymbol, "unknown edge in forest");
  if (static_cast<int>(forest.size()) == g.unoriented_count())
    throw Error(ErrorKind::NotProper, "collapsing every edge leaves no graph");
  const auto components = subgraph_components(forest, x);
  for (const auto& c : components)
    if (!c.is_tree) throw Error(ErrorKind::NotAForest, "component containing edge " + g.unoriented_id(c.edges.front()) + " has a loop");

  std::vector<bool> collapsed(g.unoriented_count(), false);
  for (int u : forest) collapsed[u] = true;
  std::vector<int> component_of(g.vertex_count(), -1);
  for (int i = 0; i < static_cast<int>(components.size()); ++i)
    for (int v : components[i].vertices) component_of[v] = i;

  // New vertices: untouched old vertices, then one per component, ordered by
  // their smallest old vertex index.
  SerreGraph ng;
  std::vector<VertexGroup> ngroups;
  std::vector<int> image(g.vertex_count(), -1);
  std::vector<int> factor_shift(g.vertex_count(), 0);
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (image[v] >= 0) continue;
    if (component_of[v] < 0) {
      image[v] = ng.add_vertex(g.vertex_id(v));
      ngroups.push_back(x.group(v));
      continue;
    }
    const auto& comp = components[component_of[v]];
    std::string id = g.vertex_id(comp.vertices.front());
    for (int w : comp.vertices) id = std::min(id, g.vertex_id(w));
    const int nvtx = ng.add_vertex(id);
    VertexGroup merged;
    for (int w : comp.vertices) {
      image[w] = nvtx;
      factor_shift[w] = static_cast<int>(merged.factors.size());
      for (const auto& f : x.group(w).factors) merged.factors.push_back(f);
    }
    ngroups.push_back(std::move(merged));
  }
  std::vector<Rational> nlengths;
  std::vector<int> new_edge_of(g.unoriented_count(), -1);
  for (int u = 0; u < g.unoriented_count(); ++u) {
    if (collapsed[u]) continue;
    new_edge_of[u] = ng.add_edge(g.edge_id(2 * u), g.edge_id(2 * u + 1), image[g.initial(2 * u)], image[g.terminal(2 * u)]);
    nlengths.push_back(x.lengths()[u]);
  }
  CollapseResult out{GraphOfGroups(std::move(ng), std::move(nlengths), std::move(ngroups)), {}, {}, image};
  const GraphOfGroups& y = out.graph;

  for (const auto& s : standard_generators(x)) {
    BassLoop loop = word_to_loop(Word{s}, x);
    BassLoop mapped{image[loop.start], {}};
    for (const auto& step : loop.steps) {
      if (step.is_edge()) {
        const int u = SerreGraph::unoriented(step.edge);
        if (collapsed[u]) continue;
        detail::push_step(mapped.steps, LoopStep::along(2 * new_edge_of[u] + (step.edge & 1)), y);
      } else {
        std::vector<Syllable> raw;
        for (const auto& syl : step.element.syllables)
          raw.push_back(Syllable::vertex(image[step.vertex], syl.value, syl.factor + factor_shift[step.vertex]));
        detail::push_step(mapped.steps, LoopStep::decorate(image[step.vertex], reduce(std::span<const Syllable>(raw), y)), y);
      }
    }
    out.forward.images[s] = loop_to_word(mapped, y);
  }

  // Lifting back: walk inside collapsed components along their tree paths.
  auto component_path = [&](int from, int to) {
    std::vector<int> path;
    if (from == to) return path;
    const auto& comp = components[component_of[from]];
    std::map<int, int> via;  // vertex -> oriented edge used to reach it
    std::vector<int> queue{from};
    via[from] = -1;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const int v = queue[i];
      for (int u : comp.edges)
        for (int e : {2 * u, 2 * u + 1})
          if (g.initial(e) == v && !via.count(g.terminal(e))) {
            via[g.terminal(e)] = e;
            queue.push_back(g.terminal(e));
          }
    }
    for (int v = to; v != from; v = g.initial(via[v])) path.push_back(via[v]);
    std::reverse(path.begin(), path.end());
    return path;
  };
  std::vector<int> old_edge_of(y.graph().unoriented_count(), -1);
  for (int u = 0; u < g.unoriented_count(); ++u)
    if (new_edge_of[u] >= 0) old_edge_of[new_edge_of[u]] = u;
  // Which old vertex carries new factor f at new vertex w.
  auto old_vertex_of_factor = [&](int w, int f) {
    for (int v = 0; v < g.vertex_count(); ++v)
      if (image[v] == w && !x.is_free(v) && f >= factor_shift[v] &&
          f < factor_shift[v] + static_cast<int>(x.group(v).factors.size()))
        return v;
    return -1;
  };
  for (const auto& s : standard_generators(y)) {
    BassLoop loop = word_to_loop(Word{s}, y);
    int start = -1;
    for (int v = 0; v < g.vertex_count(); ++v)
      if (image[v] == loop.start && (start < 0 || g.vertex_id(v) == y.graph().vertex_id(loop.start))) start = v;
    std::vector<LoopStep> raw;
    int here = start;
    auto walk_to = [&](int target) {
      if (here == target) return;
      for (int e : component_path(here, target)) raw.push_back(LoopStep::along(e));
      here = target;
    };
    for (const auto& step : loop.steps) {
      if (step.is_edge()) {
        const int e = 2 * old_edge_of[SerreGraph::unoriented(step.edge)] + (step.edge & 1);
        walk_to(g.initial(e));
        raw.push_back(LoopStep::along(e));
        here = g.terminal(e);
      } else {
        for (const auto& syl : step.element.syllables) {
          const int v = old_vertex_of_factor(step.vertex, syl.factor);
          walk_to(v);
          raw.push_back(LoopStep::decorate(v, Word{Syllable::vertex(v, syl.value, syl.factor - factor_shift[v])}));
        }
      }
    }
    walk_to(start);
    BassLoop lifted{start, {}};
    for (auto& st : raw) detail::push_step(lifted.steps, std::move(st), x);
    out.backward.images[s] = loop_to_word(lifted, x);
  }
  return out;
}

}  // namespace ospace
