#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ospace/bass_serre.hpp"
#include "ospace/graph.hpp"
#include "ospace/homomorphism.hpp"

namespace ospace {

/// Thistle for G_1 * ... * G_k * F_r: a free centre v0 carrying r petals
/// p1..pr and one spoke e_i to a vertex v_i with group G_i.
///
/// Two configurations would put a free vertex of degree <= 2 at the centre
/// and are adjusted instead: k = 2, r = 0 is the single edge e1 from v1 to v2,
/// and k = 1, r = 0 is the single vertex v1 (degenerate, flagged by validate).
/// k = 0 with r <= 1 has no legal quotient and is rejected.
/// Default lengths give every edge 1/(edge count).
inline GraphOfGroups build_thistle(const std::vector<FiniteGroupTable>& factors, int rank,
                                   std::optional<std::vector<Rational>> lengths = std::nullopt) {
  for (const auto& f : factors)
    if (f.is_trivial()) throw Error(ErrorKind::InvalidConfiguration, "free factors must be nontrivial");
  const int k = static_cast<int>(factors.size());
  if (rank < 0) throw Error(ErrorKind::InvalidConfiguration, "rank must be non-negative");
  if (k + rank < 1) throw Error(ErrorKind::InvalidConfiguration, "empty free product");
  if (k == 0 && rank == 1)
    throw Error(ErrorKind::InvalidConfiguration, "F_1 has no quotient without a free vertex of degree 2");

  SerreGraph g;
  std::vector<VertexGroup> groups;
  if (k == 1 && rank == 0) {
    g.add_vertex("v1");
    groups.push_back({{factors[0]}});
  } else if (k == 2 && rank == 0) {
    int a = g.add_vertex("v1"), b = g.add_vertex("v2");
    groups.push_back({{factors[0]}});
    groups.push_back({{factors[1]}});
    g.add_edge("e1", "e1'", a, b);
  } else {
    int centre = g.add_vertex("v0");
    groups.push_back({});
    for (int i = 0; i < k; ++i) {
      int v = g.add_vertex("v" + std::to_string(i + 1));
      groups.push_back({{factors[i]}});
      g.add_edge("e" + std::to_string(i + 1), "e" + std::to_string(i + 1) + "'", centre, v);
    }
    for (int j = 0; j < rank; ++j) g.add_edge("p" + std::to_string(j + 1), "p" + std::to_string(j + 1) + "'", centre, centre);
  }
  const int n = g.unoriented_count();
  std::vector<Rational> l;
  if (lengths) {
    if (static_cast<int>(lengths->size()) != n)
      throw Error(ErrorKind::InvalidMetric, "thistle has " + std::to_string(n) + " edges");
    l = *lengths;
  } else {
    l.assign(n, n ? Rational(1, n) : Rational(0));
  }
  return GraphOfGroups(std::move(g), std::move(l), std::move(groups));
}

/// Traditional free factor system read off a reference graph of groups: one
/// representative per non-free vertex.
struct FreeFactorSystem {
  GraphOfGroups reference;
  std::vector<int> representatives;

  std::size_t size() const noexcept { return representatives.size(); }

  /// G itself is not elliptic unless the reference is a single vertex.
  bool is_proper() const {
    return reference.graph().vertex_count() > 1 || reference.graph().unoriented_count() > 0;
  }

  std::vector<std::string> describe() const {
    std::vector<std::string> out;
    for (int v : representatives)
      out.push_back("[" + reference.group(v).describe() + "]@" + reference.graph().vertex_id(v));
    return out;
  }
};

inline FreeFactorSystem ffs_of(const GraphOfGroups& x) {
  require_valid(x);
  FreeFactorSystem out{x, {}};
  for (int v = 0; v < x.graph().vertex_count(); ++v)
    if (!x.is_free(v)) out.representatives.push_back(v);
  return out;
}

/// True iff the generators of `subgroup` (given as words over `x`) all fix a
/// common vertex of the Bass-Serre tree of `x`. Trivial words are ignored.
inline bool common_fixed_vertex(const std::vector<Word>& subgroup, const GraphOfGroups& x) {
  std::optional<CoverVertex> common;
  for (const auto& w : subgroup) {
    if (w.empty()) continue;
    auto fixed = fixed_vertex(w, x);
    if (!fixed) return false;
    if (common && *common != *fixed) return false;
    common = std::move(fixed);
  }
  return true;
}

/// Every nonidentity element of the vertex group at `v`, as generators.
inline std::vector<Syllable> vertex_group_elements(const GraphOfGroups& x, int v) {
  std::vector<Syllable> out;
  const auto& factors = x.group(v).factors;
  for (int f = 0; f < static_cast<int>(factors.size()); ++f)
    for (int g : factors[f].nonidentity_elements()) out.push_back(Syllable::vertex(v, g, f));
  return out;
}

/// F1 <= F2: each representative subgroup of F1, translated through
/// `dictionary` into words over F2's reference, is elliptic there.
inline bool ffs_leq(const FreeFactorSystem& f1, const FreeFactorSystem& f2, const Homomorphism& dictionary) {
  for (int v : f1.representatives) {
    std::vector<Word> images;
    for (const auto& s : vertex_group_elements(f1.reference, v))
      images.push_back(apply(dictionary, Word{s}, f1.reference, f2.reference));
    if (!common_fixed_vertex(images, f2.reference)) return false;
  }
  return true;
}

}  // namespace ospace
