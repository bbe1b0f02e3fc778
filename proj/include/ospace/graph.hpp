#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "ospace/error.hpp"
#include "ospace/group_table.hpp"
#include "ospace/rational.hpp"

namespace ospace {

/// Serre graph: oriented edges come in reverse pairs. Unoriented edge `u`
/// owns oriented edges 2u (the canonical orientation, whose id is the
/// lexicographically smaller of the pair) and 2u+1.
class SerreGraph {
 public:
  int add_vertex(std::string id) {
    if (vertex_index_.count(id)) throw Error(ErrorKind::Structural, "duplicate vertex id '" + id + "'");
    if (edge_index_.count(id)) throw Error(ErrorKind::Structural, "id '" + id + "' used for vertex and edge");
    vertex_index_[id] = vertex_count();
    vertex_ids_.push_back(std::move(id));
    return vertex_count() - 1;
  }

  /// Adds the pair {id: from -> to, reverse_id: to -> from}; returns the
  /// unoriented edge index.
  int add_edge(std::string id, std::string reverse_id, int from, int to) {
    if (from < 0 || from >= vertex_count() || to < 0 || to >= vertex_count())
      throw Error(ErrorKind::Structural, "edge '" + id + "' references an unknown vertex");
    if (id == reverse_id) throw Error(ErrorKind::Structural, "edge '" + id + "' is its own reverse");
    for (const auto& s : {id, reverse_id})
      if (edge_index_.count(s) || vertex_index_.count(s))
        throw Error(ErrorKind::Structural, "duplicate edge id '" + s + "'");
    if (reverse_id < id) {
      std::swap(id, reverse_id);
      std::swap(from, to);
    }
    const int u = unoriented_count();
    edge_index_[id] = 2 * u;
    edge_index_[reverse_id] = 2 * u + 1;
    edge_ids_.push_back(std::move(id));
    edge_ids_.push_back(std::move(reverse_id));
    initial_.push_back(from);
    initial_.push_back(to);
    return u;
  }

  int vertex_count() const noexcept { return static_cast<int>(vertex_ids_.size()); }
  int edge_count() const noexcept { return static_cast<int>(edge_ids_.size()); }
  int unoriented_count() const noexcept { return edge_count() / 2; }

  static int reverse(int e) noexcept { return e ^ 1; }
  static int unoriented(int e) noexcept { return e / 2; }
  static bool is_canonical(int e) noexcept { return (e & 1) == 0; }
  int initial(int e) const { return initial_[e]; }
  int terminal(int e) const { return initial_[reverse(e)]; }

  const std::string& vertex_id(int v) const { return vertex_ids_[v]; }
  const std::string& edge_id(int e) const { return edge_ids_[e]; }
  /// Canonical id of an unoriented edge.
  const std::string& unoriented_id(int u) const { return edge_ids_[2 * u]; }

  std::optional<int> find_vertex(const std::string& id) const {
    auto it = vertex_index_.find(id);
    if (it == vertex_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<int> find_edge(const std::string& id) const {
    auto it = edge_index_.find(id);
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
  }

  /// Number of oriented edges starting at v (a loop counts twice).
  int degree(int v) const {
    return static_cast<int>(std::count(initial_.begin(), initial_.end(), v));
  }

  std::vector<int> outgoing(int v) const {
    std::vector<int> out;
    for (int e = 0; e < edge_count(); ++e)
      if (initial_[e] == v) out.push_back(e);
    return out;
  }

  bool is_connected() const {
    if (vertex_count() == 0) return false;
    std::vector<bool> seen(vertex_count(), false);
    std::vector<int> stack{0};
    seen[0] = true;
    int reached = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int e = 0; e < edge_count(); ++e) {
        if (initial_[e] != v) continue;
        int w = terminal(e);
        if (!seen[w]) {
          seen[w] = true;
          ++reached;
          stack.push_back(w);
        }
      }
    }
    return reached == vertex_count();
  }

  /// Vertex with the lexicographically smallest id.
  int smallest_vertex() const {
    int best = 0;
    for (int v = 1; v < vertex_count(); ++v)
      if (vertex_ids_[v] < vertex_ids_[best]) best = v;
    return best;
  }

 private:
  std::vector<std::string> vertex_ids_;
  std::vector<std::string> edge_ids_;
  std::vector<int> initial_;
  std::map<std::string, int> vertex_index_;
  std::map<std::string, int> edge_index_;
};

/// A vertex group is a free product of finite factors: no factors means the
/// trivial group, one factor is an ordinary finite group, and several factors
/// form a formal (infinite) free product such as the vertex created by
/// collapsing a forest.
struct VertexGroup {
  std::vector<FiniteGroupTable> factors;

  bool is_trivial() const noexcept { return factors.empty(); }
  bool is_formal_product() const noexcept { return factors.size() > 1; }

  std::string describe() const {
    if (factors.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i) out += "*";
      const auto& f = factors[i];
      out += f.name().empty() ? "G" + std::to_string(f.order()) : f.name();
    }
    return out;
  }
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Serre graph + edge lengths + vertex groups + spanning tree. Edge groups are
/// trivial throughout. Construction does not enforce the degree rules; use
/// validate() for those.
class GraphOfGroups {
 public:
  GraphOfGroups() = default;

  /// `lengths` is indexed by unoriented edge. When `spanning_tree` is empty a
  /// breadth-first tree from the smallest vertex id is chosen.
  GraphOfGroups(SerreGraph graph, std::vector<Rational> lengths, std::vector<VertexGroup> groups,
                std::vector<int> spanning_tree = {})
      : graph_(std::move(graph)), lengths_(std::move(lengths)), groups_(std::move(groups)) {
    if (static_cast<int>(lengths_.size()) != graph_.unoriented_count())
      throw Error(ErrorKind::Structural, "one length per unoriented edge required");
    if (static_cast<int>(groups_.size()) != graph_.vertex_count())
      throw Error(ErrorKind::Structural, "one vertex group per vertex required");
    for (auto& g : groups_) {
      std::erase_if(g.factors, [](const FiniteGroupTable& f) { return f.is_trivial(); });
    }
    if (graph_.vertex_count() == 0) return;
    basepoint_ = graph_.smallest_vertex();
    in_tree_.assign(graph_.unoriented_count(), false);
    if (spanning_tree.empty()) {
      build_bfs_tree();
    } else {
      for (int u : spanning_tree) {
        if (u < 0 || u >= graph_.unoriented_count())
          throw Error(ErrorKind::Structural, "spanning tree references unknown edge");
        in_tree_[u] = true;
      }
      build_tree_paths();
    }
  }

  const SerreGraph& graph() const noexcept { return graph_; }
  const std::vector<Rational>& lengths() const noexcept { return lengths_; }
  const Rational& length(int oriented_edge) const { return lengths_[SerreGraph::unoriented(oriented_edge)]; }
  const VertexGroup& group(int v) const { return groups_[v]; }
  const std::vector<VertexGroup>& groups() const noexcept { return groups_; }
  bool is_free(int v) const { return groups_[v].is_trivial(); }
  int basepoint() const noexcept { return basepoint_; }
  bool in_tree(int unoriented_edge) const { return in_tree_[unoriented_edge]; }
  bool tree_ok() const noexcept { return tree_ok_; }

  std::vector<int> spanning_tree() const {
    std::vector<int> out;
    for (int u = 0; u < graph_.unoriented_count(); ++u)
      if (in_tree_[u]) out.push_back(u);
    return out;
  }

  /// Unoriented edges outside the spanning tree; these carry the edge letters.
  std::vector<int> non_tree_edges() const {
    std::vector<int> out;
    for (int u = 0; u < graph_.unoriented_count(); ++u)
      if (!in_tree_[u]) out.push_back(u);
    return out;
  }

  /// Oriented tree edges from the basepoint to v.
  const std::vector<int>& tree_path(int v) const { return tree_paths_[v]; }

  /// Same data with new lengths.
  GraphOfGroups with_lengths(std::vector<Rational> lengths) const {
    if (lengths.size() != lengths_.size())
      throw Error(ErrorKind::InvalidMetric, "metric has " + std::to_string(lengths.size()) +
                                                " entries, graph has " + std::to_string(lengths_.size()) +
                                                " edges");
    GraphOfGroups copy = *this;
    copy.lengths_ = std::move(lengths);
    return copy;
  }

 private:
  void build_bfs_tree() {
    std::vector<bool> seen(graph_.vertex_count(), false);
    std::queue<int> q;
    q.push(basepoint_);
    seen[basepoint_] = true;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int e : graph_.outgoing(v)) {
        int w = graph_.terminal(e);
        if (seen[w]) continue;
        seen[w] = true;
        in_tree_[SerreGraph::unoriented(e)] = true;
        q.push(w);
      }
    }
    build_tree_paths();
  }

  void build_tree_paths() {
    const int n = graph_.vertex_count();
    tree_paths_.assign(n, {});
    std::vector<bool> seen(n, false);
    std::queue<int> q;
    q.push(basepoint_);
    seen[basepoint_] = true;
    int reached = 1, tree_edges = 0;
    for (int u = 0; u < graph_.unoriented_count(); ++u) tree_edges += in_tree_[u] ? 1 : 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int e : graph_.outgoing(v)) {
        if (!in_tree_[SerreGraph::unoriented(e)]) continue;
        int w = graph_.terminal(e);
        if (seen[w]) continue;
        seen[w] = true;
        ++reached;
        tree_paths_[w] = tree_paths_[v];
        tree_paths_[w].push_back(e);
        q.push(w);
      }
    }
    tree_ok_ = reached == n && tree_edges == n - 1;
  }

  SerreGraph graph_;
  std::vector<Rational> lengths_;
  std::vector<VertexGroup> groups_;
  std::vector<bool> in_tree_;
  std::vector<std::vector<int>> tree_paths_;
  int basepoint_ = 0;
  bool tree_ok_ = false;
};

/// Lists every violated structural invariant; an empty report means the data
/// is a legal quotient graph of groups of a tree in the deformation space.
inline ValidationReport validate(const GraphOfGroups& x) {
  ValidationReport report;
  const auto& g = x.graph();
  if (g.vertex_count() == 0) report.violations.push_back("vertex set is empty");
  if (g.unoriented_count() == 0) report.violations.push_back("edge set is empty");
  if (g.vertex_count() == 0) return report;
  if (!g.is_connected()) report.violations.push_back("graph is not connected");
  else if (!x.tree_ok()) report.violations.push_back("spanning tree is not a spanning tree of the graph");
  for (int u = 0; u < g.unoriented_count(); ++u)
    if (x.lengths()[u] <= 0)
      report.violations.push_back("edge " + g.unoriented_id(u) + " has non-positive length");
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (!x.is_free(v)) continue;
    const int d = g.degree(v);
    if (d == 1) report.violations.push_back("degree 1 vertex is free: " + g.vertex_id(v));
    else if (d == 2) report.violations.push_back("free vertex of degree 2: " + g.vertex_id(v));
    else if (d == 0 && g.vertex_count() > 0) report.violations.push_back("isolated free vertex: " + g.vertex_id(v));
  }
  return report;
}

inline void require_valid(const GraphOfGroups& x) {
  auto report = validate(x);
  if (!report.ok()) throw Error(ErrorKind::Structural, report.violations.front());
}

struct RankAndFactors {
  int factors = 0;  // number of nontrivial vertex groups
  int rank = 0;     // rank of the free part
};

inline RankAndFactors rank_and_factors(const GraphOfGroups& x) {
  require_valid(x);
  RankAndFactors out;
  out.rank = x.graph().unoriented_count() - x.graph().vertex_count() + 1;
  for (int v = 0; v < x.graph().vertex_count(); ++v)
    if (!x.is_free(v)) ++out.factors;
  return out;
}

/// Sum of lengths over unoriented edges.
inline Rational covolume(const GraphOfGroups& x) {
  Rational sum = 0;
  for (const auto& l : x.lengths()) sum += l;
  return sum;
}

inline GraphOfGroups rescale(const GraphOfGroups& x, const Rational& mu) {
  if (mu <= 0) throw Error(ErrorKind::InvalidMetric, "rescaling factor must be positive");
  auto lengths = x.lengths();
  for (auto& l : lengths) l *= mu;
  return x.with_lengths(std::move(lengths));
}

}  // namespace ospace
