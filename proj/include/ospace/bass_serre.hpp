#pragma once

#include <deque>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ospace/graph.hpp"
#include "ospace/word.hpp"

namespace ospace {

/// One step of a closed path in the graph of groups: either an oriented edge
/// or a vertex-group decoration at the current vertex.
struct LoopStep {
  enum class Kind : unsigned char { Edge, Element };

  Kind kind = Kind::Edge;
  int edge = -1;    // oriented edge (Edge)
  int vertex = -1;  // current vertex (Element)
  Word element;     // reduced word in the vertex group, every syllable at `vertex`

  static LoopStep along(int oriented_edge) { return {Kind::Edge, oriented_edge, -1, {}}; }
  static LoopStep decorate(int v, Word w) { return {Kind::Element, -1, v, std::move(w)}; }

  bool is_edge() const noexcept { return kind == Kind::Edge; }

  friend bool operator==(const LoopStep&, const LoopStep&) = default;
};

struct BassLoop {
  int start = 0;
  std::vector<LoopStep> steps;

  int edge_count() const {
    int n = 0;
    for (const auto& s : steps) n += s.is_edge() ? 1 : 0;
    return n;
  }
};

namespace detail {

/// Appends a step, cancelling backtracks with trivial decoration and merging
/// adjacent decorations.
inline void push_step(std::vector<LoopStep>& steps, LoopStep step, const GraphOfGroups& x) {
  if (step.is_edge()) {
    if (!steps.empty() && steps.back().is_edge() && steps.back().edge == SerreGraph::reverse(step.edge)) {
      steps.pop_back();
      return;
    }
    steps.push_back(std::move(step));
    return;
  }
  if (step.element.empty()) return;
  if (!steps.empty() && !steps.back().is_edge()) {
    Word merged = multiply(steps.back().element, step.element, x);
    if (merged.empty()) steps.pop_back();
    else steps.back().element = std::move(merged);
    return;
  }
  steps.push_back(std::move(step));
}

inline void push_tree_path(std::vector<LoopStep>& steps, int v, bool towards, const GraphOfGroups& x) {
  const auto& path = x.tree_path(v);
  if (towards) {
    for (int e : path) push_step(steps, LoopStep::along(e), x);
  } else {
    for (auto it = path.rbegin(); it != path.rend(); ++it) push_step(steps, LoopStep::along(SerreGraph::reverse(*it)), x);
  }
}

}  // namespace detail

/// Closed path at the basepoint whose fundamental-group class is `u`.
inline BassLoop word_to_loop(const Word& u, const GraphOfGroups& x) {
  BassLoop loop{x.basepoint(), {}};
  for (const auto& s : u.syllables) {
    if (s.is_vertex()) {
      detail::push_tree_path(loop.steps, s.index, true, x);
      detail::push_step(loop.steps, LoopStep::decorate(s.index, Word{s}), x);
      detail::push_tree_path(loop.steps, s.index, false, x);
    } else {
      const int e = 2 * s.index + (s.value > 0 ? 0 : 1);
      detail::push_tree_path(loop.steps, x.graph().initial(e), true, x);
      detail::push_step(loop.steps, LoopStep::along(e), x);
      detail::push_tree_path(loop.steps, x.graph().terminal(e), false, x);
    }
  }
  return loop;
}

/// Reads a closed path (at any vertex) back as a word: tree edges vanish,
/// non-tree edges become letters, decorations become their syllables.
inline Word loop_to_word(const BassLoop& loop, const GraphOfGroups& x) {
  std::vector<Syllable> raw;
  for (const auto& s : loop.steps) {
    if (s.is_edge()) {
      const int u = SerreGraph::unoriented(s.edge);
      if (!x.in_tree(u)) raw.push_back(Syllable::edge(u, SerreGraph::is_canonical(s.edge) ? 1 : -1));
    } else {
      raw.insert(raw.end(), s.element.syllables.begin(), s.element.syllables.end());
    }
  }
  return reduce(std::span<const Syllable>(raw), x);
}

/// Reduces a step sequence as a cyclic sequence; the result is conjugate to
/// the input.
inline std::vector<LoopStep> cyclically_reduce_steps(std::vector<LoopStep> raw, const GraphOfGroups& x) {
  std::vector<LoopStep> linear;
  for (auto& s : raw) detail::push_step(linear, std::move(s), x);
  std::deque<LoopStep> steps(linear.begin(), linear.end());
  while (steps.size() >= 2) {
    auto& front = steps.front();
    auto& back = steps.back();
    if (!front.is_edge() && !back.is_edge()) {
      Word merged = multiply(back.element, front.element, x);
      steps.pop_back();
      if (merged.empty()) steps.pop_front();
      else steps.front().element = std::move(merged);
      continue;
    }
    if (front.is_edge() && back.is_edge() && back.edge == SerreGraph::reverse(front.edge)) {
      steps.pop_back();
      steps.pop_front();
      continue;
    }
    break;
  }
  return {steps.begin(), steps.end()};
}

/// The cyclically reduced loop of `u`: it projects the axis of a hyperbolic
/// element, and has no edges exactly when `u` is elliptic.
inline std::vector<LoopStep> reduced_cycle(const Word& u, const GraphOfGroups& x) {
  return cyclically_reduce_steps(word_to_loop(u, x).steps, x);
}

inline bool is_elliptic(const Word& u, const GraphOfGroups& x) {
  for (const auto& s : reduced_cycle(u, x))
    if (s.is_edge()) return false;
  return true;
}

inline Rational translation_length(const Word& u, const GraphOfGroups& x) {
  Rational total = 0;
  for (const auto& s : reduced_cycle(u, x))
    if (s.is_edge()) total += x.length(s.edge);
  return total;
}

/// Crossings of each unoriented edge by the cyclically reduced loop, so that
/// translation_length(u) = sum_e n_e(u) * length(e) for every metric.
inline std::vector<int> crossing_vector(const Word& u, const GraphOfGroups& x) {
  std::vector<int> n(x.graph().unoriented_count(), 0);
  bool any = false;
  for (const auto& s : reduced_cycle(u, x)) {
    if (!s.is_edge()) continue;
    ++n[SerreGraph::unoriented(s.edge)];
    any = true;
  }
  if (!any) throw Error(ErrorKind::EllipticWord, "word " + format(u, x) + " is elliptic");
  return n;
}

inline Rational dot(const std::vector<int>& crossings, const std::vector<Rational>& lengths) {
  Rational total = 0;
  for (std::size_t i = 0; i < crossings.size(); ++i)
    if (crossings[i]) total += lengths[i] * crossings[i];
  return total;
}

/// A vertex of the Bass-Serre tree: the coset g.G_v, labelled by the reduced
/// word g with any trailing syllables at v removed.
struct CoverVertex {
  int vertex = 0;
  Word coset;

  friend auto operator<=>(const CoverVertex&, const CoverVertex&) = default;
};

inline CoverVertex make_cover_vertex(int v, Word g) {
  while (!g.empty() && g.syllables.back().is_vertex() && g.syllables.back().index == v) g.syllables.pop_back();
  return {v, std::move(g)};
}

/// The unique vertex fixed by a nontrivial elliptic word, or nullopt when the
/// word is hyperbolic (or trivial).
inline std::optional<CoverVertex> fixed_vertex(const Word& u, const GraphOfGroups& x) {
  auto cr = cyclic_reduce(u, x);
  if (cr.core.empty()) return std::nullopt;
  const int v = cr.core.syllables.front().index;
  for (const auto& s : cr.core.syllables)
    if (!s.is_vertex() || s.index != v) return std::nullopt;
  return make_cover_vertex(v, cr.conjugator);
}

/// Finite ball in the universal cover around the lift of the basepoint.
class CoverBall {
 public:
  struct Node {
    CoverVertex label;
    int parent = -1;
    int parent_edge = -1;  // oriented quotient edge from parent to this node
    int depth = 0;
    Rational distance = 0;
  };

  CoverBall(const GraphOfGroups& x, Rational radius) : x_(&x), radius_(std::move(radius)) {
    require_valid(x);
    for (int v = 0; v < x.graph().vertex_count(); ++v)
      if (x.group(v).is_formal_product())
        throw Error(ErrorKind::TooLarge, "cover balls need finite vertex groups");
    add({make_cover_vertex(x.basepoint(), {}), -1, -1, 0, 0});
    for (std::size_t i = 0; i < nodes_.size(); ++i) expand(static_cast<int>(i));
  }

  const GraphOfGroups& graph() const { return *x_; }
  const Rational& radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const Node& node(int i) const { return nodes_[i]; }

  std::optional<int> find(const CoverVertex& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  int degree(int i) const {
    int d = nodes_[i].parent >= 0 ? 1 : 0;
    for (const auto& n : nodes_)
      if (n.parent == i) ++d;
    return d;
  }

  /// Image of a ball vertex under left multiplication by `g`, when it stays
  /// in the ball.
  std::optional<int> act(const Word& g, int i) const {
    const auto& n = nodes_[i];
    return find(make_cover_vertex(n.label.vertex, multiply(g, n.label.coset, *x_)));
  }

  Rational distance(int a, int b) const {
    Rational total = 0;
    while (a != b) {
      if (nodes_[a].depth >= nodes_[b].depth) {
        total += x_->length(nodes_[a].parent_edge);
        a = nodes_[a].parent;
      } else {
        total += x_->length(nodes_[b].parent_edge);
        b = nodes_[b].parent;
      }
    }
    return total;
  }

  std::string to_dot() const {
    std::ostringstream out;
    out << "graph cover {\n";
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const auto& n = nodes_[i];
      out << "  n" << i << " [label=\"" << x_->graph().vertex_id(n.label.vertex) << ":"
          << format(n.label.coset, *x_) << "\"];\n";
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const auto& n = nodes_[i];
      if (n.parent < 0) continue;
      out << "  n" << n.parent << " -- n" << i << " [label=\"" << to_string(x_->length(n.parent_edge)) << "\"];\n";
    }
    out << "}\n";
    return out.str();
  }

 private:
  void add(Node n) {
    index_.emplace(n.label, static_cast<int>(nodes_.size()));
    nodes_.push_back(std::move(n));
  }

  void expand(int i) {
    const GraphOfGroups& x = *x_;
    const CoverVertex here = nodes_[i].label;
    const int v = here.vertex;
    std::vector<Word> cosets;
    if (x.is_free(v)) {
      cosets.push_back(here.coset);
    } else {
      const auto& table = x.group(v).factors[0];
      for (int h = 0; h < table.order(); ++h)
        cosets.push_back(multiply(here.coset, Word{Syllable::vertex(v, h)}, x));
    }
    for (int e : x.graph().outgoing(v)) {
      const int u = SerreGraph::unoriented(e);
      Word letter;
      if (!x.in_tree(u)) letter = Word{Syllable::edge(u, SerreGraph::is_canonical(e) ? 1 : -1)};
      const Rational d = nodes_[i].distance + x.lengths()[u];
      if (d > radius_) continue;
      for (const auto& g : cosets) {
        CoverVertex next = make_cover_vertex(x.graph().terminal(e), multiply(g, letter, x));
        if (index_.count(next)) continue;
        add({std::move(next), i, e, nodes_[i].depth + 1, d});
      }
    }
  }

  const GraphOfGroups* x_;
  Rational radius_;
  std::vector<Node> nodes_;
  std::map<CoverVertex, int> index_;
};

inline CoverBall build_ball(const GraphOfGroups& x, const Rational& radius) { return CoverBall(x, radius); }

struct OracleResult {
  std::optional<Rational> length;  // nullopt: the ball cannot certify the minimum
  int fixed_vertices = 0;
};

/// Brute-force translation length: minimises d(x, u.x) over ball vertices.
/// Zero is certified by a fixed vertex; a positive value is certified by a
/// vertex x with d(u^-1.x, u.x) = 2 d(x, u.x), which puts x on the axis.
inline OracleResult oracle_translation_length(const Word& u, const CoverBall& ball) {
  const GraphOfGroups& x = ball.graph();
  const Word u_inv = invert(u, x);
  OracleResult out;
  std::optional<Rational> certified;
  for (int i = 0; i < static_cast<int>(ball.size()); ++i) {
    auto image = ball.act(u, i);
    if (!image) continue;
    if (*image == i) {
      ++out.fixed_vertices;
      certified = Rational(0);
      continue;
    }
    if (certified && *certified == 0) continue;
    auto back = ball.act(u_inv, i);
    if (!back) continue;
    const Rational d = ball.distance(i, *image);
    if (ball.distance(*back, *image) == 2 * d) {
      if (!certified || d < *certified) certified = d;
    }
  }
  out.length = certified;
  return out;
}

}  // namespace ospace
