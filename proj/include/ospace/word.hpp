#pragma once

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ospace/error.hpp"
#include "ospace/graph.hpp"

namespace ospace {

/// One letter of a free-product normal form: either a nonidentity element of
/// a vertex group factor, or a non-tree edge letter with an orientation sign.
struct Syllable {
  enum class Kind : unsigned char { Vertex, Edge };

  Kind kind = Kind::Vertex;
  int index = 0;   // vertex id index, or unoriented edge index
  int factor = 0;  // factor of the vertex group (0 unless the group is a formal product)
  int value = 0;   // element index, or +1/-1 for edge letters

  static Syllable vertex(int v, int element, int factor = 0) { return {Kind::Vertex, v, factor, element}; }
  static Syllable edge(int unoriented_edge, int sign = 1) { return {Kind::Edge, unoriented_edge, 0, sign}; }

  bool is_vertex() const noexcept { return kind == Kind::Vertex; }
  bool is_edge() const noexcept { return kind == Kind::Edge; }

  friend auto operator<=>(const Syllable&, const Syllable&) = default;
};

struct Word {
  std::vector<Syllable> syllables;

  Word() = default;
  explicit Word(std::vector<Syllable> s) : syllables(std::move(s)) {}
  Word(std::initializer_list<Syllable> s) : syllables(s) {}

  bool empty() const noexcept { return syllables.empty(); }
  std::size_t size() const noexcept { return syllables.size(); }
  const Syllable& operator[](std::size_t i) const { return syllables[i]; }

  friend auto operator<=>(const Word&, const Word&) = default;
};

namespace detail {

inline const FiniteGroupTable& factor_table(const GraphOfGroups& x, const Syllable& s) {
  return x.group(s.index).factors[s.factor];
}

inline void check_syllable(const Syllable& s, const GraphOfGroups& x) {
  if (s.is_vertex()) {
    if (s.index < 0 || s.index >= x.graph().vertex_count())
      throw Error(ErrorKind::UnknownSymbol, "syllable references unknown vertex");
    const auto& g = x.group(s.index);
    if (s.factor < 0 || s.factor >= static_cast<int>(g.factors.size()))
      throw Error(ErrorKind::UnknownSymbol,
                  "vertex " + x.graph().vertex_id(s.index) + " has no group factor " + std::to_string(s.factor));
    if (s.value < 0 || s.value >= g.factors[s.factor].order())
      throw Error(ErrorKind::UnknownSymbol, "element index out of range at vertex " + x.graph().vertex_id(s.index));
  } else {
    if (s.index < 0 || s.index >= x.graph().unoriented_count())
      throw Error(ErrorKind::UnknownSymbol, "syllable references unknown edge");
    if (x.in_tree(s.index))
      throw Error(ErrorKind::UnknownSymbol, "edge " + x.graph().unoriented_id(s.index) +
                                                " lies in the spanning tree and is not a generator");
    if (s.value != 1 && s.value != -1) throw Error(ErrorKind::UnknownSymbol, "edge letter sign must be +1 or -1");
  }
}

inline bool same_factor(const Syllable& a, const Syllable& b) {
  return a.is_vertex() && b.is_vertex() && a.index == b.index && a.factor == b.factor;
}

inline bool cancels(const Syllable& a, const Syllable& b) {
  return a.is_edge() && b.is_edge() && a.index == b.index && a.value == -b.value;
}

/// Pushes `s` onto a normal-form stack, merging or cancelling with the top.
inline void push_reduced(std::vector<Syllable>& stack, Syllable s, const GraphOfGroups& x) {
  if (s.is_vertex() && s.value == factor_table(x, s).identity()) return;
  if (!stack.empty()) {
    Syllable& top = stack.back();
    if (same_factor(top, s)) {
      top.value = factor_table(x, s).multiply(top.value, s.value);
      if (top.value == factor_table(x, s).identity()) stack.pop_back();
      return;
    }
    if (cancels(top, s)) {
      stack.pop_back();
      return;
    }
  }
  stack.push_back(s);
}

}  // namespace detail

inline Syllable inverse(const Syllable& s, const GraphOfGroups& x) {
  Syllable out = s;
  if (s.is_vertex()) out.value = detail::factor_table(x, s).inverse(s.value);
  else out.value = -s.value;
  return out;
}

/// Free-product normal form: same-factor neighbours are merged through the
/// group table, identities dropped, and e e' pairs cancelled, until stable.
inline Word reduce(std::span<const Syllable> raw, const GraphOfGroups& x) {
  std::vector<Syllable> stack;
  stack.reserve(raw.size());
  for (const auto& s : raw) {
    detail::check_syllable(s, x);
    detail::push_reduced(stack, s, x);
  }
  return Word(std::move(stack));
}

inline Word reduce(const Word& w, const GraphOfGroups& x) { return reduce(std::span(w.syllables), x); }

inline Word multiply(const Word& u, const Word& v, const GraphOfGroups& x) {
  std::vector<Syllable> stack = u.syllables;
  for (const auto& s : v.syllables) detail::push_reduced(stack, s, x);
  return Word(std::move(stack));
}

inline Word invert(const Word& u, const GraphOfGroups& x) {
  std::vector<Syllable> out;
  out.reserve(u.size());
  for (auto it = u.syllables.rbegin(); it != u.syllables.rend(); ++it) out.push_back(inverse(*it, x));
  return Word(std::move(out));
}

inline Word conjugate(const Word& u, const Word& by, const GraphOfGroups& x) {
  // by * u * by^-1
  return multiply(multiply(by, u, x), invert(by, x), x);
}

inline Word power(const Word& u, int n, const GraphOfGroups& x) {
  Word base = n < 0 ? invert(u, x) : u;
  Word out;
  for (int i = 0; i < (n < 0 ? -n : n); ++i) out = multiply(out, base, x);
  return out;
}

/// True when no merge or cancellation happens between the last and first
/// syllables.
inline bool is_cyclically_reduced(const Word& u) {
  if (u.size() <= 1) return true;
  const auto& first = u.syllables.front();
  const auto& last = u.syllables.back();
  return !detail::same_factor(first, last) && !detail::cancels(last, first);
}

struct CyclicReduction {
  Word core;
  Word conjugator;  // input = conjugator * core * conjugator^-1
};

/// Repeatedly moves the first syllable into the conjugator until the core
/// is cyclically reduced.
inline CyclicReduction cyclic_reduce(const Word& u, const GraphOfGroups& x) {
  CyclicReduction out{u, {}};
  while (!is_cyclically_reduced(out.core)) {
    const Syllable s = out.core.syllables.front();
    out.conjugator.syllables.push_back(s);
    Word s_word{s};
    out.core = multiply(multiply(Word{inverse(s, x)}, out.core, x), s_word, x);
  }
  return out;
}

// --- text form -------------------------------------------------------------

inline std::string format_syllable(const Syllable& s, const GraphOfGroups& x) {
  if (s.is_edge()) {
    std::string id = x.graph().unoriented_id(s.index);
    return s.value > 0 ? id : id + "'";
  }
  std::string out = x.graph().vertex_id(s.index);
  if (x.group(s.index).is_formal_product()) out += "[" + std::to_string(s.factor) + "]";
  return out + ".g" + std::to_string(s.value);
}

/// "v1.g1*e3*v2.g2*e3'"; the empty word prints as "1".
inline std::string format(const Word& w, const GraphOfGroups& x) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += '*';
    out += format_syllable(w[i], x);
  }
  return out;
}

inline Syllable parse_syllable(std::string_view token, const GraphOfGroups& x) {
  const std::string t(token);
  const auto& g = x.graph();
  if (auto e = g.find_edge(t)) {
    return Syllable::edge(SerreGraph::unoriented(*e), SerreGraph::is_canonical(*e) ? 1 : -1);
  }
  if (!t.empty() && t.back() == '\'') {
    if (auto e = g.find_edge(t.substr(0, t.size() - 1)))
      return Syllable::edge(SerreGraph::unoriented(*e), SerreGraph::is_canonical(*e) ? -1 : 1);
  }
  auto dot = t.rfind(".g");
  if (dot == std::string::npos) throw Error(ErrorKind::Parse, "unrecognised syllable '" + t + "'");
  std::string head = t.substr(0, dot);
  const std::string element = t.substr(dot + 2);
  int factor = 0;
  if (!head.empty() && head.back() == ']') {
    auto open = head.rfind('[');
    if (open == std::string::npos) throw Error(ErrorKind::Parse, "unbalanced factor index in '" + t + "'");
    const std::string f = head.substr(open + 1, head.size() - open - 2);
    if (!detail::all_digits(f)) throw Error(ErrorKind::Parse, "bad factor index in '" + t + "'");
    factor = std::stoi(f);
    head = head.substr(0, open);
  }
  auto v = g.find_vertex(head);
  if (!v) throw Error(ErrorKind::UnknownSymbol, "unknown vertex '" + head + "' in '" + t + "'");
  if (!detail::all_digits(element)) throw Error(ErrorKind::Parse, "bad element index in '" + t + "'");
  return Syllable::vertex(*v, std::stoi(element), factor);
}

/// Parses '*'-separated tokens and returns the reduced word. "" and "1" are
/// the identity.
inline Word parse_word(std::string_view text, const GraphOfGroups& x) {
  std::vector<Syllable> raw;
  std::string_view rest = text;
  while (!rest.empty()) {
    auto star = rest.find('*');
    std::string_view token = rest.substr(0, star);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (!token.empty() && token != "1") raw.push_back(parse_syllable(token, x));
    if (star == std::string_view::npos) break;
    rest.remove_prefix(star + 1);
  }
  return reduce(std::span<const Syllable>(raw), x);
}

/// Conjugacy canonical form: the rotation of the cyclic core whose text form
/// is lexicographically least.
inline Word conjugacy_canonical(const Word& u, const GraphOfGroups& x) {
  Word core = cyclic_reduce(u, x).core;
  if (core.size() <= 1) return core;
  Word best = core;
  std::string best_text = format(best, x);
  for (std::size_t r = 1; r < core.size(); ++r) {
    Word rot;
    rot.syllables.insert(rot.syllables.end(), core.syllables.begin() + r, core.syllables.end());
    rot.syllables.insert(rot.syllables.end(), core.syllables.begin(), core.syllables.begin() + r);
    std::string text = format(rot, x);
    if (text < best_text) {
      best = std::move(rot);
      best_text = std::move(text);
    }
  }
  return best;
}

/// All standard generators: every nonidentity element of every vertex-group
/// factor, then every positive non-tree edge letter.
inline std::vector<Syllable> standard_generators(const GraphOfGroups& x) {
  std::vector<Syllable> out;
  for (int v = 0; v < x.graph().vertex_count(); ++v) {
    const auto& factors = x.group(v).factors;
    for (int f = 0; f < static_cast<int>(factors.size()); ++f)
      for (int g : factors[f].nonidentity_elements()) out.push_back(Syllable::vertex(v, g, f));
  }
  for (int u : x.non_tree_edges()) out.push_back(Syllable::edge(u, 1));
  return out;
}

/// Every reduced word with between 1 and `max_length` syllables, shortest
/// first, each length in lexicographic syllable order.
inline std::vector<Word> enumerate_words(const GraphOfGroups& x, int max_length) {
  std::vector<Syllable> letters;
  for (const auto& s : standard_generators(x)) {
    letters.push_back(s);
    if (s.is_edge()) letters.push_back(Syllable::edge(s.index, -1));
  }
  std::sort(letters.begin(), letters.end());
  std::vector<Word> out;
  std::vector<Word> layer{Word{}};
  for (int len = 1; len <= max_length; ++len) {
    std::vector<Word> next;
    for (const auto& w : layer) {
      for (const auto& s : letters) {
        if (!w.empty()) {
          const auto& last = w.syllables.back();
          if (detail::same_factor(last, s) || detail::cancels(last, s)) continue;
        }
        Word n = w;
        n.syllables.push_back(s);
        next.push_back(std::move(n));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

}  // namespace ospace
