#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ospace/error.hpp"
#include "ospace/graph.hpp"
#include "ospace/word.hpp"

namespace ospace {

/// A map on standard generators (vertex-group elements and positive non-tree
/// edge letters) of a source graph of groups, with images written as words
/// over a target graph of groups. Used both for automorphisms and for the
/// generator dictionaries produced by collapses.
struct Homomorphism {
  std::map<Syllable, Word> images;

  const Word& image(const Syllable& generator, const GraphOfGroups& source) const {
    auto it = images.find(generator);
    if (it == images.end())
      throw Error(ErrorKind::IncompleteDictionary, "no image for generator " + format_syllable(generator, source));
    return it->second;
  }
};

/// Image of a word; the result is reduced over `target`.
inline Word apply(const Homomorphism& h, const Word& u, const GraphOfGroups& source, const GraphOfGroups& target) {
  Word out;
  for (const auto& s : u.syllables) {
    if (s.is_vertex()) {
      out = multiply(out, h.image(s, source), target);
    } else {
      const Word& img = h.image(Syllable::edge(s.index, 1), source);
      out = multiply(out, s.value > 0 ? img : invert(img, target), target);
    }
  }
  return out;
}

inline Homomorphism identity_homomorphism(const GraphOfGroups& x) {
  Homomorphism h;
  for (const auto& s : standard_generators(x)) h.images[s] = Word{s};
  return h;
}

/// Composite "first f, then g" on generators: u -> g(f(u)).
inline Homomorphism compose(const Homomorphism& f, const Homomorphism& g, const GraphOfGroups& x) {
  Homomorphism out;
  for (const auto& s : standard_generators(x)) out.images[s] = apply(g, f.image(s, x), x, x);
  return out;
}

/// Extends images given on a generating subset of each vertex-group factor to
/// the whole factor and checks the relations of every factor table.
inline Homomorphism complete_homomorphism(std::map<Syllable, Word> given, const GraphOfGroups& source,
                                          const GraphOfGroups& target) {
  Homomorphism h;
  for (auto& [key, word] : given) {
    detail::check_syllable(key, source);
    if (key.is_edge() && key.value != 1)
      h.images[Syllable::edge(key.index, 1)] = invert(word, target);
    else
      h.images[key] = std::move(word);
  }
  for (int v = 0; v < source.graph().vertex_count(); ++v) {
    const auto& factors = source.group(v).factors;
    for (int f = 0; f < static_cast<int>(factors.size()); ++f) {
      const auto& table = factors[f];
      std::vector<std::optional<Word>> img(table.order());
      img[table.identity()] = Word{};
      std::vector<int> seeds;
      for (int g = 0; g < table.order(); ++g) {
        auto it = h.images.find(Syllable::vertex(v, g, f));
        if (it == h.images.end()) continue;
        img[g] = it->second;
        seeds.push_back(g);
      }
      // Closure under right multiplication by the seeds.
      std::vector<int> frontier;
      for (int g = 0; g < table.order(); ++g)
        if (img[g]) frontier.push_back(g);
      while (!frontier.empty()) {
        const int a = frontier.back();
        frontier.pop_back();
        for (int s : seeds) {
          const int b = table.multiply(a, s);
          if (img[b]) continue;
          img[b] = multiply(*img[a], *img[s], target);
          frontier.push_back(b);
        }
      }
      for (int g = 0; g < table.order(); ++g) {
        if (!img[g])
          throw Error(ErrorKind::IncompleteDictionary,
                      "images do not determine " + format_syllable(Syllable::vertex(v, g, f), source));
      }
      for (int a = 0; a < table.order(); ++a)
        for (int b = 0; b < table.order(); ++b)
          if (multiply(*img[a], *img[b], target) != *img[table.multiply(a, b)])
            throw Error(ErrorKind::NotAHomomorphism,
                        "relation of the group at " + source.graph().vertex_id(v) + " is not respected");
      if (!img[table.identity()]->empty())
        throw Error(ErrorKind::NotAHomomorphism, "identity must map to the empty word");
      for (int g : table.nonidentity_elements()) h.images[Syllable::vertex(v, g, f)] = *img[g];
    }
  }
  for (int u : source.non_tree_edges())
    if (!h.images.count(Syllable::edge(u, 1)))
      throw Error(ErrorKind::IncompleteDictionary, "no image for edge letter " + source.graph().unoriented_id(u));
  return h;
}

}  // namespace ospace
