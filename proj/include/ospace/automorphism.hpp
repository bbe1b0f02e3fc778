#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ospace/bass_serre.hpp"
#include "ospace/factor_systems.hpp"
#include "ospace/homomorphism.hpp"

namespace ospace {

/// Conjugation data showing that each factor group is carried onto a
/// conjugate of a factor group: (G_i)alpha = w_i^-1 G_sigma(i) w_i, with i
/// indexing the representatives of the free factor system.
struct InvarianceWitness {
  std::vector<int> sigma;
  std::vector<Word> conjugators;
};

struct NotInvariant {
  Syllable generator;
  std::string reason;
};

inline std::size_t max_image_length(const Homomorphism& h) {
  std::size_t m = 0;
  for (const auto& [_, w] : h.images) m = std::max(m, w.size());
  return m;
}

inline int default_inner_bound(const Homomorphism& h) { return 2 * static_cast<int>(max_image_length(h)) + 2; }

namespace detail {
inline bool conjugates_to(const Homomorphism& beta, const GraphOfGroups& x, const std::vector<Syllable>& gens,
                          const Word& w) {
  const Word w_inv = invert(w, x);
  for (const auto& g : gens)
    if (multiply(multiply(w_inv, Word{g}, x), w, x) != beta.image(g, x)) return false;
  return true;
}
}  // namespace detail

/// Exhaustive search over reduced words of syllable length <= bound for w
/// with (g)beta = w^-1 g w on every standard generator g. Words are tried
/// shortest first, lexicographically within a length, so the result is the
/// first hit in that order. nullopt means "not found within the bound",
/// never "not inner".
inline std::optional<Word> is_inner(const Homomorphism& beta, const GraphOfGroups& x, int bound) {
  const auto gens = standard_generators(x);
  if (detail::conjugates_to(beta, x, gens, Word{})) return Word{};
  std::vector<Syllable> letters;
  for (const auto& s : gens) {
    letters.push_back(s);
    if (s.is_edge()) letters.push_back(Syllable::edge(s.index, -1));
  }
  std::sort(letters.begin(), letters.end());
  std::vector<Word> layer{Word{}};
  for (int len = 1; len <= bound; ++len) {
    std::vector<Word> next;
    for (const auto& w : layer) {
      for (const auto& s : letters) {
        if (!w.empty() && (detail::same_factor(w.syllables.back(), s) || detail::cancels(w.syllables.back(), s)))
          continue;
        Word n = w;
        n.syllables.push_back(s);
        if (detail::conjugates_to(beta, x, gens, n)) return n;
        next.push_back(std::move(n));
      }
    }
    layer = std::move(next);
  }
  return std::nullopt;
}

inline std::optional<Word> is_inner(const Homomorphism& beta, const GraphOfGroups& x) {
  return is_inner(beta, x, default_inner_bound(beta));
}

/// Conjugation g -> w^-1 g w as a homomorphism.
inline Homomorphism conjugation(const Word& w, const GraphOfGroups& x) {
  Homomorphism h;
  const Word w_inv = invert(w, x);
  for (const auto& g : standard_generators(x)) h.images[g] = multiply(multiply(w_inv, Word{g}, x), w, x);
  return h;
}

/// Checks that `alpha` permutes the conjugacy classes of the factor groups
/// of `system` (whose reference must be alpha's graph).
inline std::variant<InvarianceWitness, NotInvariant> check_invariance(const Homomorphism& alpha,
                                                                      const FreeFactorSystem& system) {
  const GraphOfGroups& x = system.reference;
  const auto& reps = system.representatives;
  InvarianceWitness witness;
  std::vector<bool> hit(reps.size(), false);
  for (int rep : reps) {
    std::optional<CoverVertex> common;
    std::vector<Word> images;
    Syllable first{};
    for (const auto& s : vertex_group_elements(x, rep)) {
      Word img = apply(alpha, Word{s}, x, x);
      if (img.empty()) return NotInvariant{s, "generator maps to the identity"};
      auto fixed = fixed_vertex(img, x);
      if (!fixed) return NotInvariant{s, "image " + format(img, x) + " is hyperbolic"};
      if (common && *common != *fixed)
        return NotInvariant{s, "images of the factor at " + x.graph().vertex_id(rep) + " fix different vertices"};
      if (!common) first = s;
      common = std::move(fixed);
      images.push_back(std::move(img));
    }
    auto it = std::find(reps.begin(), reps.end(), common->vertex);
    if (it == reps.end()) return NotInvariant{first, "image lands at a free vertex"};
    const int j = static_cast<int>(it - reps.begin());
    if (hit[j])
      return NotInvariant{first, "two factors map into conjugates of the factor at " +
                                     x.graph().vertex_id(common->vertex)};
    hit[j] = true;
    const Word& c = common->coset;
    const Word c_inv = invert(c, x);
    // Onto: conjugating back must hit every element of the target factor.
    if (!x.group(rep).is_formal_product() && !x.group(common->vertex).is_formal_product()) {
      std::vector<Syllable> seen;
      for (const auto& img : images) {
        Word local = multiply(multiply(c_inv, img, x), c, x);
        if (local.size() != 1) return NotInvariant{first, "image is not inside the conjugated factor"};
        seen.push_back(local[0]);
      }
      std::sort(seen.begin(), seen.end());
      seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
      if (seen.size() != vertex_group_elements(x, common->vertex).size())
        return NotInvariant{first, "image of the factor at " + x.graph().vertex_id(rep) +
                                       " is a proper subgroup of a factor"};
    }
    witness.sigma.push_back(j);
    witness.conjugators.push_back(c_inv);
  }
  return witness;
}

/// An outer automorphism given by generator images together with an explicit
/// inverse. Construction verifies both composites are inner and that the
/// free factor system of the reference graph is invariant.
class OuterAutomorphism {
 public:
  OuterAutomorphism(GraphOfGroups x, Homomorphism forward, Homomorphism backward, std::optional<int> bound = {})
      : x_(std::move(x)), forward_(std::move(forward)), backward_(std::move(backward)) {
    require_valid(x_);
    const auto there_and_back = compose(forward_, backward_, x_);
    const auto back_and_there = compose(backward_, forward_, x_);
    if (!is_inner(there_and_back, x_, bound.value_or(default_inner_bound(there_and_back))) ||
        !is_inner(back_and_there, x_, bound.value_or(default_inner_bound(back_and_there))))
      throw Error(ErrorKind::NotAHomomorphism, "supplied inverse does not invert the automorphism up to conjugation");
    auto inv = check_invariance(forward_, ffs_of(x_));
    if (auto* bad = std::get_if<NotInvariant>(&inv))
      throw Error(ErrorKind::NotAHomomorphism, "free factor system is not invariant: " + bad->reason);
    witness_ = std::get<InvarianceWitness>(inv);
  }

  static OuterAutomorphism identity(const GraphOfGroups& x) {
    return OuterAutomorphism(x, identity_homomorphism(x), identity_homomorphism(x));
  }

  const GraphOfGroups& graph() const noexcept { return x_; }
  const Homomorphism& forward() const noexcept { return forward_; }
  const Homomorphism& backward() const noexcept { return backward_; }
  const InvarianceWitness& witness() const noexcept { return witness_; }

  OuterAutomorphism inverse() const { return OuterAutomorphism(x_, backward_, forward_); }

  Word apply(const Word& u) const { return ospace::apply(forward_, u, x_, x_); }
  Word apply_inverse(const Word& u) const { return ospace::apply(backward_, u, x_, x_); }

 private:
  GraphOfGroups x_;
  Homomorphism forward_;
  Homomorphism backward_;
  InvarianceWitness witness_;
};

/// Length of u in the twisted tree alpha.T, i.e. l_T((u)alpha). `x` supplies
/// the metric and must share alpha's underlying graph.
inline Rational twisted_translation_length(const OuterAutomorphism& alpha, const Word& u, const GraphOfGroups& x) {
  return translation_length(alpha.apply(u), x);
}

inline Rational twisted_translation_length(const OuterAutomorphism& alpha, const Word& u) {
  return twisted_translation_length(alpha, u, alpha.graph());
}

}  // namespace ospace
