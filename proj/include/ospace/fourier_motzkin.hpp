#pragma once

#include <algorithm>
#include <iterator>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "ospace/rational.hpp"

namespace ospace {

/// coeffs . y <= rhs, or < rhs when strict.
struct LinearConstraint {
  std::vector<Rational> coeffs;
  Rational rhs;
  bool strict = false;
};

namespace detail {

struct TrackedConstraint {
  LinearConstraint c;
  std::vector<int> history;  // indices of the original constraints combined
};

/// Scales so the first nonzero coefficient (or rhs) has absolute value 1.
inline void normalise(LinearConstraint& c) {
  Rational pivot = 0;
  for (const auto& a : c.coeffs)
    if (a != 0) {
      pivot = abs(a);
      break;
    }
  if (pivot == 0) pivot = c.rhs != 0 ? Rational(abs(c.rhs)) : Rational(1);
  if (pivot == 1) return;
  for (auto& a : c.coeffs) a /= pivot;
  c.rhs /= pivot;
}

inline bool trivially_true(const LinearConstraint& c) { return c.strict ? 0 < c.rhs : 0 <= c.rhs; }

inline bool all_zero(const LinearConstraint& c, int upto) {
  for (int i = 0; i < upto; ++i)
    if (c.coeffs[i] != 0) return false;
  return true;
}

}  // namespace detail

/// Exact Fourier-Motzkin elimination with Chernikov's redundancy rule.
/// Returns a feasible point or nullopt when the system has no solution.
/// Intended for a handful of variables.
inline std::optional<std::vector<Rational>> fourier_motzkin_solve(const std::vector<LinearConstraint>& input,
                                                                  int variables) {
  using detail::TrackedConstraint;
  // stages[k] involves variables 0..k-1 only.
  std::vector<std::vector<TrackedConstraint>> stages(variables + 1);
  for (int i = 0; i < static_cast<int>(input.size()); ++i) {
    TrackedConstraint t{input[i], {i}};
    t.c.coeffs.resize(variables, Rational(0));
    detail::normalise(t.c);
    stages[variables].push_back(std::move(t));
  }
  for (int k = variables; k > 0; --k) {
    const int var = k - 1;
    const int eliminated = variables - var;
    std::vector<TrackedConstraint> pos, neg, next;
    for (auto& t : stages[k]) {
      const Rational& a = t.c.coeffs[var];
      if (a > 0) pos.push_back(t);
      else if (a < 0) neg.push_back(t);
      else next.push_back(t);
    }
    for (const auto& p : pos) {
      for (const auto& q : neg) {
        std::vector<int> hist;
        std::set_union(p.history.begin(), p.history.end(), q.history.begin(), q.history.end(),
                       std::back_inserter(hist));
        if (static_cast<int>(hist.size()) > eliminated + 1) continue;
        const Rational sp = 1 / p.c.coeffs[var];
        const Rational sq = -1 / q.c.coeffs[var];
        LinearConstraint c;
        c.coeffs.resize(variables, Rational(0));
        for (int i = 0; i < var; ++i) c.coeffs[i] = p.c.coeffs[i] * sp + q.c.coeffs[i] * sq;
        c.rhs = p.c.rhs * sp + q.c.rhs * sq;
        c.strict = p.c.strict || q.c.strict;
        detail::normalise(c);
        next.push_back({std::move(c), std::move(hist)});
      }
    }
    // Drop exact duplicates, keeping the strict copy.
    std::sort(next.begin(), next.end(), [](const TrackedConstraint& a, const TrackedConstraint& b) {
      return std::tie(a.c.coeffs, a.c.rhs, b.c.strict) < std::tie(b.c.coeffs, b.c.rhs, a.c.strict);
    });
    next.erase(std::unique(next.begin(), next.end(),
                           [](const TrackedConstraint& a, const TrackedConstraint& b) {
                             return a.c.coeffs == b.c.coeffs && a.c.rhs == b.c.rhs;
                           }),
               next.end());
    stages[var] = std::move(next);
  }
  for (const auto& t : stages[0])
    if (!detail::trivially_true(t.c)) return std::nullopt;

  std::vector<Rational> point(variables, Rational(0));
  for (int k = 0; k < variables; ++k) {
    std::optional<Rational> lo, hi;
    bool lo_strict = false, hi_strict = false;
    for (const auto& t : stages[k + 1]) {
      const Rational& a = t.c.coeffs[k];
      Rational r = t.c.rhs;
      for (int i = 0; i < k; ++i) r -= t.c.coeffs[i] * point[i];
      if (a == 0) continue;
      const Rational bound = r / a;
      if (a > 0) {
        if (!hi || bound < *hi || (bound == *hi && t.c.strict)) {
          hi = bound;
          hi_strict = t.c.strict;
        }
      } else {
        if (!lo || bound > *lo || (bound == *lo && t.c.strict)) {
          lo = bound;
          lo_strict = t.c.strict;
        }
      }
    }
    Rational value = 0;
    if (lo && hi) value = (*lo == *hi) ? *lo : (*lo + *hi) / 2;
    else if (lo) value = lo_strict ? *lo + 1 : *lo;
    else if (hi) value = hi_strict ? *hi - 1 : *hi;
    point[k] = value;
  }
  return point;
}

}  // namespace ospace
