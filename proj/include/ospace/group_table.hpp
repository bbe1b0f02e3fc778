#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ospace/error.hpp"

namespace ospace {

/// A finite group given by its full multiplication table on {0, ..., order-1}.
///
/// The constructor checks the group axioms exhaustively. Element indices are
/// preserved as given, so the identity need not be element 0.
class FiniteGroupTable {
 public:
  FiniteGroupTable() : FiniteGroupTable(std::vector<std::vector<int>>{{0}}) {}

  explicit FiniteGroupTable(std::vector<std::vector<int>> table, std::string name = {})
      : table_(std::move(table)), name_(std::move(name)) {
    const int n = static_cast<int>(table_.size());
    if (n == 0) throw Error(ErrorKind::Structural, "group table is empty");
    for (const auto& row : table_) {
      if (static_cast<int>(row.size()) != n)
        throw Error(ErrorKind::Structural, "group table is not square");
      for (int x : row)
        if (x < 0 || x >= n) throw Error(ErrorKind::Structural, "group table entry out of range");
    }
    identity_ = -1;
    for (int e = 0; e < n && identity_ < 0; ++e) {
      bool ok = true;
      for (int x = 0; x < n && ok; ++x) ok = table_[e][x] == x && table_[x][e] == x;
      if (ok) identity_ = e;
    }
    if (identity_ < 0) throw Error(ErrorKind::Structural, "group table has no identity");
    inverse_.assign(n, -1);
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y)
        if (table_[x][y] == identity_ && table_[y][x] == identity_) inverse_[x] = y;
      if (inverse_[x] < 0) throw Error(ErrorKind::Structural, "group table element without inverse");
    }
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z)
          if (table_[table_[x][y]][z] != table_[x][table_[y][z]])
            throw Error(ErrorKind::Structural, "group table is not associative");
  }

  int order() const noexcept { return static_cast<int>(table_.size()); }
  int identity() const noexcept { return identity_; }
  int multiply(int x, int y) const { return table_[x][y]; }
  int inverse(int x) const { return inverse_[x]; }
  bool is_trivial() const noexcept { return order() == 1; }
  const std::vector<std::vector<int>>& table() const noexcept { return table_; }
  const std::string& name() const noexcept { return name_; }

  int element_order(int x) const {
    int k = 1;
    for (int y = x; y != identity_; y = multiply(y, x)) ++k;
    return k;
  }

  std::vector<int> nonidentity_elements() const {
    std::vector<int> out;
    for (int x = 0; x < order(); ++x)
      if (x != identity_) out.push_back(x);
    return out;
  }

  /// Greedy generating set: repeatedly adds the smallest element outside the
  /// subgroup generated so far.
  std::vector<int> generators() const {
    std::vector<int> gens;
    std::vector<bool> in(order(), false);
    in[identity_] = true;
    for (int x = 0; x < order(); ++x) {
      if (in[x]) continue;
      gens.push_back(x);
      in = closure(gens);
    }
    return gens;
  }

  std::vector<bool> closure(const std::vector<int>& gens) const {
    std::vector<bool> in(order(), false);
    std::vector<int> frontier{identity_};
    in[identity_] = true;
    while (!frontier.empty()) {
      int x = frontier.back();
      frontier.pop_back();
      for (int g : gens) {
        int y = multiply(x, g);
        if (!in[y]) {
          in[y] = true;
          frontier.push_back(y);
        }
      }
    }
    return in;
  }

  friend bool operator==(const FiniteGroupTable& a, const FiniteGroupTable& b) {
    return a.table_ == b.table_;
  }

 private:
  std::vector<std::vector<int>> table_;
  std::string name_;
  int identity_ = 0;
  std::vector<int> inverse_;
};

inline FiniteGroupTable cyclic_group(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidConfiguration, "cyclic group order must be positive");
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[i][j] = (i + j) % n;
  return FiniteGroupTable(std::move(t), "Z" + std::to_string(n));
}

/// S3 as permutations of {0,1,2}, listed in lexicographic order (index 0 is
/// the identity).
inline FiniteGroupTable symmetric_group_3() {
  const std::vector<std::vector<int>> perms = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                               {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  auto index_of = [&](const std::vector<int>& p) {
    for (std::size_t i = 0; i < perms.size(); ++i)
      if (perms[i] == p) return static_cast<int>(i);
    return -1;
  };
  std::vector<std::vector<int>> t(6, std::vector<int>(6));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      // x * y means "apply x, then y" (right action).
      std::vector<int> c(3);
      for (int k = 0; k < 3; ++k) c[k] = perms[j][perms[i][k]];
      t[i][j] = index_of(c);
    }
  return FiniteGroupTable(std::move(t), "S3");
}

/// Built-in shorthand: "Z1".."Z12" and "S3".
inline std::optional<FiniteGroupTable> builtin_group(const std::string& name) {
  if (name == "S3") return symmetric_group_3();
  if (name.size() >= 2 && name[0] == 'Z') {
    try {
      std::size_t used = 0;
      int n = std::stoi(name.substr(1), &used);
      if (used == name.size() - 1 && n >= 1 && n <= 12) return cyclic_group(n);
    } catch (const std::exception&) {
    }
  }
  return std::nullopt;
}

/// All isomorphisms from `a` onto `b`, each as an element map of size
/// a.order(). Enumerated by assigning images to the greedy generators of `a`.
inline std::vector<std::vector<int>> isomorphisms(const FiniteGroupTable& a,
                                                  const FiniteGroupTable& b) {
  std::vector<std::vector<int>> out;
  if (a.order() != b.order()) return out;
  const auto gens = a.generators();
  std::vector<int> images(gens.size(), 0);
  const int n = b.order();
  auto try_assignment = [&]() {
    std::vector<int> map(a.order(), -1);
    map[a.identity()] = b.identity();
    std::vector<int> frontier{a.identity()};
    while (!frontier.empty()) {
      int x = frontier.back();
      frontier.pop_back();
      for (std::size_t i = 0; i < gens.size(); ++i) {
        int y = a.multiply(x, gens[i]);
        int fy = b.multiply(map[x], images[i]);
        if (map[y] < 0) {
          map[y] = fy;
          frontier.push_back(y);
        } else if (map[y] != fy) {
          return;
        }
      }
    }
    std::vector<bool> hit(n, false);
    for (int v : map) {
      if (hit[v]) return;
      hit[v] = true;
    }
    for (int x = 0; x < a.order(); ++x)
      for (int y = 0; y < a.order(); ++y)
        if (map[a.multiply(x, y)] != b.multiply(map[x], map[y])) return;
    out.push_back(std::move(map));
  };
  // Odometer over generator images.
  while (true) {
    try_assignment();
    std::size_t i = 0;
    while (i < images.size() && ++images[i] == n) images[i++] = 0;
    if (i == images.size()) break;
  }
  return out;
}

}  // namespace ospace
