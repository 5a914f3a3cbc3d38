#pragma once

// Permutation groups stored as sorted element lists, the isometry group of a
// finite metric space, and the largest subgroup of a generated group that
// acts isometrically.

#include <algorithm>
#include <set>
#include <vector>

#include "qmi/error.hpp"
#include "qmi/magic_unitary.hpp"
#include "qmi/metric_space.hpp"

namespace qmi {

inline Permutation identity_permutation(int n) {
  Permutation p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  return p;
}

/// (outer o inner)(i) = outer(inner(i)).
inline Permutation compose(const Permutation& outer, const Permutation& inner) {
  if (outer.size() != inner.size()) {
    throw Error(ErrorKind::SizeMismatch, {int(outer.size()), int(inner.size())});
  }
  Permutation out(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) out[i] = outer[inner[i]];
  return out;
}

inline Permutation inverse(const Permutation& p) {
  Permutation out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[p[i]] = static_cast<int>(i);
  return out;
}

inline bool is_isometry(const Permutation& sigma, const FiniteMetricSpace& space) {
  const int n = space.size();
  if (static_cast<int>(sigma.size()) != n) throw Error(ErrorKind::SizeMismatch, {int(sigma.size()), n});
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (space(sigma[i], sigma[j]) != space(i, j)) return false;
    }
  }
  return true;
}

struct PermutationGroup {
  int n = 0;
  /// Sorted lexicographically, so the identity comes first.
  std::vector<Permutation> elements;

  std::size_t order() const { return elements.size(); }
  bool contains(const Permutation& p) const {
    return std::binary_search(elements.begin(), elements.end(), p);
  }
};

/// Closure under composition and inverse, checked exhaustively.
inline bool is_group(const PermutationGroup& g) {
  if (g.elements.empty() || !g.contains(identity_permutation(g.n))) return false;
  for (const auto& p : g.elements) {
    if (!g.contains(inverse(p))) return false;
    for (const auto& q : g.elements) {
      if (!g.contains(compose(p, q))) return false;
    }
  }
  return true;
}

/// All sigma with d(sigma i, sigma j) = d(i, j). Backtracking assigns
/// sigma(0), sigma(1), ... in order and only maps i to points with the same
/// sorted distance profile.
inline PermutationGroup isometry_group(const FiniteMetricSpace& space) {
  const int n = space.size();
  std::vector<std::vector<double>> profile(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) profile[i].push_back(space(i, j));
    std::sort(profile[i].begin(), profile[i].end());
  }

  PermutationGroup group{n, {}};
  Permutation sigma(n, -1);
  std::vector<bool> used(n, false);
  auto extend = [&](auto&& self, int i) -> void {
    if (i == n) {
      group.elements.push_back(sigma);
      return;
    }
    for (int c = 0; c < n; ++c) {
      if (used[c] || profile[c] != profile[i]) continue;
      bool ok = true;
      for (int k = 0; k < i && ok; ++k) ok = space(c, sigma[k]) == space(i, k);
      if (!ok) continue;
      sigma[i] = c;
      used[c] = true;
      self(self, i + 1);
      used[c] = false;
    }
    sigma[i] = -1;
  };
  extend(extend, 0);
  return group;
}

inline PermutationGroup generated_group(int n, const std::vector<Permutation>& gens) {
  for (const auto& g : gens) {
    if (static_cast<int>(g.size()) != n) throw Error(ErrorKind::SizeMismatch, {int(g.size()), n});
    check_bijection(g);
  }
  std::set<Permutation> seen{identity_permutation(n)};
  std::vector<Permutation> frontier{identity_permutation(n)};
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& p : frontier) {
      for (const auto& g : gens) {
        auto q = compose(g, p);
        if (seen.insert(q).second) next.push_back(std::move(q));
      }
    }
    frontier = std::move(next);
  }
  return {n, std::vector<Permutation>(seen.begin(), seen.end())};
}

inline PermutationGroup largest_isometric_subgroup(int n, const std::vector<Permutation>& gens,
                                                   const FiniteMetricSpace& space) {
  if (space.size() != n) throw Error(ErrorKind::SizeMismatch, {space.size(), n});
  const auto whole = generated_group(n, gens);
  PermutationGroup sub{n, {}};
  for (const auto& p : whole.elements) {
    if (is_isometry(p, space)) sub.elements.push_back(p);
  }
  if (!is_group(sub)) throw Error(ErrorKind::Inconsistent, {}, "isometric elements are not closed");
  return sub;
}

}  // namespace qmi
