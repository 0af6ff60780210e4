#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coxeter/diagram.hpp"

namespace coxeter {

/// Subset enumeration is exponential in the rank; anything past this is
/// refused with CapExceeded rather than attempted.
inline constexpr int kMaxEnumerationRank = 24;

/// Irreducible finite Coxeter types. Rank-2 aliases are normalized: label 3
/// reports A2, label 4 reports B2, labels >= 5 report I2(m). B and C are
/// identified; D starts at rank 4.
enum class TypeFamily { A, B, D, E6, E7, E8, F4, H3, H4, I2 };

struct TypeLabel {
  TypeFamily family{};
  int rank = 0;
  Label dihedral_label = 0;  // only meaningful for I2

  bool operator==(const TypeLabel&) const = default;
  auto operator<=>(const TypeLabel&) const = default;
};

inline std::string to_string(const TypeLabel& t) {
  switch (t.family) {
    case TypeFamily::A: return "A" + std::to_string(t.rank);
    case TypeFamily::B: return "B" + std::to_string(t.rank);
    case TypeFamily::D: return "D" + std::to_string(t.rank);
    case TypeFamily::E6: return "E6";
    case TypeFamily::E7: return "E7";
    case TypeFamily::E8: return "E8";
    case TypeFamily::F4: return "F4";
    case TypeFamily::H3: return "H3";
    case TypeFamily::H4: return "H4";
    case TypeFamily::I2: return "I2(" + std::to_string(t.dihedral_label) + ")";
  }
  return "?";
}

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r))
    throw std::overflow_error("group order exceeds 64 bits");
  return r;
}

inline std::uint64_t factorial(int n) {
  std::uint64_t r = 1;
  for (int i = 2; i <= n; ++i) r = checked_mul(r, static_cast<std::uint64_t>(i));
  return r;
}

inline std::uint64_t pow2(int n) {
  std::uint64_t r = 1;
  for (int i = 0; i < n; ++i) r = checked_mul(r, 2);
  return r;
}

}  // namespace detail

/// Order of the finite group of the given type, by the classical formulas.
inline std::uint64_t type_order(const TypeLabel& t) {
  using detail::checked_mul;
  using detail::factorial;
  using detail::pow2;
  switch (t.family) {
    case TypeFamily::A: return factorial(t.rank + 1);
    case TypeFamily::B: return checked_mul(pow2(t.rank), factorial(t.rank));
    case TypeFamily::D: return checked_mul(pow2(t.rank - 1), factorial(t.rank));
    case TypeFamily::E6: return 51840;
    case TypeFamily::E7: return 2903040;
    case TypeFamily::E8: return 696729600;
    case TypeFamily::F4: return 1152;
    case TypeFamily::H3: return 120;
    case TypeFamily::H4: return 14400;
    case TypeFamily::I2: return 2 * static_cast<std::uint64_t>(t.dihedral_label);
  }
  throw std::logic_error("unhandled type family");
}

namespace detail {

inline void check_subset(const Diagram& d, const std::vector<int>& subset) {
  std::vector<bool> seen(static_cast<std::size_t>(d.rank()), false);
  for (int v : subset) {
    if (v < 0 || v >= d.rank())
      throw std::invalid_argument("vertex index out of range: " +
                                  std::to_string(v));
    if (seen[static_cast<std::size_t>(v)])
      throw std::invalid_argument("repeated vertex in subset: " + d.name(v));
    seen[static_cast<std::size_t>(v)] = true;
  }
}

}  // namespace detail

/// Connected components of the subset under bonds of label >= 3 (including
/// infinity). Pairs labeled 2 commute and separate components. Components
/// come back sorted, ordered by least member.
inline std::vector<std::vector<int>> irreducible_components(
    const Diagram& d, std::vector<int> subset) {
  detail::check_subset(d, subset);
  std::sort(subset.begin(), subset.end());
  const int k = static_cast<int>(subset.size());
  std::vector<bool> visited(static_cast<std::size_t>(k), false);
  std::vector<std::vector<int>> components;
  for (int i = 0; i < k; ++i) {
    if (visited[static_cast<std::size_t>(i)]) continue;
    std::vector<int> component;
    std::vector<int> stack{i};
    visited[static_cast<std::size_t>(i)] = true;
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      component.push_back(subset[static_cast<std::size_t>(cur)]);
      for (int j = 0; j < k; ++j)
        if (!visited[static_cast<std::size_t>(j)] &&
            d.label(subset[static_cast<std::size_t>(cur)],
                    subset[static_cast<std::size_t>(j)]) != 2)
          visited[static_cast<std::size_t>(j)] = true,
          stack.push_back(j);
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  std::sort(components.begin(), components.end());
  return components;
}

/// Matches one irreducible component against the classification of finite
/// irreducible Coxeter systems. Returns nullopt when the component's group is
/// infinite (any infinite bond, any cycle, or a shape outside the table).
inline std::optional<TypeLabel> classify_component(const Diagram& d,
                                                   const std::vector<int>& c) {
  detail::check_subset(d, c);
  const int n = static_cast<int>(c.size());
  if (n == 0) return std::nullopt;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!label_is_finite(d.label(c[i], c[j]))) return std::nullopt;
  if (n == 1) return TypeLabel{TypeFamily::A, 1};

  // The classification graph: bonds with label >= 3. (Non-adjacent pairs are
  // exactly the label-2 ones after the infinity check above.)
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  int edge_count = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (d.label(c[i], c[j]) >= 3) {
        adj[static_cast<std::size_t>(i)].push_back(j);
        adj[static_cast<std::size_t>(j)].push_back(i);
        ++edge_count;
      }

  // Finite types are trees; a cycle means affine or worse.
  if (edge_count != n - 1) return std::nullopt;
  {
    std::vector<bool> visited(static_cast<std::size_t>(n), false);
    std::vector<int> stack{0};
    visited[0] = true;
    int reached = 0;
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      ++reached;
      for (int next : adj[static_cast<std::size_t>(cur)])
        if (!visited[static_cast<std::size_t>(next)])
          visited[static_cast<std::size_t>(next)] = true,
          stack.push_back(next);
    }
    if (reached != n) return std::nullopt;
  }

  int fork = -1;
  for (int i = 0; i < n; ++i) {
    const auto degree = adj[static_cast<std::size_t>(i)].size();
    if (degree >= 4) return std::nullopt;
    if (degree == 3) {
      if (fork >= 0) return std::nullopt;  // two forks
      fork = i;
    }
  }

  if (fork >= 0) {
    // D/E shapes: all bonds label 3, one fork, branch lengths decide.
    for (int i = 0; i < n; ++i)
      for (int j : adj[static_cast<std::size_t>(i)])
        if (d.label(c[i], c[j]) != 3) return std::nullopt;
    std::vector<int> branches;
    for (int start : adj[static_cast<std::size_t>(fork)]) {
      int prev = fork, cur = start, len = 1;
      while (adj[static_cast<std::size_t>(cur)].size() == 2) {
        const auto& nbrs = adj[static_cast<std::size_t>(cur)];
        const int next = (nbrs[0] == prev) ? nbrs[1] : nbrs[0];
        prev = cur;
        cur = next;
        ++len;
      }
      branches.push_back(len);
    }
    std::sort(branches.rbegin(), branches.rend());
    if (branches[2] != 1) return std::nullopt;
    if (branches[1] == 1) return TypeLabel{TypeFamily::D, branches[0] + 3};
    if (branches[1] == 2) {
      if (branches[0] == 2) return TypeLabel{TypeFamily::E6, 6};
      if (branches[0] == 3) return TypeLabel{TypeFamily::E7, 7};
      if (branches[0] == 4) return TypeLabel{TypeFamily::E8, 8};
    }
    return std::nullopt;
  }

  // Path shapes. Walk from one end and collect the label sequence.
  if (n == 2) {
    const Label m = d.label(c[0], c[1]);
    if (m == 3) return TypeLabel{TypeFamily::A, 2};
    if (m == 4) return TypeLabel{TypeFamily::B, 2};
    return TypeLabel{TypeFamily::I2, 2, m};
  }
  int end = -1;
  for (int i = 0; i < n && end < 0; ++i)
    if (adj[static_cast<std::size_t>(i)].size() == 1) end = i;
  std::vector<Label> seq;
  int prev = -1, cur = end;
  while (static_cast<int>(seq.size()) < n - 1) {
    const auto& nbrs = adj[static_cast<std::size_t>(cur)];
    const int next = (nbrs.size() == 1 || nbrs[0] != prev) ? nbrs[0] : nbrs[1];
    seq.push_back(d.label(c[cur], c[next]));
    prev = cur;
    cur = next;
  }

  const auto count_of = [&](Label m) {
    return std::count(seq.begin(), seq.end(), m);
  };
  const auto threes = count_of(3);
  const auto fours = count_of(4);
  const auto fives = count_of(5);
  if (threes + fours + fives != n - 1) return std::nullopt;  // label >= 6
  if (fours == 0 && fives == 0) return TypeLabel{TypeFamily::A, n};
  if (fours == 1 && fives == 0) {
    if (seq.front() == 4 || seq.back() == 4) return TypeLabel{TypeFamily::B, n};
    if (n == 4 && seq[1] == 4) return TypeLabel{TypeFamily::F4, 4};
    return std::nullopt;
  }
  if (fives == 1 && fours == 0 && (seq.front() == 5 || seq.back() == 5)) {
    if (n == 3) return TypeLabel{TypeFamily::H3, 3};
    if (n == 4) return TypeLabel{TypeFamily::H4, 4};
  }
  return std::nullopt;
}

/// True iff every irreducible component of the subset is of finite type,
/// i.e. the parabolic subgroup on the subset is finite.
inline bool is_spherical(const Diagram& d, const std::vector<int>& subset) {
  for (const auto& component : irreducible_components(d, subset))
    if (!classify_component(d, component)) return false;
  return true;
}

/// Order of the parabolic subgroup on the subset: product of the component
/// orders, or nullopt when some component is of infinite type.
inline std::optional<std::uint64_t> parabolic_order(
    const Diagram& d, const std::vector<int>& subset) {
  std::uint64_t order = 1;
  for (const auto& component : irreducible_components(d, subset)) {
    const auto type = classify_component(d, component);
    if (!type) return std::nullopt;
    order = detail::checked_mul(order, type_order(*type));
  }
  return order;
}

/// A subset whose parabolic subgroup is finite, with its decomposition into
/// irreducible components and its order.
struct SphericalSubset {
  std::vector<int> vertices;  // sorted
  std::vector<std::pair<std::vector<int>, TypeLabel>> components;
  std::uint64_t order = 1;

  bool operator==(const SphericalSubset&) const = default;
};

namespace detail {

inline SphericalSubset make_spherical(const Diagram& d,
                                      std::vector<int> vertices) {
  SphericalSubset s;
  s.vertices = std::move(vertices);
  for (const auto& component : irreducible_components(d, s.vertices)) {
    const auto type = classify_component(d, component);
    if (!type) throw std::logic_error("make_spherical on non-spherical subset");
    s.order = checked_mul(s.order, type_order(*type));
    s.components.emplace_back(component, *type);
  }
  return s;
}

}  // namespace detail

/// All spherical subsets, by growing spherical sets one vertex at a time
/// (every subset of a spherical set is spherical, so nothing is missed).
/// Sorted by size, then lexicographically. Includes the empty set.
inline std::vector<SphericalSubset> spherical_subsets(const Diagram& d) {
  if (d.rank() > kMaxEnumerationRank)
    throw CapExceeded("subset enumeration is capped at rank " +
                      std::to_string(kMaxEnumerationRank) + " (diagram has " +
                      std::to_string(d.rank()) + " vertices)");
  std::vector<SphericalSubset> out;
  out.push_back(detail::make_spherical(d, {}));
  std::vector<int> current;
  auto grow = [&](auto&& self, int next) -> void {
    for (int v = next; v < d.rank(); ++v) {
      current.push_back(v);
      if (is_spherical(d, current)) {
        out.push_back(detail::make_spherical(d, current));
        self(self, v + 1);
      }
      current.pop_back();
    }
  };
  grow(grow, 0);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.vertices.size() != b.vertices.size()
               ? a.vertices.size() < b.vertices.size()
               : a.vertices < b.vertices;
  });
  return out;
}

/// The spherical subsets maximal under inclusion.
inline std::vector<SphericalSubset> maximal_spherical_subsets(
    const Diagram& d) {
  const auto all = spherical_subsets(d);
  std::vector<SphericalSubset> out;
  for (const auto& s : all) {
    bool maximal = true;
    for (const auto& bigger : all) {
      if (bigger.vertices.size() <= s.vertices.size()) continue;
      if (std::includes(bigger.vertices.begin(), bigger.vertices.end(),
                        s.vertices.begin(), s.vertices.end())) {
        maximal = false;
        break;
      }
    }
    if (maximal) out.push_back(s);
  }
  return out;
}

/// Convenience: the whole vertex set.
inline std::vector<int> all_vertices(const Diagram& d) {
  std::vector<int> out(static_cast<std::size_t>(d.rank()));
  for (int v = 0; v < d.rank(); ++v) out[static_cast<std::size_t>(v)] = v;
  return out;
}

}  // namespace coxeter
