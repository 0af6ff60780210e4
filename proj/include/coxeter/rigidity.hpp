#pragma once

#include <array>
#include <set>
#include <utility>
#include <vector>

#include "coxeter/classify.hpp"
#include "coxeter/diagram.hpp"

namespace coxeter {

/// Three sufficient criteria for reflection rigidity, checked on the diagram:
///
///   (1) every pair with odd finite label is a maximal spherical subset;
///   (2) no generator lies on two odd bonds (the odd graph is a matching);
///   (3) every odd bond meets at most two maximal spherical subsets,
///       counting the bond itself when it is maximal.
///
/// Verdicts carry witnesses so a failure can be re-checked directly.

struct Condition1 {
  bool holds = true;
  std::vector<std::pair<int, int>> violations;  // odd pairs inside a larger spherical set
};

struct Condition2 {
  bool holds = true;
  std::vector<std::array<int, 3>> violations;  // (s, t, u) with m(s,t), m(t,u) odd
};

struct Condition3 {
  bool holds = true;
  // per odd pair: how many maximal spherical subsets meet it
  std::vector<std::pair<std::pair<int, int>, int>> counts;
  std::vector<std::pair<int, int>> violations;  // pairs with count > 2
};

enum class Theorem { kEvenSystem, kFiniteSystem, kIsolatedOddBonds };

inline std::string to_string(Theorem t) {
  switch (t) {
    case Theorem::kEvenSystem: return "even-system";
    case Theorem::kFiniteSystem: return "finite-system";
    case Theorem::kIsolatedOddBonds: return "isolated-odd-bonds";
  }
  return "?";
}

struct RigidityReport {
  Condition1 condition1;
  Condition2 condition2;
  Condition3 condition3;
  bool is_even = false;    // every finite label is even
  bool is_finite = false;  // the whole group is finite
  std::vector<Theorem> applicable;

  bool certified_rigid() const { return !applicable.empty(); }
};

inline Condition1 check_condition_1(const Diagram& d) {
  Condition1 result;
  std::set<std::vector<int>> maximal;
  for (const auto& s : maximal_spherical_subsets(d)) maximal.insert(s.vertices);
  for (const auto& [s, t] : odd_graph(d).edges)
    if (!maximal.contains(std::vector<int>{s, t}))
      result.violations.emplace_back(s, t);
  result.holds = result.violations.empty();
  return result;
}

inline Condition2 check_condition_2(const Diagram& d) {
  Condition2 result;
  std::vector<std::vector<int>> odd_neighbors(
      static_cast<std::size_t>(d.rank()));
  for (const auto& [s, t] : odd_graph(d).edges) {
    odd_neighbors[static_cast<std::size_t>(s)].push_back(t);
    odd_neighbors[static_cast<std::size_t>(t)].push_back(s);
  }
  for (int t = 0; t < d.rank(); ++t) {
    auto& nbrs = odd_neighbors[static_cast<std::size_t>(t)];
    std::sort(nbrs.begin(), nbrs.end());
    for (std::size_t i = 0; i < nbrs.size(); ++i)
      for (std::size_t j = i + 1; j < nbrs.size(); ++j)
        result.violations.push_back({nbrs[i], t, nbrs[j]});
  }
  result.holds = result.violations.empty();
  return result;
}

inline Condition3 check_condition_3(const Diagram& d) {
  Condition3 result;
  const auto maximal = maximal_spherical_subsets(d);
  for (const auto& [s, t] : odd_graph(d).edges) {
    int count = 0;
    for (const auto& m : maximal)
      if (std::binary_search(m.vertices.begin(), m.vertices.end(), s) ||
          std::binary_search(m.vertices.begin(), m.vertices.end(), t))
        ++count;
    result.counts.push_back({{s, t}, count});
    if (count > 2) result.violations.emplace_back(s, t);
  }
  result.holds = result.violations.empty();
  return result;
}

inline RigidityReport rigidity_report(const Diagram& d) {
  RigidityReport report;
  report.condition1 = check_condition_1(d);
  report.condition2 = check_condition_2(d);
  report.condition3 = check_condition_3(d);
  report.is_even = odd_graph(d).edges.empty();
  report.is_finite = is_spherical(d, all_vertices(d));
  if (report.is_even) report.applicable.push_back(Theorem::kEvenSystem);
  if (report.is_finite) report.applicable.push_back(Theorem::kFiniteSystem);
  if (report.condition1.holds && report.condition2.holds &&
      report.condition3.holds)
    report.applicable.push_back(Theorem::kIsolatedOddBonds);
  return report;
}

}  // namespace coxeter
