#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "coxeter/classify.hpp"
#include "coxeter/diagram.hpp"
#include "coxeter/words.hpp"

namespace coxeter {

/// An elementary diagram twist: the vertex set splits as A ∪ J ∪ B with J
/// spherical and every A-B label infinite; the generators in B are replaced
/// by their conjugates under the longest element of J.
struct TwistSpec {
  std::vector<int> separator;     // J, sorted
  std::vector<int> fixed_side;    // A, sorted (may be empty)
  std::vector<int> twisted_side;  // B, sorted (may be empty)
};

struct TwistResult {
  Diagram twisted;
  /// original generators -> words over the twisted diagram; fixes A ∪ J
  /// letterwise, sends b to w0 b' w0.
  GeneratorMap substitution;
  /// twisted generators -> words over the original; the same conjugation,
  /// since w0 (w0 b w0) w0 = b.
  GeneratorMap inverse;
  Word longest;  // w0 of the separator, over the original diagram
};

/// The unique maximum-length element of the finite parabolic on J, found by
/// greedy ascent: right-multiply by any generator of J that increases the
/// canonical length until none does.
inline Word longest_element(WordEngine& engine, const std::vector<int>& j) {
  const Diagram& d = engine.diagram();
  detail::check_subset(d, j);
  if (!is_spherical(d, j))
    throw std::invalid_argument("longest element asked for a non-spherical subset");
  Word w0;
  for (;;) {
    bool grew = false;
    for (int v : j) {
      Word next = w0;
      next.push_back(v);
      next = engine.canonical(std::move(next));
      if (next.size() > w0.size()) {
        w0 = std::move(next);
        grew = true;
        break;
      }
    }
    if (!grew) return w0;
  }
}

/// The permutation of J induced by conjugation with its longest element:
/// sigma(v) is the single generator equal to w0 v w0.
inline std::map<int, int> w0_automorphism(WordEngine& engine,
                                          const std::vector<int>& j) {
  const Word w0 = longest_element(engine, j);
  std::map<int, int> sigma;
  for (int v : j) {
    Word conj = w0;
    conj.push_back(v);
    conj.insert(conj.end(), w0.begin(), w0.end());
    const Word image = engine.canonical(std::move(conj));
    if (image.size() != 1)
      throw Falsified("conjugation by the longest element did not send generator " +
                      engine.diagram().name(v) + " to a generator");
    sigma[v] = image.front();
  }
  return sigma;
}

namespace detail {

inline void check_twist_spec(const Diagram& d, const TwistSpec& spec) {
  std::vector<int> all;
  all.insert(all.end(), spec.separator.begin(), spec.separator.end());
  all.insert(all.end(), spec.fixed_side.begin(), spec.fixed_side.end());
  all.insert(all.end(), spec.twisted_side.begin(), spec.twisted_side.end());
  std::sort(all.begin(), all.end());
  if (static_cast<int>(all.size()) != d.rank() ||
      std::adjacent_find(all.begin(), all.end()) != all.end() ||
      (!all.empty() && (all.front() != 0 || all.back() != d.rank() - 1)))
    throw std::invalid_argument(
        "twist not applicable: separator, fixed side and twisted side must "
        "partition the vertex set");
  if (!is_spherical(d, spec.separator))
    throw std::invalid_argument("twist not applicable: separator is not spherical");
  for (int a : spec.fixed_side)
    for (int b : spec.twisted_side)
      if (label_is_finite(d.label(a, b)))
        throw std::invalid_argument(
            "twist not applicable: finite label between the two sides: " +
            d.name(a) + " " + d.name(b));
}

inline std::string primed_name(const Diagram& d, int v) {
  std::string name = d.name(v) + "'";
  while (d.find(name)) name += "'";
  return name;
}

}  // namespace detail

/// Rewires the diagram through the twist: labels within A ∪ J and within B
/// are kept, B is renamed with a trailing tick, the bond between b' and
/// j ∈ J becomes the old label(b, sigma(j)), and A-B' pairs stay infinite.
/// The substitution maps witness that both diagrams present the same group.
inline TwistResult apply_twist(const Diagram& d, const TwistSpec& spec,
                               std::size_t budget = kDefaultClosureBudget) {
  detail::check_twist_spec(d, spec);
  WordEngine engine(d, budget);
  const Word w0 = longest_element(engine, spec.separator);
  const auto sigma = w0_automorphism(engine, spec.separator);

  std::map<int, std::string> new_name;
  for (int v : spec.separator) new_name[v] = d.name(v);
  for (int v : spec.fixed_side) new_name[v] = d.name(v);
  for (int v : spec.twisted_side) new_name[v] = detail::primed_name(d, v);

  std::vector<std::string> vertices;
  vertices.reserve(new_name.size());
  for (const auto& [v, name] : new_name) vertices.push_back(name);

  const auto in = [](const std::vector<int>& set, int v) {
    return std::binary_search(set.begin(), set.end(), v);
  };
  std::vector<std::tuple<std::string, std::string, Label>> edges;
  for (const auto& [s, t, m] : d.edges()) {
    const bool s_twisted = in(spec.twisted_side, s);
    const bool t_twisted = in(spec.twisted_side, t);
    if (s_twisted == t_twisted) {
      // within A ∪ J or within B: unchanged (A-B pairs are infinite and
      // cannot appear here)
      edges.emplace_back(new_name.at(s), new_name.at(t), m);
      continue;
    }
    const int b = s_twisted ? s : t;
    const int other = s_twisted ? t : s;
    if (!in(spec.separator, other))
      throw std::logic_error("finite label across the twist separation");
    // the bond b - sigma^{-1}(j) becomes b' - j; equivalently b' - j gets
    // label(b, sigma(j)) since sigma is an involution on J here
    edges.emplace_back(new_name.at(b), new_name.at(sigma.at(other)), m);
  }
  TwistResult result{Diagram(std::move(vertices), edges), {}, {}, w0};

  const Diagram& twisted = result.twisted;
  Word w0_twisted;
  for (int v : w0) w0_twisted.push_back(twisted.index_of(d.name(v)));

  result.substitution = GeneratorMap{d, twisted, {}};
  result.substitution.images.assign(static_cast<std::size_t>(d.rank()), {});
  result.inverse = GeneratorMap{twisted, d, {}};
  result.inverse.images.assign(static_cast<std::size_t>(d.rank()), {});
  for (int v = 0; v < d.rank(); ++v) {
    const int v_twisted = twisted.index_of(new_name.at(v));
    if (in(spec.twisted_side, v)) {
      Word sub = w0_twisted;
      sub.push_back(v_twisted);
      sub.insert(sub.end(), w0_twisted.begin(), w0_twisted.end());
      result.substitution.images[static_cast<std::size_t>(v)] = std::move(sub);
      Word inv = w0;
      inv.push_back(v);
      inv.insert(inv.end(), w0.begin(), w0.end());
      result.inverse.images[static_cast<std::size_t>(v_twisted)] = std::move(inv);
    } else {
      result.substitution.images[static_cast<std::size_t>(v)] = {v_twisted};
      result.inverse.images[static_cast<std::size_t>(v_twisted)] = {v};
    }
  }
  return result;
}

/// Builds the twist's substitution maps and certifies, by the word engine,
/// that they form a group isomorphism between the two presentations.
inline bool verify_twist(const Diagram& d, const TwistSpec& spec,
                         std::size_t budget = kDefaultClosureBudget) {
  const TwistResult result = apply_twist(d, spec, budget);
  return verify_isomorphism(result.substitution, result.inverse, budget);
}

}  // namespace coxeter
