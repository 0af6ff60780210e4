#pragma once

#include <algorithm>
#include <cassert>
#include <charconv>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "coxeter/errors.hpp"

namespace coxeter {

/// Bond label m(s,t): an integer >= 2, or kInfinity for an unbonded pair.
/// m(s,s) = 1 is implicit and never stored.
using Label = int;
inline constexpr Label kInfinity = std::numeric_limits<Label>::max();

inline constexpr bool label_is_finite(Label m) { return m != kInfinity; }
inline constexpr bool label_is_odd(Label m) {
  return label_is_finite(m) && m >= 3 && m % 2 == 1;
}

inline std::string label_to_string(Label m) {
  return label_is_finite(m) ? std::to_string(m) : std::string("inf");
}

/// A bijection between two vertex sets, stored as image[source index] =
/// target index.
using VertexBijection = std::vector<int>;

namespace detail {

template <typename Range>
std::string join(const Range& items, std::string_view sep) {
  std::string out;
  bool first = true;
  for (const auto& item : items) {
    if (!first) out += sep;
    out += item;
    first = false;
  }
  return out;
}

inline std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> tokens;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

}  // namespace detail

/// An edge-labeled graph on named generators: the data of a Coxeter system.
///
/// Vertices are kept sorted by name, so every derived order (serialization,
/// search, canonical words) is reproducible. Labels are symmetric and >= 2.
///
/// Convention: an absent pair means m = infinity. Drawn bonds carry their
/// label explicitly, including 2; an unbonded pair is an infinite-order
/// product, not a commuting one. (The opposite convention - absent means 2 -
/// is common elsewhere; files written for one convention are not valid under
/// the other.)
///
/// Immutable after construction; all operations on diagrams are pure.
class Diagram {
 public:
  Diagram() = default;

  /// Vertices may arrive in any order and are sorted. Throws
  /// std::invalid_argument on duplicate/empty/whitespace names, unknown edge
  /// endpoints, loops, labels < 2, or conflicting duplicate edges. Edges
  /// labeled kInfinity are accepted and dropped (same as omission).
  Diagram(std::vector<std::string> vertices,
          const std::vector<std::tuple<std::string, std::string, Label>>&
              edges = {}) {
    names_ = std::move(vertices);
    std::sort(names_.begin(), names_.end());
    for (std::size_t i = 0; i < names_.size(); ++i) {
      const std::string& name = names_[i];
      if (name.empty()) throw std::invalid_argument("empty vertex name");
      if (name.find_first_of(" \t\r\n#") != std::string::npos)
        throw std::invalid_argument("vertex name contains whitespace or '#': " +
                                    name);
      if (i > 0 && names_[i - 1] == name)
        throw std::invalid_argument("duplicate vertex: " + name);
    }
    const int n = rank();
    matrix_.assign(static_cast<std::size_t>(n) * n, kInfinity);
    for (int v = 0; v < n; ++v) at(v, v) = 1;
    for (const auto& [a, b, m] : edges) {
      const int s = index_of(a);
      const int t = index_of(b);
      if (s == t) throw std::invalid_argument("loop edge at vertex: " + a);
      if (m != kInfinity && m < 2)
        throw std::invalid_argument("edge label must be >= 2: " + a + " " + b);
      Label& slot = at(s, t);
      if (slot != kInfinity && slot != m)
        throw std::invalid_argument("conflicting labels for edge: " + a + " " +
                                    b);
      slot = m;
      at(t, s) = m;
    }
  }

  /// Parses the line-oriented text format:
  ///
  ///   # comment
  ///   vertices: a b c
  ///   edge a b 3
  ///   edge a c inf      # accepted, same as omitting the line
  ///
  /// The first nonempty line must be the vertices line; every edge line names
  /// two declared vertices and an integer label >= 2 or the token "inf".
  static Diagram parse(std::string_view text) {
    std::vector<std::string> vertices;
    std::map<std::pair<std::string, std::string>, Label> labels;
    bool have_vertices = false;

    std::size_t pos = 0;
    int lineno = 0;
    while (pos <= text.size()) {
      std::size_t eol = text.find('\n', pos);
      if (eol == std::string_view::npos) eol = text.size();
      std::string_view line = text.substr(pos, eol - pos);
      pos = eol + 1;
      ++lineno;
      if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
        line = line.substr(0, hash);
      std::vector<std::string> tokens = detail::tokenize(line);
      if (tokens.empty()) continue;

      if (!have_vertices) {
        if (tokens[0] != "vertices:")
          throw ParseError("line " + std::to_string(lineno) +
                           ": expected a 'vertices:' line first");
        vertices.assign(tokens.begin() + 1, tokens.end());
        std::set<std::string> seen;
        for (const std::string& v : vertices)
          if (!seen.insert(v).second)
            throw ParseError("line " + std::to_string(lineno) +
                             ": duplicate vertex: " + v);
        have_vertices = true;
        continue;
      }

      if (tokens[0] == "vertices:")
        throw ParseError("line " + std::to_string(lineno) +
                         ": second 'vertices:' line");
      if (tokens[0] != "edge")
        throw ParseError("line " + std::to_string(lineno) +
                         ": unknown directive: " + tokens[0]);
      if (tokens.size() != 4)
        throw ParseError("line " + std::to_string(lineno) +
                         ": expected 'edge <a> <b> <label>'");
      const std::string& a = tokens[1];
      const std::string& b = tokens[2];
      for (const std::string& endpoint : {a, b})
        if (std::find(vertices.begin(), vertices.end(), endpoint) ==
            vertices.end())
          throw ParseError("line " + std::to_string(lineno) +
                           ": undeclared edge endpoint: " + endpoint);
      if (a == b)
        throw ParseError("line " + std::to_string(lineno) +
                         ": loop edge at vertex: " + a);
      Label m = kInfinity;
      if (tokens[3] != "inf") {
        const char* first = tokens[3].data();
        const char* last = first + tokens[3].size();
        auto [ptr, ec] = std::from_chars(first, last, m);
        if (ec != std::errc{} || ptr != last)
          throw ParseError("line " + std::to_string(lineno) +
                           ": label must be an integer >= 2 or 'inf': " +
                           tokens[3]);
        if (m < 2)
          throw ParseError("line " + std::to_string(lineno) +
                           ": label must be >= 2: " + tokens[3]);
        if (m == kInfinity)
          throw ParseError("line " + std::to_string(lineno) +
                           ": label too large: " + tokens[3]);
      }
      auto key = std::minmax(a, b);
      auto [it, inserted] = labels.try_emplace(key, m);
      if (!inserted && it->second != m)
        throw ParseError("line " + std::to_string(lineno) +
                         ": conflicting labels for edge: " + a + " " + b);
    }
    if (!have_vertices) throw ParseError("missing 'vertices:' line");

    std::vector<std::tuple<std::string, std::string, Label>> edges;
    edges.reserve(labels.size());
    for (const auto& [key, m] : labels) edges.emplace_back(key.first, key.second, m);
    try {
      return Diagram(std::move(vertices), edges);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  }

  /// Canonical text: vertices sorted, edges sorted by endpoint pair, infinite
  /// bonds never emitted. parse(serialize(d)) == d.
  std::string serialize() const {
    std::string out = "vertices:";
    for (const std::string& v : names_) {
      out += ' ';
      out += v;
    }
    out += '\n';
    for (const auto& [s, t, m] : edges())
      out += "edge " + names_[s] + " " + names_[t] + " " + std::to_string(m) +
             "\n";
    return out;
  }

  int rank() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& vertex_names() const { return names_; }
  const std::string& name(int v) const { return names_[static_cast<std::size_t>(v)]; }

  std::optional<int> find(std::string_view vertex) const {
    auto it = std::lower_bound(names_.begin(), names_.end(), vertex);
    if (it == names_.end() || *it != vertex) return std::nullopt;
    return static_cast<int>(it - names_.begin());
  }

  int index_of(std::string_view vertex) const {
    if (auto v = find(vertex)) return *v;
    throw std::invalid_argument("unknown vertex: " + std::string(vertex));
  }

  /// m(s,t) by index; 1 on the diagonal.
  Label label(int s, int t) const {
    assert(s >= 0 && s < rank() && t >= 0 && t < rank());
    return matrix_[static_cast<std::size_t>(s) * rank() + t];
  }

  /// m(s,t) by name; throws on an unknown vertex.
  Label label(std::string_view s, std::string_view t) const {
    return label(index_of(s), index_of(t));
  }

  /// Finite bonds (s, t, m) with s < t, sorted by endpoint pair.
  std::vector<std::tuple<int, int, Label>> edges() const {
    std::vector<std::tuple<int, int, Label>> out;
    for (int s = 0; s < rank(); ++s)
      for (int t = s + 1; t < rank(); ++t)
        if (label_is_finite(label(s, t))) out.emplace_back(s, t, label(s, t));
    return out;
  }

  /// The diagram of the parabolic subgroup on the given vertex subset.
  Diagram induced(const std::vector<int>& subset) const {
    std::vector<std::string> vertices;
    vertices.reserve(subset.size());
    for (int v : subset) {
      if (v < 0 || v >= rank())
        throw std::invalid_argument("vertex index out of range: " +
                                    std::to_string(v));
      vertices.push_back(names_[static_cast<std::size_t>(v)]);
    }
    std::vector<std::tuple<std::string, std::string, Label>> kept;
    for (std::size_t i = 0; i < subset.size(); ++i)
      for (std::size_t j = i + 1; j < subset.size(); ++j) {
        const Label m = label(subset[i], subset[j]);
        if (label_is_finite(m))
          kept.emplace_back(name(subset[i]), name(subset[j]), m);
      }
    return Diagram(std::move(vertices), kept);
  }

  Diagram induced_by_names(const std::vector<std::string>& subset) const {
    std::vector<int> indices;
    indices.reserve(subset.size());
    for (const std::string& v : subset) indices.push_back(index_of(v));
    return induced(indices);
  }

  bool operator==(const Diagram&) const = default;

 private:
  Label& at(int s, int t) {
    return matrix_[static_cast<std::size_t>(s) * rank() + t];
  }

  std::vector<std::string> names_;  // sorted, unique
  std::vector<Label> matrix_;       // rank x rank, row-major, diagonal 1
};

/// The graph on the generators whose edges are the pairs with odd finite
/// label. Its connected components are exactly the conjugacy classes of
/// generators.
struct OddGraph {
  std::vector<std::pair<int, int>> edges;  // s < t, sorted
};

inline OddGraph odd_graph(const Diagram& d) {
  OddGraph g;
  for (const auto& [s, t, m] : d.edges())
    if (label_is_odd(m)) g.edges.emplace_back(s, t);
  return g;
}

/// Connected components of the odd graph, each sorted, ordered by least
/// member. Blocks are disjoint and cover all vertices.
inline std::vector<std::vector<int>> odd_components(const Diagram& d) {
  const int n = d.rank();
  std::vector<int> parent(n);
  for (int v = 0; v < n; ++v) parent[v] = v;
  auto root = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& [s, t] : odd_graph(d).edges) parent[root(s)] = root(t);

  std::map<int, std::vector<int>> blocks;
  for (int v = 0; v < n; ++v) blocks[root(v)].push_back(v);
  std::vector<std::vector<int>> out;
  out.reserve(blocks.size());
  for (auto& [_, block] : blocks) out.push_back(std::move(block));
  std::sort(out.begin(), out.end());
  return out;
}

/// Searches for a label-preserving vertex bijection from a to b, i.e. a
/// witness that the two diagrams define isomorphic Coxeter systems.
///
/// Plain backtracking over vertices in sorted order, pruned by per-vertex
/// label multisets; the returned witness is the lexicographically first one
/// in that search order. Returns nullopt when no bijection exists.
inline std::optional<VertexBijection> find_isomorphism(const Diagram& a,
                                                       const Diagram& b) {
  const int n = a.rank();
  if (n != b.rank()) return std::nullopt;
  if (n == 0) return VertexBijection{};

  auto profiles = [](const Diagram& d) {
    std::vector<std::vector<Label>> out(static_cast<std::size_t>(d.rank()));
    for (int v = 0; v < d.rank(); ++v) {
      for (int u = 0; u < d.rank(); ++u)
        if (u != v) out[v].push_back(d.label(v, u));
      std::sort(out[v].begin(), out[v].end());
    }
    return out;
  };
  const auto pa = profiles(a);
  const auto pb = profiles(b);
  {
    auto sa = pa;
    auto sb = pb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }

  VertexBijection image(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  auto extend = [&](auto&& self, int v) -> bool {
    if (v == n) return true;
    for (int u = 0; u < n; ++u) {
      if (used[u] || pa[v] != pb[u]) continue;
      bool consistent = true;
      for (int w = 0; w < v && consistent; ++w)
        consistent = (a.label(w, v) == b.label(image[w], u));
      if (!consistent) continue;
      image[v] = u;
      used[u] = true;
      if (self(self, v + 1)) return true;
      used[u] = false;
      image[v] = -1;
    }
    return false;
  };
  if (!extend(extend, 0)) return std::nullopt;
  return image;
}

/// Direct check that a bijection preserves all labels (including infinite
/// ones). Used to validate witnesses independently of the search.
inline bool is_label_preserving(const Diagram& a, const Diagram& b,
                                const VertexBijection& image) {
  if (static_cast<int>(image.size()) != a.rank() || a.rank() != b.rank())
    return false;
  std::vector<bool> hit(image.size(), false);
  for (int u : image) {
    if (u < 0 || u >= b.rank() || hit[static_cast<std::size_t>(u)]) return false;
    hit[static_cast<std::size_t>(u)] = true;
  }
  for (int s = 0; s < a.rank(); ++s)
    for (int t = 0; t < a.rank(); ++t)
      if (a.label(s, t) != b.label(image[s], image[t])) return false;
  return true;
}

}  // namespace coxeter
