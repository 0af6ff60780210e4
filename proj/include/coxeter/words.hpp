#pragma once

#include <cassert>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "coxeter/diagram.hpp"

namespace coxeter {

/// A word over the generators of a fixed diagram, as vertex indices. Since
/// vertex names are kept sorted, lexicographic order on index sequences is
/// lexicographic order on name sequences.
using Word = std::vector<int>;

inline constexpr std::size_t kDefaultClosureBudget = 100000;
inline constexpr int kDefaultOrderCap = 64;

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int x : w) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

namespace detail {

inline bool has_adjacent_duplicate(const Word& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i] == w[i + 1]) return true;
  return false;
}

/// Cancels ss factors, cascading, in one pass.
inline void erase_adjacent_duplicates(Word& w) {
  std::size_t i = 0;
  while (i + 1 < w.size()) {
    if (w[i] == w[i + 1]) {
      w.erase(w.begin() + static_cast<std::ptrdiff_t>(i),
              w.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      if (i > 0) --i;
    } else {
      ++i;
    }
  }
}

inline bool is_palindrome(const Word& w) {
  for (std::size_t i = 0, j = w.size(); i + 1 < j; ++i, --j)
    if (w[i] != w[j - 1]) return false;
  return true;
}

}  // namespace detail

/// Exact word-problem engine for one diagram, via Tits' procedure: braid
/// moves (replace an alternating factor stst... of length m(s,t) by tsts...)
/// plus cancellation of ss factors. A word is reduced iff no sequence of
/// braid moves exposes a cancellation; all reduced words of an element form
/// a single braid class, so the lexicographically least one is a canonical
/// form and two words are equal in the group iff their canonical forms agree.
///
/// Every search is bounded by a word budget; exhausting it raises
/// BudgetExceeded rather than returning anything wrong.
///
/// Braid classes of reduced words are memoized. The cache makes an engine a
/// single-context object: share one engine across threads only behind a lock,
/// or give each context its own. Results never depend on call order.
class WordEngine {
 public:
  explicit WordEngine(Diagram d,
                      std::size_t closure_budget = kDefaultClosureBudget)
      : d_(std::move(d)), budget_(closure_budget) {}

  const Diagram& diagram() const { return d_; }
  std::size_t closure_budget() const { return budget_; }

  /// Whitespace-separated vertex names -> word. Throws on unknown vertices.
  Word parse_word(std::string_view text) const {
    Word w;
    for (const std::string& token : detail::tokenize(text))
      w.push_back(d_.index_of(token));
    return w;
  }

  std::string format_word(const Word& w) const {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i > 0) out += ' ';
      out += d_.name(w[i]);
    }
    return out;
  }

  /// All words reachable from w by braid moves, sorted. Every member has the
  /// same length as w.
  std::vector<Word> braid_closure(const Word& w) const {
    check_word(w);
    if (auto it = cache_.find(w); it != cache_.end()) return *it->second;
    std::unordered_set<Word, WordHash> seen{w};
    std::deque<Word> queue{w};
    std::vector<Word> neighbors;
    while (!queue.empty()) {
      const Word u = std::move(queue.front());
      queue.pop_front();
      braid_neighbors(u, neighbors);
      for (Word& v : neighbors) {
        if (seen.contains(v)) continue;
        if (seen.size() >= budget_) throw_budget(w);
        queue.push_back(v);
        seen.insert(std::move(v));
      }
    }
    std::vector<Word> members(seen.begin(), seen.end());
    std::sort(members.begin(), members.end());
    bool reduced = true;
    for (const Word& m : members)
      if (detail::has_adjacent_duplicate(m)) {
        reduced = false;
        break;
      }
    if (reduced) return *store_class(std::move(members));
    return members;
  }

  /// A reduced word for the same element: cancel where possible, otherwise
  /// braid-search for a member of the class that exposes a cancellation.
  Word reduce(Word w) const {
    check_word(w);
    for (;;) {
      detail::erase_adjacent_duplicates(w);
      if (w.size() <= 1) return w;
      if (cache_.contains(w)) return w;  // known reduced

      std::unordered_set<Word, WordHash> seen{w};
      std::deque<Word> queue{w};
      std::vector<Word> neighbors;
      std::optional<Word> cancellable;
      while (!queue.empty() && !cancellable) {
        const Word u = std::move(queue.front());
        queue.pop_front();
        braid_neighbors(u, neighbors);
        for (Word& v : neighbors) {
          if (seen.contains(v)) continue;
          if (detail::has_adjacent_duplicate(v)) {
            cancellable = std::move(v);
            break;
          }
          if (seen.size() >= budget_) throw_budget(w);
          queue.push_back(v);
          seen.insert(std::move(v));
        }
      }
      if (cancellable) {
        w = std::move(*cancellable);
        continue;
      }
      // Exhausted the braid class without a cancellation: w is reduced and
      // seen is its complete class.
      std::vector<Word> members(seen.begin(), seen.end());
      std::sort(members.begin(), members.end());
      store_class(std::move(members));
      return w;
    }
  }

  /// The canonical form: lexicographically least reduced word of the element.
  Word canonical(Word w) const {
    const Word r = reduce(std::move(w));
    return reduced_class(r)->front();
  }

  Word multiply(const Word& u, const Word& v) const {
    Word w = u;
    w.insert(w.end(), v.begin(), v.end());
    return canonical(std::move(w));
  }

  /// Least n >= 1 with w^n = 1, by iterated multiplication; nullopt when the
  /// order exceeds the cap (not certified finite).
  std::optional<int> element_order(const Word& w,
                                   int cap = kDefaultOrderCap) const {
    const Word r = canonical(w);
    Word power = r;
    for (int n = 1; n <= cap; ++n) {
      if (power.empty()) return n;
      power = multiply(power, r);
    }
    return std::nullopt;
  }

  /// True iff w is conjugate to a generator. Criterion: reflections are
  /// exactly the elements with an odd palindromic reduced word (an odd
  /// palindrome u s rev(u) is visibly a conjugate of s, and every reflection
  /// admits such an expression), so scan the braid class of reduce(w).
  bool is_reflection(const Word& w) const {
    const Word r = reduce(w);
    if (r.size() % 2 == 0) return false;
    for (const Word& m : *reduced_class(r))
      if (detail::is_palindrome(m)) return true;
    return false;
  }

 private:
  using ClassPtr = std::shared_ptr<const std::vector<Word>>;

  void check_word(const Word& w) const {
    for (int letter : w)
      if (letter < 0 || letter >= d_.rank())
        throw std::invalid_argument("word letter out of range: " +
                                    std::to_string(letter));
  }

  [[noreturn]] void throw_budget(const Word& w) const {
    throw BudgetExceeded("braid closure budget of " + std::to_string(budget_) +
                         " words exceeded on a word of length " +
                         std::to_string(w.size()));
  }

  void braid_neighbors(const Word& w, std::vector<Word>& out) const {
    out.clear();
    const int len = static_cast<int>(w.size());
    for (int i = 0; i + 1 < len; ++i) {
      const int s = w[static_cast<std::size_t>(i)];
      const int t = w[static_cast<std::size_t>(i) + 1];
      if (s == t) continue;
      const Label m = d_.label(s, t);
      if (!label_is_finite(m) || i + m > len) continue;
      bool alternating = true;
      for (int k = 2; k < m && alternating; ++k)
        alternating = (w[static_cast<std::size_t>(i + k)] == (k % 2 == 0 ? s : t));
      if (!alternating) continue;
      Word v = w;
      for (int k = 0; k < m; ++k)
        v[static_cast<std::size_t>(i + k)] = (k % 2 == 0 ? t : s);
      out.push_back(std::move(v));
    }
  }

  /// Caches a complete braid class of reduced words under each member.
  const ClassPtr& store_class(std::vector<Word> members) const {
    auto shared = std::make_shared<const std::vector<Word>>(std::move(members));
    const ClassPtr* kept = nullptr;
    for (const Word& m : *shared) kept = &cache_.emplace(m, shared).first->second;
    assert(kept != nullptr);
    return *kept;
  }

  /// Class of a word already known to be reduced.
  ClassPtr reduced_class(const Word& r) const {
    if (auto it = cache_.find(r); it != cache_.end()) return it->second;
    if (r.size() <= 1) return store_class({r});
    std::unordered_set<Word, WordHash> seen{r};
    std::deque<Word> queue{r};
    std::vector<Word> neighbors;
    while (!queue.empty()) {
      const Word u = std::move(queue.front());
      queue.pop_front();
      braid_neighbors(u, neighbors);
      for (Word& v : neighbors) {
        if (seen.contains(v)) continue;
        if (detail::has_adjacent_duplicate(v))
          throw std::logic_error("reduced_class called on a non-reduced word");
        if (seen.size() >= budget_) throw_budget(r);
        queue.push_back(v);
        seen.insert(std::move(v));
      }
    }
    std::vector<Word> members(seen.begin(), seen.end());
    std::sort(members.begin(), members.end());
    return store_class(std::move(members));
  }

  Diagram d_;
  std::size_t budget_;
  mutable std::unordered_map<Word, ClassPtr, WordHash> cache_;
};

// One-shot conveniences. For repeated work on one diagram, keep a WordEngine
// so braid classes are computed once.

inline std::vector<Word> braid_closure(const Diagram& d, const Word& w,
                                       std::size_t budget = kDefaultClosureBudget) {
  return WordEngine(d, budget).braid_closure(w);
}

inline Word reduce(const Diagram& d, Word w,
                   std::size_t budget = kDefaultClosureBudget) {
  return WordEngine(d, budget).reduce(std::move(w));
}

inline Word canonical(const Diagram& d, Word w,
                      std::size_t budget = kDefaultClosureBudget) {
  return WordEngine(d, budget).canonical(std::move(w));
}

/// A map from the generators of one diagram to words over another: the
/// carrier of homomorphisms, generator bijections, and twist substitutions.
struct GeneratorMap {
  Diagram source;
  Diagram target;
  std::vector<Word> images;  // by source vertex index, words over target
};

inline GeneratorMap identity_map(const Diagram& d) {
  GeneratorMap map{d, d, {}};
  for (int v = 0; v < d.rank(); ++v) map.images.push_back(Word{v});
  return map;
}

/// Letterwise substitution of a word over the source diagram.
inline Word apply_map(const GeneratorMap& map, const Word& w) {
  Word out;
  for (int letter : w) {
    const Word& image = map.images.at(static_cast<std::size_t>(letter));
    out.insert(out.end(), image.begin(), image.end());
  }
  return out;
}

/// Parses lines of the form `s = t1 t2 t3` (one per source generator,
/// comments with '#') into a GeneratorMap.
inline GeneratorMap parse_generator_map(const Diagram& source,
                                        const Diagram& target,
                                        std::string_view text) {
  GeneratorMap map{source, target, {}};
  map.images.assign(static_cast<std::size_t>(source.rank()), Word{});
  std::vector<bool> defined(static_cast<std::size_t>(source.rank()), false);
  WordEngine parser(target);  // only for parse_word

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
    const auto tokens = detail::tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() < 2 || tokens[1] != "=")
      throw ParseError("line " + std::to_string(lineno) +
                       ": expected '<generator> = <word...>'");
    const int s = source.find(tokens[0])
                      ? *source.find(tokens[0])
                      : throw ParseError("line " + std::to_string(lineno) +
                                         ": unknown source generator: " +
                                         tokens[0]);
    if (defined[static_cast<std::size_t>(s)])
      throw ParseError("line " + std::to_string(lineno) +
                       ": generator defined twice: " + tokens[0]);
    Word image;
    for (std::size_t i = 2; i < tokens.size(); ++i) {
      if (auto t = target.find(tokens[i]))
        image.push_back(*t);
      else
        throw ParseError("line " + std::to_string(lineno) +
                         ": unknown target generator: " + tokens[i]);
    }
    map.images[static_cast<std::size_t>(s)] = std::move(image);
    defined[static_cast<std::size_t>(s)] = true;
  }
  for (int v = 0; v < source.rank(); ++v)
    if (!defined[static_cast<std::size_t>(v)])
      throw ParseError("no image given for generator: " + source.name(v));
  return map;
}

/// True iff every defining relation of the source maps to the identity of
/// the target: image(s)^2 = 1 for each generator, and
/// (image(s) image(t))^m = 1 for each pair with finite label m.
inline bool check_homomorphism(const GeneratorMap& map,
                               WordEngine& target_engine) {
  const Diagram& src = map.source;
  if (static_cast<int>(map.images.size()) != src.rank())
    throw std::invalid_argument("generator map has wrong image count");
  for (int s = 0; s < src.rank(); ++s) {
    const Word& im = map.images[static_cast<std::size_t>(s)];
    if (!target_engine.multiply(im, im).empty()) return false;
  }
  for (const auto& [s, t, m] : src.edges()) {
    Word pair = map.images[static_cast<std::size_t>(s)];
    const Word& im_t = map.images[static_cast<std::size_t>(t)];
    pair.insert(pair.end(), im_t.begin(), im_t.end());
    Word power;
    for (Label k = 0; k < m; ++k) power.insert(power.end(), pair.begin(), pair.end());
    if (!target_engine.canonical(std::move(power)).empty()) return false;
  }
  return true;
}

inline bool check_homomorphism(const GeneratorMap& map,
                               std::size_t budget = kDefaultClosureBudget) {
  WordEngine engine(map.target, budget);
  return check_homomorphism(map, engine);
}

/// Certifies a group isomorphism with no finiteness assumption: both maps are
/// homomorphisms and both composites fix every generator.
inline bool verify_isomorphism(const GeneratorMap& fwd, const GeneratorMap& back,
                               WordEngine& source_engine,
                               WordEngine& target_engine) {
  if (!(fwd.source == back.target) || !(fwd.target == back.source))
    throw std::invalid_argument("generator maps do not pair up");
  if (!check_homomorphism(fwd, target_engine)) return false;
  if (!check_homomorphism(back, source_engine)) return false;
  for (int s = 0; s < fwd.source.rank(); ++s) {
    const Word round =
        apply_map(back, fwd.images[static_cast<std::size_t>(s)]);
    if (source_engine.canonical(round) != Word{s}) return false;
  }
  for (int t = 0; t < back.source.rank(); ++t) {
    const Word round =
        apply_map(fwd, back.images[static_cast<std::size_t>(t)]);
    if (target_engine.canonical(round) != Word{t}) return false;
  }
  return true;
}

inline bool verify_isomorphism(const GeneratorMap& fwd, const GeneratorMap& back,
                               std::size_t budget = kDefaultClosureBudget) {
  WordEngine source_engine(fwd.source, budget);
  WordEngine target_engine(fwd.target, budget);
  return verify_isomorphism(fwd, back, source_engine, target_engine);
}

}  // namespace coxeter
