#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ptx/corpus.hpp"

namespace ptx {

/// The out-of-alphabet null symbol marking an omitted character.
inline constexpr char kStar = '*';

/// Unit-cost Levenshtein distance. '*' is an ordinary symbol distinct from
/// every letter.
unsigned edit_distance(std::string_view a, std::string_view b);

/// A lowercase word in which some letters may be replaced by '*'.
class Pattern {
 public:
  /// Lowercases; throws std::invalid_argument on anything other than
  /// letters and '*'.
  explicit Pattern(std::string_view symbols);

  const std::string& symbols() const noexcept { return symbols_; }
  std::size_t star_count() const noexcept { return stars_; }
  std::size_t size() const noexcept { return symbols_.size(); }

  /// `word` with the characters at `positions` replaced by '*'.
  static Pattern with_stars(std::string_view word, std::initializer_list<std::size_t> positions);

 private:
  std::string symbols_;
  std::size_t stars_ = 0;
};

struct Candidate {
  std::string word;
  std::uint64_t frequency = 0;

  bool operator==(const Candidate&) const = default;
};

/// Dictionary words ordered by descending frequency, then lexicographically.
struct CandidateSet {
  std::vector<Candidate> words;

  std::size_t size() const noexcept { return words.size(); }
  bool empty() const noexcept { return words.empty(); }
  bool contains(std::string_view w) const;
};

/// A split of one pattern into two dictionary words around a '*' that hid a space.
struct SplitCandidate {
  std::string left;
  std::string right;

  bool operator==(const SplitCandidate&) const = default;
  auto operator<=>(const SplitCandidate&) const = default;
};

/// Trie over a dictionary, searched with a row-by-row Levenshtein table so
/// that whole subtrees are pruned once every cell exceeds the distance bound.
/// Immutable after construction; safe to query from several threads.
class SpellIndex {
 public:
  explicit SpellIndex(const Dictionary& dict);

  SpellIndex(const SpellIndex&) = delete;
  SpellIndex& operator=(const SpellIndex&) = delete;
  SpellIndex(SpellIndex&&) = default;

  const Dictionary& dictionary() const noexcept { return *dict_; }

  /// Every dictionary word within edit distance `d` of `pattern`.
  CandidateSet candidates(const Pattern& pattern, unsigned d) const;
  CandidateSet candidates(std::string_view pattern, unsigned d) const {
    return candidates(Pattern(pattern), d);
  }

  /// All (u, v) with u, v in the dictionary such that turning one '*' of
  /// `pattern` into a space, and every other '*' into exactly one letter,
  /// spells "u v". Sorted lexicographically.
  std::vector<SplitCandidate> split_candidates(const Pattern& pattern) const;

  /// Dictionary ids matching `pattern` where each '*' stands for exactly one letter.
  std::vector<std::size_t> wildcard_matches(std::string_view pattern) const;

  std::size_t node_count() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    std::uint32_t first_edge = 0;
    std::uint32_t edge_count = 0;
    std::int32_t word = -1;
  };

  std::uint32_t build(std::size_t lo, std::size_t hi, std::size_t depth);
  void search(std::uint32_t node, std::string_view pattern, unsigned d, std::size_t depth,
              std::vector<std::vector<unsigned>>& rows, std::vector<std::size_t>& out) const;
  void wildcard(std::uint32_t node, std::string_view pattern, std::size_t depth,
                std::vector<std::size_t>& out) const;

  const Dictionary* dict_;
  std::size_t max_len_ = 0;
  std::vector<Node> nodes_;
  std::vector<char> edge_label_;
  std::vector<std::uint32_t> edge_child_;
};

/// Convenience wrappers mirroring the free-function vocabulary S(p, d).
inline CandidateSet candidates(const Pattern& p, unsigned d, const SpellIndex& index) {
  return index.candidates(p, d);
}

inline std::vector<SplitCandidate> split_candidates(const Pattern& p, const SpellIndex& index) {
  return index.split_candidates(p);
}

}  // namespace ptx
