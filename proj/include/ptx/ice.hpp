#pragma once

#include <cstddef>
#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ptx/corpus.hpp"
#include "ptx/spellkit.hpp"

namespace ptx {

/// Importance-score weights. Requires alpha > beta > gamma > 0 and delta > 0.
struct ScoreParams {
  double alpha = 3.0;
  double beta = 2.0;
  double gamma = 1.0;
  double delta = 2.0;

  void validate() const;
};

/// Words longer than this are scored as out-of-vocabulary without querying S.
inline constexpr std::size_t kMaxScoredWordLength = 24;

/// Per-character importance scores over a window; every entry is <= 0 and
/// 0 marks a must-keep character.
using ScoreVector = Eigen::VectorXd;

/// Scores for the characters of one lowercase word (word-character
/// algorithm: a distance-1 pass picks the most recoverable character, a
/// distance-2 pass with that character already starred picks the second,
/// the rest share the distance-2 counts).
ScoreVector word_character_score(std::string_view word, const SpellIndex& index,
                                 const ScoreParams& params);

/// Score of a non-word character that follows `preceding`: -delta / |S(preceding + '*', 1)|,
/// or 0 when there are no candidates or no preceding word.
double nonword_character_score(std::string_view preceding, const SpellIndex& index, double delta);

/// 1/K with K = |S(p, d)|, or 0 when K = 0.
double estimate_recovery_probability(const Pattern& p, const SpellIndex& index, unsigned d);

/// Caches per-word score vectors so repeated words in a corpus are scored once.
/// Thread-safe.
class ImportanceScorer {
 public:
  ImportanceScorer(const SpellIndex& index, ScoreParams params);

  const ScoreParams& params() const noexcept { return params_; }
  const SpellIndex& index() const noexcept { return *index_; }

  ScoreVector word_scores(std::string_view lowercase_word) const;
  double nonword_score(std::string_view lowercase_preceding) const;

  /// Scores for chars [begin, end) of `text`. Words straddling the window
  /// edges are scored on the whole word; non-word characters use the word
  /// token immediately before them in the text.
  ScoreVector score_window(const TokenizedText& text, std::size_t begin, std::size_t end) const;

  ScoreVector score_text(const TokenizedText& text) const {
    return score_window(text, 0, text.size());
  }

 private:
  const SpellIndex* index_;
  ScoreParams params_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::string, ScoreVector> word_cache_;
  mutable std::unordered_map<std::string, double> nonword_cache_;
};

using FilterMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// M distinct binary filters of length L_f with exactly `ones` ones each,
/// reproducible from (seed, M, L_f, keep ratio). Filter i is drawn from its
/// own stream keyed by (seed, i, attempt), so a bank with M filters is a
/// prefix of any larger bank built from the same seed.
class FilterBank {
 public:
  /// Throws std::invalid_argument if fewer than M distinct filters exist.
  static FilterBank generate(std::uint64_t seed, std::size_t count, std::size_t length,
                             double keep_ratio);

  /// Number of ones for a window of `length` at `keep_ratio`: round(length * keep_ratio).
  static std::size_t ones_for(std::size_t length, double keep_ratio);

  /// Number of distinct filters available, saturating at `cap`.
  static std::size_t distinct_filters(std::size_t length, std::size_t ones, std::size_t cap);

  std::size_t count() const noexcept { return static_cast<std::size_t>(filters_.rows()); }
  std::size_t length() const noexcept { return static_cast<std::size_t>(filters_.cols()); }
  std::size_t ones() const noexcept { return ones_; }
  double keep_ratio() const noexcept { return keep_ratio_; }
  std::uint64_t seed() const noexcept { return seed_; }
  /// ceil(log2 M); 0 for a single filter.
  unsigned index_bits() const noexcept;

  /// Rows are filters; entries are 0.0 or 1.0.
  const FilterMatrix& matrix() const noexcept { return filters_; }
  auto filter(std::size_t i) const { return filters_.row(static_cast<Eigen::Index>(i)); }
  bool keeps(std::size_t filter, std::size_t position) const {
    return filters_(static_cast<Eigen::Index>(filter), static_cast<Eigen::Index>(position)) != 0.0;
  }

 private:
  FilterMatrix filters_;
  std::size_t ones_ = 0;
  double keep_ratio_ = 1.0;
  std::uint64_t seed_ = 0;
};

struct FilterChoice {
  std::size_t index = 0;
  double score = 0.0;
};

/// Ties within this relative tolerance of the maximum resolve to the lowest index.
inline constexpr double kSelectionTieTolerance = 1e-9;

/// argmax_i f_i^T s over the bank; ties resolve to the lowest index.
template <typename Derived>
FilterChoice select_filter(const Eigen::MatrixBase<Derived>& scores, const FilterBank& bank) {
  const Eigen::VectorXd products = bank.matrix() * scores.template cast<double>();
  const double best = products.maxCoeff();
  const double floor = best - kSelectionTieTolerance * (1.0 + std::abs(best));
  for (Eigen::Index i = 0; i < products.size(); ++i) {
    if (products[i] >= floor) return {static_cast<std::size_t>(i), products[i]};
  }
  return {0, products.size() > 0 ? products[0] : 0.0};
}

/// Keeps the characters at filter-one positions, in order.
std::string puncture(std::string_view window, const FilterBank& bank, std::size_t filter);

struct PuncturedWindow {
  std::string kept;
  std::size_t filter = 0;
  /// Characters of the original window (kept + omitted).
  std::size_t length = 0;
  bool unpunctured_tail = false;
};

/// Whole-text puncturing: consecutive non-overlapping windows of L_f
/// characters; the final partial window is sent unpunctured with index 0.
struct PuncturedText {
  std::vector<PuncturedWindow> windows;
  bool tail_unpunctured = false;

  std::string kept() const;
  std::vector<std::size_t> filter_indices() const;
  std::size_t omitted() const;
};

enum class SelectionPolicy { Proposed, Random };

/// `random_seed` drives the Random policy only (one uniform index per window).
PuncturedText puncture_text(const TokenizedText& text, const ScoreVector& text_scores,
                            const FilterBank& bank, SelectionPolicy policy,
                            std::uint64_t random_seed = 0);

}  // namespace ptx
