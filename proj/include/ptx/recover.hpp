#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ptx/ice.hpp"
#include "ptx/spellkit.hpp"

namespace ptx {

struct WindowProvenance {
  std::size_t filter = 0;
  /// Offset of the window in the indicated text.
  std::size_t start = 0;
  std::size_t length = 0;
  bool unpunctured = false;
};

/// Received characters with '*' reinserted at every omitted position.
struct IndicatedText {
  std::string chars;
  std::vector<std::size_t> stars;
  std::vector<WindowProvenance> windows;

  /// The received characters, i.e. chars with every '*' removed.
  std::string received() const;
};

/// Reinserts '*' at the zero positions of each window's filter. Windows are
/// L_f long except an unpunctured tail when `tail_unpunctured` is set, whose
/// length is whatever remains. Throws BrokenFrame if the character count does
/// not match the filters or an index is outside the bank.
IndicatedText indicate(std::string_view punctured, std::span<const std::size_t> filter_indices,
                       const FilterBank& bank, bool tail_unpunctured);

/// Never throws on inconsistent input: out-of-range indices wrap modulo M,
/// windows stop when characters run out, and surplus characters are
/// appended as an unpunctured tail.
IndicatedText indicate_best_effort(std::string_view punctured,
                                   std::span<const std::size_t> filter_indices,
                                   const FilterBank& bank, bool tail_unpunctured);

/// Builds an IndicatedText from a string that already contains '*' markers.
IndicatedText indicated_from_string(std::string_view chars);

enum class Backend { Dictionary, Llm, LlmFallback };

std::string_view to_string(Backend b) noexcept;

/// What replaced one '*'. `chosen` may be empty (deleted star), a letter, a
/// space (split) or several characters (LLM replies).
struct Resolution {
  std::size_t position = 0;
  std::string chosen;
  Backend backend = Backend::Dictionary;
  /// Candidate pool size for dictionary resolutions.
  std::optional<std::size_t> candidates;

  bool operator==(const Resolution&) const = default;
};

struct RecoveredText {
  std::string chars;
  std::vector<Resolution> resolutions;
  bool fallback = false;
};

class Recoverer {
 public:
  virtual ~Recoverer() = default;
  virtual RecoveredText recover(const IndicatedText& m) const = 0;
  virtual std::string name() const = 0;
};

/// Dictionary oracle: each '*'-bearing token (maximal run of letters and
/// '*') with k stars is replaced by the most frequent word within edit
/// distance k, or by a two-word split when that ranks higher (a split scores
/// the smaller of its two frequencies). Ties go to the lexicographically
/// smaller spelling. Tokens without candidates lose their stars.
RecoveredText recover_deterministic(const IndicatedText& m, const SpellIndex& index);

class DictionaryRecoverer final : public Recoverer {
 public:
  explicit DictionaryRecoverer(const SpellIndex& index) : index_(&index) {}
  RecoveredText recover(const IndicatedText& m) const override { return recover_deterministic(m, *index_); }
  std::string name() const override { return "dictionary"; }

 private:
  const SpellIndex* index_;
};

/// Assigns each '*' in `pattern` either nothing or exactly one character of
/// `filled` so that the remaining symbols match case-insensitively. Earlier
/// stars take a character whenever the rest can still be matched. Returns
/// nullopt when no assignment exists.
std::optional<std::vector<std::string>> assign_stars(std::string_view pattern, std::string_view filled);

/// Per-star resolutions that turn `indicated` into `restored`, aligning the
/// non-star characters exactly; a star may absorb any number of characters.
/// Returns nullopt if the non-star characters of `indicated` are not a
/// subsequence of `restored` in the required arrangement.
std::optional<std::vector<std::string>> align_restoration(std::string_view indicated,
                                                          std::string_view restored);

}  // namespace ptx
