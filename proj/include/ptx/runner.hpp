#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ptx/config.hpp"
#include "ptx/corpus.hpp"
#include "ptx/embedding.hpp"
#include "ptx/ice.hpp"
#include "ptx/phy/ldpc.hpp"
#include "ptx/recover.hpp"
#include "ptx/spellkit.hpp"

namespace ptx {

inline constexpr int kRecordSchema = 1;

enum class Arm { Proposed, Random, WordOmission, CharOmission };

std::string_view to_string(Arm a) noexcept;

/// One trial of one arm. Metric fields are meaningful only when ok is true.
struct TrialRecord {
  std::size_t point = 0;
  std::size_t trial = 0;
  Arm arm = Arm::Proposed;
  std::size_t sentence = 0;
  std::uint64_t seed = 0;
  std::string backend;

  std::optional<double> snr_db;
  std::optional<double> keep_ratio;
  std::optional<std::size_t> filters;
  std::optional<std::size_t> filters_requested;
  std::optional<double> word_ratio;
  std::optional<double> symbols_per_character;
  std::size_t symbols = 0;

  std::size_t length = 0;
  std::size_t omitted = 0;
  bool frame_ok = true;
  bool link_converged = true;
  bool fallback = false;

  bool ok = true;
  std::string error;

  double bleu = 0.0;
  std::optional<double> similarity;
  double char_accuracy = 0.0;
  double word_accuracy = 0.0;

  std::optional<std::string> recovered;
};

/// One JSON object, no trailing newline. Infinite SNR is written as null.
std::string to_json_line(const TrialRecord& r);

/// Shared, immutable-after-setup state for running trials: dictionary,
/// spell index, score cache, code, filter banks, recoverer and embedder.
class Experiment {
 public:
  explicit Experiment(RunConfig cfg);
  Experiment(const Experiment&) = delete;
  Experiment& operator=(const Experiment&) = delete;
  ~Experiment();

  const RunConfig& config() const noexcept { return cfg_; }
  const std::vector<std::string>& sentences() const noexcept { return sentences_; }
  const Dictionary& dictionary() const noexcept { return dict_; }
  const SpellIndex& index() const noexcept { return *index_; }
  const ImportanceScorer& scorer() const noexcept { return *scorer_; }
  const phy::LdpcCode& code() const noexcept { return code_; }
  const Recoverer& recoverer() const noexcept { return *recoverer_; }
  /// nullptr when no provider is configured.
  EmbeddingProvider* embedder() const noexcept { return embedder_.get(); }

  /// min(M, number of distinct filters) for this keep ratio.
  std::size_t effective_filters(std::size_t requested, double keep_ratio) const;
  /// Bank shared by transmitter and receiver, derived from the run seed. Cached.
  const FilterBank& bank(std::size_t filters, double keep_ratio) const;

 private:
  RunConfig cfg_;
  std::vector<std::string> sentences_;
  Dictionary dict_;
  std::unique_ptr<SpellIndex> index_;
  std::unique_ptr<ImportanceScorer> scorer_;
  phy::LdpcCode code_;
  std::unique_ptr<Recoverer> recoverer_;
  std::unique_ptr<EmbeddingProvider> embedder_;
  mutable std::mutex bank_mutex_;
  mutable std::map<std::pair<std::size_t, long>, std::unique_ptr<FilterBank>> banks_;
};

/// A grid point of the puncturing pipeline.
struct PipelinePoint {
  double snr_db = std::numeric_limits<double>::infinity();
  double keep_ratio = 0.9;
  std::size_t filters = 64;
  /// Symbol budget per original character; whole codewords when absent.
  std::optional<double> symbols_per_char;
};

/// ICE -> frame -> PHY -> indicate -> recover -> metrics for one sentence.
/// Errors become a record with ok = false.
TrialRecord run_pipeline(const Experiment& ex, std::string_view sentence, const PipelinePoint& point,
                         SelectionPolicy policy, std::uint64_t trial_seed);

/// Random word omission: floor((1 - ratio) * L) seeded-random words each
/// replaced by one '*', then recovered. `omitted` carries the character
/// budget removed.
TrialRecord run_word_omission_baseline(const Experiment& ex, std::string_view sentence, double remaining_ratio,
                                       std::uint64_t seed);

/// Character omission at a fixed budget: the `budget` characters with the
/// lowest importance scores (ties by position) become '*', then recovered.
TrialRecord run_char_omission(const Experiment& ex, std::string_view sentence, std::size_t budget);

/// Positions of the words removed by the word-omission baseline, ascending.
std::vector<std::size_t> choose_omitted_words(std::size_t word_count, double remaining_ratio, std::uint64_t seed);

struct AggregateRow {
  std::size_t point = 0;
  Arm arm = Arm::Proposed;
  std::optional<double> snr_db;
  std::optional<double> keep_ratio;
  std::optional<std::size_t> filters;
  std::optional<double> word_ratio;
  std::optional<double> symbols_per_char;
  std::size_t n = 0;
  std::size_t failed = 0;
  double bleu_mean = 0, bleu_stderr = 0;
  double char_accuracy_mean = 0, char_accuracy_stderr = 0;
  double word_accuracy_mean = 0, word_accuracy_stderr = 0;
  std::optional<double> similarity_mean, similarity_stderr;
  double symbols_per_character_mean = 0;
};

/// Means and standard errors per (point, arm) over successful trials, in
/// first-appearance order.
std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& records);

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

struct SweepResult {
  std::vector<TrialRecord> records;
  std::vector<AggregateRow> aggregates;
  std::size_t failed = 0;
};

/// Runs the configured grid: snr x keep_ratio x filters x symbols_per_char
/// with the proposed and random arms, then one point per word_ratio with the
/// word- and character-omission arms. Trial t of point p uses sentence
/// t mod corpus size and seed hash(run seed, p, t) for every arm. Records are
/// streamed to `jsonl` in (point, trial, arm) order.
SweepResult sweep(const Experiment& ex, std::ostream* jsonl = nullptr);

/// sweep() plus the JSONL and CSV files named by the config. Returns the
/// number of failed trials.
std::size_t run_to_files(const Experiment& ex);

}  // namespace ptx
