#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptx/ice.hpp"
#include "ptx/llm.hpp"

namespace ptx {

enum class RecoveryBackend { Dictionary, Llm };
enum class EmbeddingKind { None, Hashing, Http };

/// A run configuration. Text form is one `key = value` per line, `#`
/// comments, lists as comma-separated values (optionally in brackets).
/// Keys:
///
///   corpus, dictionary, ldpc          paths (relative to the config file)
///   alpha, beta, gamma, delta         importance-score weights
///   filter_length, filters            L_f and the list of bank sizes M
///   keep_ratio, snr_db                lists; snr_db accepts `inf`
///   symbols_per_char                  list; empty sends whole codewords
///   word_ratio                        list; adds word/char omission arms
///   arms                              subset of proposed, random
///   seed, trials, workers, max_iterations, bleu_max_n, record_text
///   backend                           dictionary | llm
///   llm.transport                     sidecar | chat
///   llm.base_url, llm.model, llm.token_env, llm.prompt_version,
///   llm.retries, llm.backoff_ms, llm.timeout_ms, llm.max_concurrency
///   embedding                         none | hashing | http
///   embedding.url, embedding.timeout_ms
///   output                            JSONL path; the CSV aggregate goes next to it
struct RunConfig {
  std::filesystem::path corpus;
  std::filesystem::path dictionary;
  std::filesystem::path ldpc;

  ScoreParams score;
  std::size_t filter_length = 40;
  std::vector<std::size_t> filters{64};
  std::vector<double> keep_ratios{0.9};
  std::vector<double> snr_db{std::numeric_limits<double>::infinity()};
  std::vector<double> symbols_per_char;
  std::vector<double> word_ratios;
  bool proposed_arm = true;
  bool random_arm = true;

  std::uint64_t seed = 1;
  std::size_t trials = 10;
  unsigned workers = 0;
  unsigned max_iterations = 50;
  unsigned bleu_max_n = 4;
  bool record_text = false;

  RecoveryBackend backend = RecoveryBackend::Dictionary;
  LlmConfig llm;

  EmbeddingKind embedding = EmbeddingKind::None;
  std::string embedding_url = "http://127.0.0.1:8765";
  unsigned embedding_timeout_ms = 30000;

  std::filesystem::path output = "results.jsonl";

  /// Bundled corpus, dictionary and code.
  static RunConfig defaults();
  /// Throws ConfigError on unknown keys or malformed values.
  static RunConfig parse(std::istream& in, const std::filesystem::path& base_dir = {});
  static RunConfig load(const std::filesystem::path& path);

  /// Applies one `key = value` setting. Relative paths resolve against base_dir.
  void set(std::string_view key, std::string_view value, const std::filesystem::path& base_dir = {});
  /// Parses `key=value`.
  void apply_override(std::string_view assignment);

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;

  std::filesystem::path aggregate_path() const;
};

}  // namespace ptx
