#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace ptx {

/// 7-bit printable ASCII (0x20..0x7e) plus newline.
constexpr bool is_supported_char(char c) noexcept {
  const auto u = static_cast<unsigned char>(c);
  return (u >= 0x20 && u <= 0x7e) || u == '\n';
}

constexpr bool is_alpha(char c) noexcept {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

constexpr char to_lower(char c) noexcept {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string to_lower(std::string_view s);

struct Word {
  std::size_t start = 0;
  std::string text;

  std::size_t length() const noexcept { return text.size(); }
  bool operator==(const Word&) const = default;
};

struct NonWord {
  std::size_t index = 0;
  char ch = ' ';

  bool operator==(const NonWord&) const = default;
};

using Token = std::variant<Word, NonWord>;

/// A text segmented into maximal alphabetic runs (words) and single
/// non-alphabetic characters.
struct TokenizedText {
  std::string chars;
  std::vector<Token> tokens;
  /// token_of[i] is the index into `tokens` of the token covering chars[i].
  std::vector<std::size_t> token_of;

  std::size_t size() const noexcept { return chars.size(); }
  bool empty() const noexcept { return chars.empty(); }
};

/// Throws UnsupportedCharacter on anything outside the 7-bit printable set.
TokenizedText tokenize(std::string_view text);

std::string detokenize(const TokenizedText& text);

/// Case-insensitive word list with unigram counts.
class Dictionary {
 public:
  Dictionary() = default;

  /// Lowercases and deduplicates. Missing frequencies default to 1.
  /// Throws EmptyDictionary when no entries remain.
  static Dictionary from_words(const std::vector<std::string>& words,
                               const std::unordered_map<std::string, std::uint64_t>& freq = {});

  bool contains(std::string_view word) const;
  /// 0 for words not in the dictionary.
  std::uint64_t frequency(std::string_view word) const;

  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }

  /// Entries sorted lexicographically.
  const std::vector<std::string>& words() const noexcept { return words_; }

  /// Index of `word` in words(), if present.
  std::optional<std::size_t> find(std::string_view word) const;
  std::uint64_t frequency_at(std::size_t id) const { return freq_[id]; }

 private:
  std::vector<std::string> words_;
  std::vector<std::uint64_t> freq_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Word list: one `word` or `word count` per line. The optional frequency
/// source uses `word count` lines and overrides counts from the list.
Dictionary load_dictionary(std::istream& word_list, std::istream* frequency = nullptr);
Dictionary load_dictionary(const std::filesystem::path& word_list,
                           const std::optional<std::filesystem::path>& frequency = std::nullopt);

struct CorpusLoad {
  std::vector<std::string> sentences;
  std::size_t skipped = 0;
};

/// One sentence per line; lines with characters outside the supported set
/// are skipped (logged and counted). Blank lines are ignored.
CorpusLoad read_corpus(std::istream& in);
CorpusLoad read_corpus(const std::filesystem::path& path);

/// SQuAD-style JSON: every `data[].paragraphs[].context` is split on
/// sentence-ending punctuation into sentences.
CorpusLoad read_squad_contexts(std::istream& in);
CorpusLoad read_squad_contexts(const std::filesystem::path& path);

std::vector<std::string> split_sentences(std::string_view paragraph);

/// Location of the bundled data files: $PTX_DATA_DIR if set, else the
/// source-tree data directory baked in at build time.
std::filesystem::path data_dir();

}  // namespace ptx
