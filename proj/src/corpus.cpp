#include "ptx/corpus.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "ptx/error.hpp"

namespace ptx {

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = to_lower(c);
  return out;
}

TokenizedText tokenize(std::string_view text) {
  TokenizedText out;
  out.chars.assign(text);
  out.token_of.resize(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (!is_supported_char(c)) {
      throw UnsupportedCharacter(i, static_cast<unsigned char>(c));
    }
    if (is_alpha(c)) {
      std::size_t j = i;
      while (j < text.size() && is_alpha(text[j])) ++j;
      std::fill(out.token_of.begin() + static_cast<std::ptrdiff_t>(i),
                out.token_of.begin() + static_cast<std::ptrdiff_t>(j), out.tokens.size());
      out.tokens.emplace_back(Word{i, std::string(text.substr(i, j - i))});
      i = j;
    } else {
      out.token_of[i] = out.tokens.size();
      out.tokens.emplace_back(NonWord{i, c});
      ++i;
    }
  }
  return out;
}

std::string detokenize(const TokenizedText& text) {
  std::string out;
  out.reserve(text.chars.size());
  for (const auto& tok : text.tokens) {
    std::visit(
        [&](const auto& t) {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, Word>) {
            out += t.text;
          } else {
            out += t.ch;
          }
        },
        tok);
  }
  return out;
}

namespace {

bool all_alpha(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return is_alpha(c); });
}

}  // namespace

Dictionary Dictionary::from_words(const std::vector<std::string>& words,
                                  const std::unordered_map<std::string, std::uint64_t>& freq) {
  std::vector<std::string> lowered;
  lowered.reserve(words.size());
  for (const auto& w : words) {
    if (!all_alpha(w)) continue;
    lowered.push_back(to_lower(w));
  }
  std::sort(lowered.begin(), lowered.end());
  lowered.erase(std::unique(lowered.begin(), lowered.end()), lowered.end());
  if (lowered.empty()) throw EmptyDictionary{};

  Dictionary d;
  d.words_ = std::move(lowered);
  d.freq_.assign(d.words_.size(), 1);
  d.index_.reserve(d.words_.size());
  for (std::size_t i = 0; i < d.words_.size(); ++i) d.index_.emplace(d.words_[i], i);
  for (const auto& [w, f] : freq) {
    if (auto it = d.index_.find(to_lower(w)); it != d.index_.end()) {
      d.freq_[it->second] = std::max<std::uint64_t>(f, 1);
    }
  }
  return d;
}

std::optional<std::size_t> Dictionary::find(std::string_view word) const {
  std::string key = to_lower(word);
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  return std::nullopt;
}

bool Dictionary::contains(std::string_view word) const { return find(word).has_value(); }

std::uint64_t Dictionary::frequency(std::string_view word) const {
  auto id = find(word);
  return id ? freq_[*id] : 0;
}

namespace {

void parse_word_lines(std::istream& in, std::vector<std::string>& words,
                      std::unordered_map<std::string, std::uint64_t>& freq) {
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    words.push_back(word);
    std::uint64_t count = 0;
    if (ls >> count) {
      auto& slot = freq[to_lower(word)];
      slot = std::max(slot, count);
    }
  }
}

}  // namespace

Dictionary load_dictionary(std::istream& word_list, std::istream* frequency) {
  std::vector<std::string> words;
  std::unordered_map<std::string, std::uint64_t> freq;
  parse_word_lines(word_list, words, freq);
  if (frequency != nullptr) {
    std::vector<std::string> ignored;
    std::unordered_map<std::string, std::uint64_t> extra;
    parse_word_lines(*frequency, ignored, extra);
    for (auto& [w, c] : extra) freq[w] = c;
  }
  return Dictionary::from_words(words, freq);
}

Dictionary load_dictionary(const std::filesystem::path& word_list,
                           const std::optional<std::filesystem::path>& frequency) {
  std::ifstream in(word_list);
  if (!in) throw Error("cannot open dictionary " + word_list.string());
  if (frequency) {
    std::ifstream fin(*frequency);
    if (!fin) throw Error("cannot open frequency file " + frequency->string());
    return load_dictionary(in, &fin);
  }
  return load_dictionary(in);
}

namespace {

bool supported_line(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) { return is_supported_char(c); });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

CorpusLoad read_corpus(std::istream& in) {
  CorpusLoad out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto s = trim(line);
    if (s.empty()) continue;
    if (!supported_line(s)) {
      spdlog::warn("corpus line {} has characters outside the 7-bit set; skipped", lineno);
      ++out.skipped;
      continue;
    }
    out.sentences.emplace_back(s);
  }
  return out;
}

CorpusLoad read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus " + path.string());
  return read_corpus(in);
}

std::vector<std::string> split_sentences(std::string_view paragraph) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  auto flush = [&](std::size_t end) {
    auto s = trim(paragraph.substr(begin, end - begin));
    if (!s.empty()) out.emplace_back(s);
    begin = end;
  };
  for (std::size_t i = 0; i < paragraph.size(); ++i) {
    const char c = paragraph[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t j = i + 1;
    while (j < paragraph.size() && (paragraph[j] == '"' || paragraph[j] == '\'' || paragraph[j] == ')')) ++j;
    if (j == paragraph.size() || paragraph[j] == ' ' || paragraph[j] == '\n') {
      flush(j);
      i = j;
    }
  }
  flush(paragraph.size());
  return out;
}

CorpusLoad read_squad_contexts(std::istream& in) {
  const auto doc = nlohmann::json::parse(in);
  CorpusLoad out;
  for (const auto& article : doc.at("data")) {
    for (const auto& para : article.at("paragraphs")) {
      const auto context = para.at("context").get<std::string>();
      for (auto& s : split_sentences(context)) {
        if (!supported_line(s)) {
          ++out.skipped;
          continue;
        }
        out.sentences.push_back(std::move(s));
      }
    }
  }
  if (out.skipped > 0) {
    spdlog::warn("skipped {} SQuAD sentences with characters outside the 7-bit set", out.skipped);
  }
  return out;
}

CorpusLoad read_squad_contexts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_squad_contexts(in);
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("PTX_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return PTX_DATA_DIR;
}

}  // namespace ptx
