#include "ptx/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "ptx/corpus.hpp"
#include "ptx/embedding.hpp"
#include "ptx/error.hpp"
#include "ptx/spellkit.hpp"

namespace ptx {

namespace {

bool is_alnum(char c) { return is_alpha(c) || (c >= '0' && c <= '9'); }

using Gram = std::vector<std::string>;

std::map<Gram, std::size_t> ngram_counts(const std::vector<std::string>& toks, std::size_t n) {
  std::map<Gram, std::size_t> out;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    ++out[Gram(toks.begin() + static_cast<std::ptrdiff_t>(i), toks.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return out;
}

}  // namespace

std::vector<std::string> bleu_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (is_alnum(c)) {
      const std::size_t start = i;
      while (i < text.size() && is_alnum(text[i])) ++i;
      out.emplace_back(text.substr(start, i - start));
    } else {
      if (c != ' ' && c != '\n' && c != '\t' && c != '\r') out.emplace_back(1, c);
      ++i;
    }
  }
  return out;
}

double bleu(std::string_view reference, std::string_view candidate, unsigned max_n) {
  if (max_n == 0) throw std::invalid_argument("max_n must be at least 1");
  const auto ref = bleu_tokens(reference);
  const auto cand = bleu_tokens(candidate);
  if (ref.empty() || cand.empty()) throw EmptyInput("BLEU needs words on both sides");

  double log_sum = 0.0;
  for (unsigned n = 1; n <= max_n; ++n) {
    const auto c_counts = ngram_counts(cand, n);
    const auto r_counts = ngram_counts(ref, n);
    std::size_t matched = 0, total = 0;
    for (const auto& [g, cnt] : c_counts) {
      total += cnt;
      if (auto it = r_counts.find(g); it != r_counts.end()) matched += std::min(cnt, it->second);
    }
    if (matched == 0) return 0.0;
    log_sum += std::log(static_cast<double>(matched) / static_cast<double>(total)) / max_n;
  }
  const double c = static_cast<double>(cand.size());
  const double r = static_cast<double>(ref.size());
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return bp * std::exp(log_sum);
}

double char_accuracy(std::string_view reference, std::string_view candidate) {
  const std::size_t len = std::max(reference.size(), candidate.size());
  if (len == 0) return 1.0;
  return 1.0 - static_cast<double>(edit_distance(reference, candidate)) / static_cast<double>(len);
}

double word_accuracy(std::string_view reference, std::string_view candidate) {
  const auto a = bleu_tokens(reference);
  const auto b = bleu_tokens(candidate);
  const std::size_t len = std::max(a.size(), b.size());
  if (len == 0) return 1.0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[b.size()]) / static_cast<double>(len);
}

double sentence_similarity(std::string_view a, std::string_view b, EmbeddingProvider& provider) {
  const auto v = provider.embed({std::string(a), std::string(b)});
  if (v.size() != 2) throw ProviderUnavailable("provider returned the wrong number of vectors");
  return cosine_similarity(v[0], v[1]);
}

}  // namespace ptx
