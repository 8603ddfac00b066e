#include "ptx/ice.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "ptx/rng.hpp"

namespace ptx {

void ScoreParams::validate() const {
  if (!(alpha > beta && beta > gamma && gamma > 0.0)) {
    throw std::invalid_argument("score parameters require alpha > beta > gamma > 0");
  }
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
}

namespace {

// Candidate count of `pattern` at distance d, or 0 when `word` is not among them.
std::size_t count_if_present(const SpellIndex& index, const std::string& pattern, unsigned d,
                             std::string_view word) {
  const auto set = index.candidates(Pattern(pattern), d);
  return set.contains(word) ? set.size() : 0;
}

double leading_score(std::size_t count, const ScoreParams& p) {
  if (count == 0) return 0.0;
  if (count == 1) return -p.alpha;
  return -p.beta / static_cast<double>(count);
}

}  // namespace

ScoreVector word_character_score(std::string_view word, const SpellIndex& index,
                                 const ScoreParams& params) {
  const std::size_t n = word.size();
  ScoreVector s = ScoreVector::Zero(static_cast<Eigen::Index>(n));
  // An out-of-dictionary word never appears in its own candidate sets, so
  // every count is 0 and every score is 0.
  if (n == 0 || n > kMaxScoredWordLength || !index.dictionary().contains(word)) return s;

  const std::string w = to_lower(word);
  std::vector<std::size_t> count(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::string m = w;
    m[i] = kStar;
    count[i] = count_if_present(index, m, 1, w);
  }
  const auto first = static_cast<std::size_t>(
      std::min_element(count.begin(), count.end()) - count.begin());
  s[static_cast<Eigen::Index>(first)] = leading_score(count[first], params);
  if (n == 1) return s;

  std::fill(count.begin(), count.end(), 0);
  std::size_t second = n;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == first) continue;
    std::string m = w;
    m[first] = kStar;
    m[j] = kStar;
    count[j] = count_if_present(index, m, 2, w);
    if (second == n || count[j] < count[second]) second = j;
  }
  s[static_cast<Eigen::Index>(second)] = leading_score(count[second], params);

  for (std::size_t k = 0; k < n; ++k) {
    if (k == first || k == second) continue;
    s[static_cast<Eigen::Index>(k)] =
        count[k] == 0 ? 0.0 : -params.gamma / static_cast<double>(count[k]);
  }
  return s;
}

double nonword_character_score(std::string_view preceding, const SpellIndex& index, double delta) {
  if (preceding.empty() || preceding.size() > kMaxScoredWordLength) return 0.0;
  std::string m = to_lower(preceding);
  m.push_back(kStar);
  const auto k = index.candidates(Pattern(m), 1).size();
  return k == 0 ? 0.0 : -delta / static_cast<double>(k);
}

double estimate_recovery_probability(const Pattern& p, const SpellIndex& index, unsigned d) {
  const auto k = index.candidates(p, d).size();
  return k == 0 ? 0.0 : 1.0 / static_cast<double>(k);
}

ImportanceScorer::ImportanceScorer(const SpellIndex& index, ScoreParams params)
    : index_(&index), params_(params) {
  params_.validate();
}

ScoreVector ImportanceScorer::word_scores(std::string_view lowercase_word) const {
  const std::string key(lowercase_word);
  {
    std::shared_lock lock(mutex_);
    if (auto it = word_cache_.find(key); it != word_cache_.end()) return it->second;
  }
  auto s = word_character_score(key, *index_, params_);
  std::unique_lock lock(mutex_);
  return word_cache_.emplace(key, std::move(s)).first->second;
}

double ImportanceScorer::nonword_score(std::string_view lowercase_preceding) const {
  const std::string key(lowercase_preceding);
  {
    std::shared_lock lock(mutex_);
    if (auto it = nonword_cache_.find(key); it != nonword_cache_.end()) return it->second;
  }
  const double v = nonword_character_score(key, *index_, params_.delta);
  std::unique_lock lock(mutex_);
  return nonword_cache_.emplace(key, v).first->second;
}

ScoreVector ImportanceScorer::score_window(const TokenizedText& text, std::size_t begin,
                                           std::size_t end) const {
  end = std::min(end, text.size());
  if (begin >= end) return ScoreVector(0);
  ScoreVector out = ScoreVector::Zero(static_cast<Eigen::Index>(end - begin));
  std::size_t pos = begin;
  while (pos < end) {
    const std::size_t t = text.token_of[pos];
    if (const auto* word = std::get_if<Word>(&text.tokens[t])) {
      const auto scores = word_scores(to_lower(word->text));
      const std::size_t stop = std::min(end, word->start + word->length());
      for (; pos < stop; ++pos) {
        out[static_cast<Eigen::Index>(pos - begin)] = scores[static_cast<Eigen::Index>(pos - word->start)];
      }
      continue;
    }
    double v = 0.0;
    if (t > 0) {
      if (const auto* prev = std::get_if<Word>(&text.tokens[t - 1])) {
        v = nonword_score(to_lower(prev->text));
      }
    }
    out[static_cast<Eigen::Index>(pos - begin)] = v;
    ++pos;
  }
  return out;
}

std::size_t FilterBank::ones_for(std::size_t length, double keep_ratio) {
  return static_cast<std::size_t>(std::lround(static_cast<double>(length) * keep_ratio));
}

std::size_t FilterBank::distinct_filters(std::size_t length, std::size_t ones, std::size_t cap) {
  if (ones > length) return 0;
  const std::size_t k = std::min(ones, length - ones);
  unsigned __int128 c = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * (length - k + i) / i;
    if (c >= cap) return cap;
  }
  return static_cast<std::size_t>(std::min<unsigned __int128>(c, cap));
}

FilterBank FilterBank::generate(std::uint64_t seed, std::size_t count, std::size_t length,
                                double keep_ratio) {
  if (count == 0) throw std::invalid_argument("filter bank needs at least one filter");
  if (length == 0) throw std::invalid_argument("filter length must be positive");
  if (!(keep_ratio > 0.0 && keep_ratio <= 1.0)) {
    throw std::invalid_argument("keep ratio must lie in (0, 1]");
  }
  const std::size_t ones = ones_for(length, keep_ratio);
  if (distinct_filters(length, ones, count) < count) {
    throw std::invalid_argument("not enough distinct filters for the requested bank size");
  }

  FilterBank bank;
  bank.filters_ = FilterMatrix::Zero(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(length));
  bank.ones_ = ones;
  bank.keep_ratio_ = keep_ratio;
  bank.seed_ = seed;

  std::set<std::vector<bool>> seen;
  std::vector<std::size_t> positions(length);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      auto rng = make_engine({stream::filter_bank, seed, i, attempt});
      std::iota(positions.begin(), positions.end(), std::size_t{0});
      // Partial Fisher-Yates: the first `ones` slots are a uniform sample.
      for (std::size_t j = 0; j < ones; ++j) {
        std::uniform_int_distribution<std::size_t> pick(j, length - 1);
        std::swap(positions[j], positions[pick(rng)]);
      }
      std::vector<bool> bits(length, false);
      for (std::size_t j = 0; j < ones; ++j) bits[positions[j]] = true;
      if (!seen.insert(bits).second) continue;
      for (std::size_t j = 0; j < length; ++j) {
        bank.filters_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = bits[j] ? 1.0 : 0.0;
      }
      break;
    }
  }
  return bank;
}

unsigned FilterBank::index_bits() const noexcept {
  unsigned bits = 0;
  while ((std::size_t{1} << bits) < count()) ++bits;
  return bits;
}

std::string puncture(std::string_view window, const FilterBank& bank, std::size_t filter) {
  if (window.size() > bank.length()) throw std::invalid_argument("window longer than filter");
  std::string kept;
  kept.reserve(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) {
    if (bank.keeps(filter, i)) kept.push_back(window[i]);
  }
  return kept;
}

std::string PuncturedText::kept() const {
  std::string out;
  for (const auto& w : windows) out += w.kept;
  return out;
}

std::vector<std::size_t> PuncturedText::filter_indices() const {
  std::vector<std::size_t> out;
  out.reserve(windows.size());
  for (const auto& w : windows) out.push_back(w.filter);
  return out;
}

std::size_t PuncturedText::omitted() const {
  std::size_t n = 0;
  for (const auto& w : windows) n += w.length - w.kept.size();
  return n;
}

PuncturedText puncture_text(const TokenizedText& text, const ScoreVector& text_scores,
                            const FilterBank& bank, SelectionPolicy policy,
                            std::uint64_t random_seed) {
  if (static_cast<std::size_t>(text_scores.size()) != text.size()) {
    throw std::invalid_argument("score vector length must match the text");
  }
  const std::size_t L = bank.length();
  PuncturedText out;
  for (std::size_t start = 0, w = 0; start < text.size(); start += L, ++w) {
    const std::size_t len = std::min(L, text.size() - start);
    const std::string_view chars(text.chars.data() + start, len);
    PuncturedWindow win;
    win.length = len;
    if (len < L) {
      win.kept = std::string(chars);
      win.unpunctured_tail = true;
      out.tail_unpunctured = true;
    } else {
      if (policy == SelectionPolicy::Proposed) {
        win.filter = select_filter(text_scores.segment(static_cast<Eigen::Index>(start),
                                                       static_cast<Eigen::Index>(L)),
                                   bank)
                         .index;
      } else {
        auto rng = make_engine({stream::random_arm, random_seed, w});
        win.filter = std::uniform_int_distribution<std::size_t>(0, bank.count() - 1)(rng);
      }
      win.kept = puncture(chars, bank, win.filter);
    }
    out.windows.push_back(std::move(win));
  }
  return out;
}

}  // namespace ptx
