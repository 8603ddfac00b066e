#include "ptx/recover.hpp"

#include <algorithm>
#include <cctype>

#include "ptx/error.hpp"

namespace ptx {

std::string IndicatedText::received() const {
  std::string out;
  out.reserve(chars.size());
  for (char c : chars) {
    if (c != kStar) out.push_back(c);
  }
  return out;
}

namespace {

void emit_window(IndicatedText& out, std::string_view kept, std::size_t& cursor, const FilterBank& bank,
                 std::size_t filter) {
  WindowProvenance w{filter, out.chars.size(), bank.length(), false};
  for (std::size_t i = 0; i < bank.length(); ++i) {
    if (bank.keeps(filter, i)) {
      out.chars.push_back(kept[cursor++]);
    } else {
      out.stars.push_back(out.chars.size());
      out.chars.push_back(kStar);
    }
  }
  out.windows.push_back(w);
}

void emit_tail(IndicatedText& out, std::string_view rest) {
  out.windows.push_back({0, out.chars.size(), rest.size(), true});
  out.chars.append(rest);
}

}  // namespace

IndicatedText indicate(std::string_view punctured, std::span<const std::size_t> filter_indices,
                       const FilterBank& bank, bool tail_unpunctured) {
  const std::size_t windows = filter_indices.size();
  const std::size_t full = tail_unpunctured ? (windows == 0 ? 0 : windows - 1) : windows;
  if (tail_unpunctured && windows == 0) throw BrokenFrame("tail flag without windows", 1, 0);
  for (std::size_t w = 0; w < full; ++w) {
    if (filter_indices[w] >= bank.count()) throw BrokenFrame("filter index outside the bank", bank.count(), filter_indices[w]);
  }
  const std::size_t expected_full = full * bank.ones();
  if (tail_unpunctured) {
    // The tail is a partial window: between 1 and L_f - 1 characters.
    if (punctured.size() <= expected_full || punctured.size() - expected_full >= bank.length()) {
      throw BrokenFrame("character count does not match the filters", expected_full + 1, punctured.size());
    }
  } else if (punctured.size() != expected_full) {
    throw BrokenFrame("character count does not match the filters", expected_full, punctured.size());
  }

  IndicatedText out;
  out.chars.reserve(full * bank.length() + (punctured.size() - expected_full));
  std::size_t cursor = 0;
  for (std::size_t w = 0; w < full; ++w) emit_window(out, punctured, cursor, bank, filter_indices[w]);
  if (tail_unpunctured) emit_tail(out, punctured.substr(cursor));
  return out;
}

IndicatedText indicate_best_effort(std::string_view punctured, std::span<const std::size_t> filter_indices,
                                   const FilterBank& bank, bool tail_unpunctured) {
  const std::size_t windows = filter_indices.size();
  const std::size_t full = tail_unpunctured && windows > 0 ? windows - 1 : windows;
  IndicatedText out;
  std::size_t cursor = 0;
  for (std::size_t w = 0; w < full && punctured.size() - cursor >= bank.ones(); ++w) {
    emit_window(out, punctured, cursor, bank, filter_indices[w] % bank.count());
  }
  if (cursor < punctured.size()) emit_tail(out, punctured.substr(cursor));
  return out;
}

IndicatedText indicated_from_string(std::string_view chars) {
  IndicatedText out;
  out.chars = std::string(chars);
  for (std::size_t i = 0; i < chars.size(); ++i) {
    if (chars[i] == kStar) out.stars.push_back(i);
  }
  out.windows.push_back({0, 0, chars.size(), out.stars.empty()});
  return out;
}

std::string_view to_string(Backend b) noexcept {
  switch (b) {
    case Backend::Dictionary: return "dictionary";
    case Backend::Llm: return "llm";
    case Backend::LlmFallback: return "llm_fallback";
  }
  return "unknown";
}

std::optional<std::vector<std::string>> assign_stars(std::string_view pattern, std::string_view filled) {
  const std::size_t a = pattern.size(), b = filled.size();
  // ok[i][j]: pattern[i..] can produce filled[j..].
  std::vector<std::vector<char>> ok(a + 1, std::vector<char>(b + 1, 0));
  ok[a][b] = 1;
  for (std::size_t i = a; i-- > 0;) {
    for (std::size_t j = b + 1; j-- > 0;) {
      if (pattern[i] == kStar) {
        ok[i][j] = ok[i + 1][j] || (j < b && ok[i + 1][j + 1]);
      } else {
        ok[i][j] = j < b && to_lower(pattern[i]) == to_lower(filled[j]) && ok[i + 1][j + 1];
      }
    }
  }
  if (!ok[0][0]) return std::nullopt;
  std::vector<std::string> out;
  std::size_t j = 0;
  for (std::size_t i = 0; i < a; ++i) {
    if (pattern[i] != kStar) {
      ++j;
      continue;
    }
    if (j < b && ok[i + 1][j + 1]) {
      out.emplace_back(1, filled[j++]);
    } else {
      out.emplace_back();
    }
  }
  return out;
}

std::optional<std::vector<std::string>> align_restoration(std::string_view indicated, std::string_view restored) {
  const std::size_t a = indicated.size(), b = restored.size();
  std::vector<std::vector<char>> ok(a + 1, std::vector<char>(b + 1, 0));
  ok[a][b] = 1;
  for (std::size_t i = a; i-- > 0;) {
    if (indicated[i] == kStar) {
      // A star absorbs restored[j..j') for any j' >= j.
      bool any = false;
      for (std::size_t j = b + 1; j-- > 0;) {
        any = any || ok[i + 1][j];
        ok[i][j] = any;
      }
    } else {
      for (std::size_t j = b + 1; j-- > 0;) {
        ok[i][j] = j < b && indicated[i] == restored[j] && ok[i + 1][j + 1];
      }
    }
  }
  if (!ok[0][0]) return std::nullopt;
  std::vector<std::string> out;
  std::size_t j = 0;
  for (std::size_t i = 0; i < a; ++i) {
    if (indicated[i] != kStar) {
      ++j;
      continue;
    }
    // Prefer one character, then none, then the shortest longer run.
    std::size_t take = b + 1;
    if (j < b && ok[i + 1][j + 1]) {
      take = 1;
    } else if (ok[i + 1][j]) {
      take = 0;
    } else {
      for (std::size_t t = 2; j + t <= b; ++t) {
        if (ok[i + 1][j + t]) {
          take = t;
          break;
        }
      }
    }
    out.emplace_back(restored.substr(j, take));
    j += take;
  }
  return out;
}

namespace {

bool is_token_char(char c) { return is_alpha(c) || c == kStar; }

bool sentence_initial(std::string_view text, std::size_t start) {
  std::size_t i = start;
  while (i > 0 && (text[i - 1] == ' ' || text[i - 1] == '\n')) --i;
  if (i == 0) return true;
  const char p = text[i - 1];
  return p == '.' || p == '!' || p == '?';
}

struct Choice {
  std::string spelling;
  std::uint64_t score = 0;
};

}  // namespace

RecoveredText recover_deterministic(const IndicatedText& m, const SpellIndex& index) {
  const std::string& text = m.chars;
  RecoveredText out;
  out.chars.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (!is_token_char(text[pos])) {
      out.chars.push_back(text[pos++]);
      continue;
    }
    const std::size_t start = pos;
    while (pos < text.size() && is_token_char(text[pos])) ++pos;
    const std::string_view token(text.data() + start, pos - start);
    const auto stars = static_cast<std::size_t>(std::count(token.begin(), token.end(), kStar));
    if (stars == 0) {
      out.chars.append(token);
      continue;
    }

    const Pattern pattern(token);
    const auto whole = index.candidates(pattern, static_cast<unsigned>(stars));
    const auto splits = index.split_candidates(pattern);
    std::optional<Choice> best;
    auto offer = [&](std::string spelling, std::uint64_t score) {
      if (!best || score > best->score || (score == best->score && spelling < best->spelling)) {
        best = Choice{std::move(spelling), score};
      }
    };
    for (const auto& c : whole.words) offer(c.word, c.frequency);
    const auto& dict = index.dictionary();
    for (const auto& s : splits) {
      offer(s.left + " " + s.right, std::min(dict.frequency(s.left), dict.frequency(s.right)));
    }
    const std::size_t pool = whole.size() + splits.size();

    std::vector<std::string> fill(stars);
    if (best) {
      if (auto a = assign_stars(token, best->spelling)) fill = std::move(*a);
    }

    // Case: follow an all-caps word; otherwise capitalise only a
    // sentence-initial leading star.
    std::size_t letters = 0, upper = 0;
    for (char c : token) {
      if (is_alpha(c)) {
        ++letters;
        if (std::isupper(static_cast<unsigned char>(c))) ++upper;
      }
    }
    const bool all_caps = letters >= 2 && upper == letters;
    const bool title = token.front() == kStar && sentence_initial(text, start);

    std::size_t s = 0;
    for (std::size_t i = 0; i < token.size(); ++i) {
      if (token[i] != kStar) {
        out.chars.push_back(token[i]);
        continue;
      }
      std::string chosen = fill[s++];
      if (all_caps || (i == 0 && title)) {
        for (auto& c : chosen) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      }
      out.chars += chosen;
      out.resolutions.push_back({start + i, chosen, Backend::Dictionary, pool});
    }
  }
  return out;
}

}  // namespace ptx
