#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ptx/spellkit.hpp"

using namespace ptx;

namespace {

std::vector<std::string> words_of(const CandidateSet& c) {
  std::vector<std::string> out;
  for (const auto& w : c.words) out.push_back(w.word);
  std::sort(out.begin(), out.end());
  return out;
}

bool wildcard_equal(std::string_view pattern, std::string_view word) {
  if (pattern.size() != word.size()) return false;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] != '*' && pattern[i] != word[i]) return false;
  }
  return true;
}

std::vector<SplitCandidate> brute_splits(std::string_view p, const std::vector<std::string>& words) {
  std::set<SplitCandidate> out;
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (p[s] != '*') continue;
    const auto left = p.substr(0, s), right = p.substr(s + 1);
    if (left.empty() || right.empty()) continue;
    for (const auto& l : words) {
      if (!wildcard_equal(left, l)) continue;
      for (const auto& r : words) {
        if (wildcard_equal(right, r)) out.insert({l, r});
      }
    }
  }
  return {out.begin(), out.end()};
}

Dictionary small_dict(std::initializer_list<const char*> ws) {
  std::vector<std::string> v(ws.begin(), ws.end());
  return Dictionary::from_words(v);
}

}  // namespace

TEST_SUITE("spellkit") {
  TEST_CASE("edit distance examples") {
    CHECK(edit_distance("kitten", "sitting") == 3);
    CHECK(edit_distance("summer", "summer") == 0);
    CHECK(edit_distance("", "") == 0);
    CHECK(edit_distance("s*mmer", "summer") == 1);
    CHECK(edit_distance("*", "") == 1);
    CHECK(edit_distance("abc", "") == 3);
  }

  TEST_CASE("edit distance is symmetric, obeys the triangle inequality and matches the full table") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> len(0, 9), ch(0, 4);
    auto gen = [&] {
      std::string s(static_cast<std::size_t>(len(rng)), 'a');
      for (auto& c : s) c = "abc*d"[ch(rng)];
      return s;
    };
    for (int i = 0; i < 3000; ++i) {
      const auto a = gen(), b = gen(), c = gen();
      const auto ab = edit_distance(a, b);
      REQUIRE(ab == oracle::levenshtein(a, b));
      REQUIRE(ab == edit_distance(b, a));
      REQUIRE(edit_distance(a, c) <= ab + edit_distance(b, c));
    }
  }

  TEST_CASE("pattern lowercases, counts stars and rejects other symbols") {
    const Pattern p("Su*mEr");
    CHECK(p.symbols() == "su*mer");
    CHECK(p.star_count() == 1);
    CHECK(Pattern::with_stars("summer", {1, 4}).symbols() == "s*mm*r");
    CHECK_THROWS_AS(Pattern("ab1"), std::invalid_argument);
    CHECK_THROWS_AS(Pattern("a b"), std::invalid_argument);
  }

  TEST_CASE("summ*r has exactly one candidate") {
    const auto c = fixtures::index().candidates("summ*r", 1);
    CHECK(words_of(c) == std::vector<std::string>{"summer"});
  }

  TEST_CASE("a pattern without stars at distance zero is exact membership") {
    CHECK(words_of(fixtures::index().candidates("summer", 0)) == std::vector<std::string>{"summer"});
    CHECK(fixtures::index().candidates("zzqqx", 0).empty());
  }

  TEST_CASE("candidate sets for the summer walkthrough") {
    const auto& idx = fixtures::index();
    CHECK(words_of(idx.candidates("s*mmer", 1)) == std::vector<std::string>{"simmer", "summer"});
    CHECK(words_of(idx.candidates("su*mer", 1)) == std::vector<std::string>{"sumer", "summer"});
    CHECK(words_of(idx.candidates("summ*r", 1)) == std::vector<std::string>{"summer"});
    CHECK(words_of(idx.candidates("summe*", 1)) == std::vector<std::string>{"summed", "summer"});
    CHECK(words_of(idx.candidates("*ummer", 1)) ==
          std::vector<std::string>{"bummer", "hummer", "mummer", "rummer", "summer"});
    CHECK(words_of(idx.candidates("summ**", 2)) ==
          std::vector<std::string>{"summa", "summat", "summed", "summer", "summit", "summon"});
  }

  TEST_CASE("s*mmer equals the linear scan") {
    const auto& words = fixtures::dictionary().words();
    CHECK(words_of(fixtures::index().candidates("s*mmer", 1)) == oracle::spell("s*mmer", 1, words));
  }

  TEST_CASE("candidates are ordered by frequency then spelling") {
    const auto c = fixtures::index().candidates("*ummer", 1);
    for (std::size_t i = 1; i < c.size(); ++i) {
      const auto& a = c.words[i - 1];
      const auto& b = c.words[i];
      CHECK((a.frequency > b.frequency || (a.frequency == b.frequency && a.word < b.word)));
    }
  }

  TEST_CASE("random patterns match the linear scan at distance one and two") {
    const auto& dict = fixtures::dictionary();
    const auto& idx = fixtures::index();
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> pick(0, dict.size() - 1);
    std::uniform_int_distribution<int> stars(0, 2), letter(0, 25);
    for (int i = 0; i < 150; ++i) {
      std::string w = dict.words()[pick(rng)];
      if (w.size() > 8) {
        --i;
        continue;
      }
      if (i % 5 == 0) w[0] = static_cast<char>('a' + letter(rng));  // not always a dictionary word
      const int k = stars(rng);
      for (int s = 0; s < k; ++s) w[std::uniform_int_distribution<std::size_t>(0, w.size() - 1)(rng)] = '*';
      for (unsigned d = 1; d <= 2; ++d) {
        INFO("pattern " << w << " d=" << d);
        REQUIRE(words_of(idx.candidates(w, d)) == oracle::spell(w, d, dict.words()));
      }
    }
  }

  TEST_CASE("candidates grow with distance") {
    const auto& idx = fixtures::index();
    for (const char* p : {"s*mmer", "c*ramel", "th*", "**t", "walk"}) {
      for (unsigned d = 0; d < 2; ++d) {
        const auto small = words_of(idx.candidates(p, d));
        const auto large = words_of(idx.candidates(p, d + 1));
        CHECK(std::includes(large.begin(), large.end(), small.begin(), small.end()));
      }
    }
  }

  TEST_CASE("a dictionary word with one starred letter is among its own candidates") {
    const auto& dict = fixtures::dictionary();
    const auto& idx = fixtures::index();
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> pick(0, dict.size() - 1);
    for (int i = 0; i < 200; ++i) {
      const auto& w = dict.words()[pick(rng)];
      const std::size_t pos = std::uniform_int_distribution<std::size_t>(0, w.size() - 1)(rng);
      std::string p = w;
      p[pos] = '*';
      REQUIRE(idx.candidates(p, 1).contains(w));
    }
  }

  TEST_CASE("split at the star when a space was omitted") {
    const auto& idx = fixtures::index();
    const auto splits = idx.split_candidates(Pattern("the*cat"));
    CHECK(std::find(splits.begin(), splits.end(), SplitCandidate{"the", "cat"}) != splits.end());
    CHECK(splits == brute_splits("the*cat", fixtures::dictionary().words()));
  }

  TEST_CASE("caramel with a starred letter has no split into two words") {
    const auto& idx = fixtures::index();
    CHECK(idx.split_candidates(Pattern("c*ramel")) == brute_splits("c*ramel", fixtures::dictionary().words()));
    CHECK(idx.split_candidates(Pattern("c*ramel")).empty());
  }

  TEST_CASE("tiny dictionary split") {
    const auto d = small_dict({"a", "b"});
    const SpellIndex idx(d);
    CHECK(idx.split_candidates(Pattern("a*b")) == std::vector<SplitCandidate>{{"a", "b"}});
  }

  TEST_CASE("two-star splits use the other star as a single letter") {
    const auto d = small_dict({"at", "it", "cat", "cot", "sat"});
    const SpellIndex idx(d);
    CHECK(idx.split_candidates(Pattern("*t*cat")) == brute_splits("*t*cat", d.words()));
    CHECK(idx.split_candidates(Pattern("*t*cat")).size() == 2);
  }

  TEST_CASE("wildcard matches treat a star as exactly one letter") {
    const auto d = small_dict({"cat", "cot", "coat", "at"});
    const SpellIndex idx(d);
    std::vector<std::string> got;
    for (auto id : idx.wildcard_matches("c*t")) got.push_back(d.words()[id]);
    std::sort(got.begin(), got.end());
    CHECK(got == std::vector<std::string>{"cat", "cot"});
  }
}
