#include <doctest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "ptx/corpus.hpp"
#include "ptx/error.hpp"

using namespace ptx;

namespace {

std::vector<std::string> token_texts(const TokenizedText& t) {
  std::vector<std::string> out;
  for (const auto& tok : t.tokens) {
    if (const auto* w = std::get_if<Word>(&tok)) out.push_back("W:" + w->text);
    else out.push_back(std::string("N:") + std::get<NonWord>(tok).ch);
  }
  return out;
}

std::string random_printable(std::mt19937_64& rng, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> ch(0x20, 0x7f);
  std::string s(len(rng), ' ');
  for (auto& c : s) {
    const int v = ch(rng);
    c = v == 0x7f ? '\n' : static_cast<char>(v);
  }
  return s;
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("sentence with a final period splits into words and single characters") {
    const auto t = tokenize("I ate caramel.");
    CHECK(token_texts(t) == std::vector<std::string>{"W:I", "N: ", "W:ate", "N: ", "W:caramel", "N:."});
    CHECK(t.chars == "I ate caramel.");
    CHECK(std::get<Word>(t.tokens[4]).start == 6);
  }

  TEST_CASE("empty input gives an empty text") {
    const auto t = tokenize("");
    CHECK(t.empty());
    CHECK(t.tokens.empty());
  }

  TEST_CASE("digits are non-word characters") {
    CHECK(token_texts(tokenize("a1b")) == std::vector<std::string>{"W:a", "N:1", "W:b"});
  }

  TEST_CASE("apostrophes split words") {
    CHECK(token_texts(tokenize("don't")) == std::vector<std::string>{"W:don", "N:'", "W:t"});
  }

  TEST_CASE("unsupported characters report index and codepoint") {
    try {
      tokenize("ab\tc");
      FAIL("expected UnsupportedCharacter");
    } catch (const UnsupportedCharacter& e) {
      CHECK(e.index() == 2);
      CHECK(e.codepoint() == 0x09);
    }
    CHECK_THROWS_AS(tokenize("caf\xc3\xa9"), UnsupportedCharacter);
  }

  TEST_CASE("token_of maps every character to the covering token") {
    const auto t = tokenize("the cat, sat");
    REQUIRE(t.token_of.size() == t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto& tok = t.tokens[t.token_of[i]];
      if (const auto* w = std::get_if<Word>(&tok)) {
        CHECK(i >= w->start);
        CHECK(i < w->start + w->length());
      } else {
        CHECK(std::get<NonWord>(tok).index == i);
      }
    }
  }

  TEST_CASE("round trip and idempotence over random printable strings") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
      const auto s = random_printable(rng, 60);
      const auto t = tokenize(s);
      REQUIRE(detokenize(t) == s);
      const auto again = tokenize(detokenize(t));
      REQUIRE(token_texts(again) == token_texts(t));
      std::size_t covered = 0;
      for (const auto& tok : t.tokens) {
        if (const auto* w = std::get_if<Word>(&tok)) {
          covered += w->length();
          for (char c : w->text) REQUIRE(is_alpha(c));
        } else {
          ++covered;
          REQUIRE_FALSE(is_alpha(std::get<NonWord>(tok).ch));
        }
      }
      REQUIRE(covered == s.size());
    }
  }

  TEST_CASE("dictionary from a word list defaults frequencies to one") {
    std::istringstream list("summer\nsimmer\n");
    const auto d = load_dictionary(list);
    CHECK(d.size() == 2);
    CHECK(d.frequency("summer") == 1);
    CHECK(d.frequency("simmer") == 1);
    CHECK(d.frequency("absent") == 0);
  }

  TEST_CASE("duplicate and differently cased lines collapse") {
    std::istringstream list("cat\ncat\nCat\n");
    const auto d = load_dictionary(list);
    CHECK(d.size() == 1);
    CHECK(d.contains("CAT"));
  }

  TEST_CASE("frequency source overrides counts") {
    std::istringstream list("the\nof\n");
    std::istringstream freq("the 1000\n");
    const auto d = load_dictionary(list, &freq);
    CHECK(d.frequency("the") == 1000);
    CHECK(d.frequency("of") == 1);
  }

  TEST_CASE("word count lines in the list itself are read") {
    std::istringstream list("the 50\nand 20\n");
    const auto d = load_dictionary(list);
    CHECK(d.frequency("the") == 50);
    CHECK(d.frequency("and") == 20);
  }

  TEST_CASE("empty dictionary is rejected") {
    std::istringstream list("\n\n");
    CHECK_THROWS_AS(load_dictionary(list), EmptyDictionary);
  }

  TEST_CASE("every frequency entry is a dictionary entry and lookups are total") {
    const auto& d = fixtures::dictionary();
    CHECK(d.size() > 100000);
    for (std::size_t i = 0; i < d.size(); i += 997) {
      const auto& w = d.words()[i];
      CHECK(d.contains(w));
      CHECK(d.find(w) == i);
      CHECK(d.frequency(w) == d.frequency_at(i));
    }
    CHECK(std::is_sorted(d.words().begin(), d.words().end()));
  }

  TEST_CASE("corpus reader skips unsupported lines and counts them") {
    std::istringstream in("First sentence here.\nBad \xc3\xa9 line.\n\nSecond one.\n");
    const auto c = read_corpus(in);
    CHECK(c.sentences == std::vector<std::string>{"First sentence here.", "Second one."});
    CHECK(c.skipped == 1);
  }

  TEST_CASE("bundled corpus has 500 usable sentences of at least 20 words") {
    const auto& s = fixtures::sentences();
    CHECK(s.size() == 500);
    for (const auto& line : s) {
      std::size_t words = 0;
      for (const auto& tok : tokenize(line).tokens) words += std::holds_alternative<Word>(tok) ? 1 : 0;
      CHECK(words >= 20);
    }
  }

  TEST_CASE("SQuAD contexts split on sentence-ending punctuation") {
    std::istringstream in(R"({"data":[{"paragraphs":[{"context":"One here. Two there! Three?"},
                                                    {"context":"Four \"quoted.\" Five"}]}]})");
    const auto c = read_squad_contexts(in);
    CHECK(c.sentences == std::vector<std::string>{"One here.", "Two there!", "Three?", "Four \"quoted.\"", "Five"});
  }

  TEST_CASE("decimal points do not end sentences") {
    CHECK(split_sentences("It cost 3.5 dollars. Then more.") ==
          std::vector<std::string>{"It cost 3.5 dollars.", "Then more."});
  }
}
