#pragma once

#include "ptx/corpus.hpp"
#include "ptx/spellkit.hpp"

namespace fixtures {

inline const ptx::Dictionary& dictionary() {
  static const ptx::Dictionary dict = ptx::load_dictionary(ptx::data_dir() / "dictionary.txt");
  return dict;
}

inline const ptx::SpellIndex& index() {
  static const ptx::SpellIndex idx(dictionary());
  return idx;
}

inline const std::vector<std::string>& sentences() {
  static const auto corpus = ptx::read_corpus(ptx::data_dir() / "corpus.txt");
  return corpus.sentences;
}

}  // namespace fixtures
