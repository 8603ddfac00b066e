#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ptx {

class EmbeddingProvider;

/// BLEU/word-level tokens: maximal alphanumeric runs, and every other
/// non-space character on its own.
std::vector<std::string> bleu_tokens(std::string_view text);

/// Sentence BLEU with clipped n-gram precisions, uniform weights 1/max_n,
/// brevity penalty 1 if c > r else exp(1 - r/c), and no smoothing (any zero
/// precision gives 0). Throws EmptyInput when either side has no tokens and
/// std::invalid_argument when max_n is 0.
double bleu(std::string_view reference, std::string_view candidate, unsigned max_n = 4);

/// 1 - edit_distance / max(length); 1 for two empty strings.
double char_accuracy(std::string_view reference, std::string_view candidate);

/// Longest common subsequence of the token sequences over the longer
/// sequence length; 1 for two empty texts.
double word_accuracy(std::string_view reference, std::string_view candidate);

struct Accuracy {
  double character = 0.0;
  double word = 0.0;
};

inline Accuracy char_word_accuracy(std::string_view reference, std::string_view candidate) {
  return {char_accuracy(reference, candidate), word_accuracy(reference, candidate)};
}

/// Cosine of the provider's embeddings clamped to [0, 1]. Throws
/// ProviderUnavailable when the provider cannot answer.
double sentence_similarity(std::string_view a, std::string_view b, EmbeddingProvider& provider);

}  // namespace ptx
