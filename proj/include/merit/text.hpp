#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace merit {

/// Lowercases and splits on non-alphanumeric boundaries (ASCII).
std::vector<std::string> tokenize(std::string_view text);

/// Lexicographically ordered token set with a dense 0..|W|-1 index.
class Vocabulary {
public:
  Vocabulary() = default;

  static Vocabulary build(std::span<const std::vector<std::string>> docs);
  static Vocabulary from_words(std::vector<std::string> unique_words);  // sorts

  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  std::optional<std::size_t> index_of(std::string_view token) const;

private:
  std::vector<std::string> words_;
};

struct CountVector {
  std::size_t dims = 0;
  std::map<std::size_t, long long> entries;  // column -> count > 0
};

/// Counts in-vocabulary tokens; out-of-vocabulary tokens are ignored.
CountVector count_vector(std::span<const std::string> tokens, const Vocabulary& vocab);

/// (u.v)/(|u||v|); throws ZeroVector if either norm is zero.
double cosine_similarity(const CountVector& u, const CountVector& v);

/// Extractive summary: sentences ranked by summed tf-idf mass (sentences
/// as the fitting corpus), greedily packed into the word budget, emitted
/// in original order. Inputs within the budget pass through unchanged.
std::string summarize_extractive(std::string_view text, std::size_t max_words = 128);

/// Cosine similarity of the two texts' count vectors over their union
/// vocabulary.
double summary_fidelity(std::string_view original, std::string_view summary);

// exposed for tests: boundary is '.', '!' or '?' followed by whitespace
std::vector<std::string> split_sentences(std::string_view text);

std::size_t count_words(std::string_view text);

}  // namespace merit
