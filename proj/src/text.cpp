#include "merit/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>

#include "merit/errors.hpp"

namespace merit {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : text) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      cur += static_cast<char>(std::tolower(u));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

Vocabulary Vocabulary::build(std::span<const std::vector<std::string>> docs) {
  std::set<std::string> uniq;
  for (const auto& doc : docs)
    for (const auto& tok : doc) uniq.insert(tok);
  Vocabulary v;
  v.words_.assign(uniq.begin(), uniq.end());
  return v;
}

Vocabulary Vocabulary::from_words(std::vector<std::string> unique_words) {
  std::sort(unique_words.begin(), unique_words.end());
  unique_words.erase(std::unique(unique_words.begin(), unique_words.end()),
                     unique_words.end());
  Vocabulary v;
  v.words_ = std::move(unique_words);
  return v;
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view token) const {
  auto it = std::lower_bound(words_.begin(), words_.end(), token);
  if (it == words_.end() || *it != token) return std::nullopt;
  return static_cast<std::size_t>(it - words_.begin());
}

CountVector count_vector(std::span<const std::string> tokens, const Vocabulary& vocab) {
  CountVector v;
  v.dims = vocab.size();
  for (const auto& tok : tokens)
    if (auto idx = vocab.index_of(tok)) ++v.entries[*idx];
  return v;
}

double cosine_similarity(const CountVector& u, const CountVector& v) {
  if (u.dims != v.dims)
    throw DimensionMismatch("cosine_similarity: " + std::to_string(u.dims) +
                            " vs " + std::to_string(v.dims));
  double nu = 0.0, nv = 0.0, uv = 0.0;
  for (const auto& [i, c] : u.entries) nu += double(c) * double(c);
  for (const auto& [i, c] : v.entries) nv += double(c) * double(c);
  if (nu == 0.0 || nv == 0.0) throw ZeroVector();
  auto it = v.entries.begin();
  for (const auto& [i, c] : u.entries) {
    while (it != v.entries.end() && it->first < i) ++it;
    if (it == v.entries.end()) break;
    if (it->first == i) uv += double(c) * double(it->second);
  }
  return uv / (std::sqrt(nu) * std::sqrt(nv));
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    bool boundary = (c == '.' || c == '!' || c == '?') &&
                    (i + 1 >= text.size() || std::isspace(static_cast<unsigned char>(text[i + 1])));
    if (boundary) {
      std::string_view s = text.substr(start, i + 1 - start);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
      if (!s.empty()) sentences.emplace_back(s);
      start = i + 1;
    }
  }
  if (start < text.size()) {
    std::string_view s = text.substr(start);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
      s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
      s.remove_suffix(1);
    if (!s.empty()) sentences.emplace_back(s);
  }
  return sentences;
}

std::size_t count_words(std::string_view text) {
  std::size_t words = 0;
  bool in_space = true;
  for (char c : text) {
    bool ws = std::isspace(static_cast<unsigned char>(c));
    if (!ws && in_space) ++words;
    in_space = ws;
  }
  return words;
}

std::string summarize_extractive(std::string_view text, std::size_t max_words) {
  if (count_words(text) <= max_words) return std::string(text);

  std::vector<std::string> sentences = split_sentences(text);
  std::vector<std::vector<std::string>> sent_tokens;
  sent_tokens.reserve(sentences.size());
  for (const auto& s : sentences) sent_tokens.push_back(tokenize(s));

  // tf-idf over the document's own sentences
  Vocabulary vocab = Vocabulary::build(sent_tokens);
  std::vector<long long> doc_freq(vocab.size(), 0);
  for (const auto& toks : sent_tokens) {
    std::set<std::size_t> seen;
    for (const auto& t : toks)
      if (auto idx = vocab.index_of(t)) seen.insert(*idx);
    for (std::size_t idx : seen) ++doc_freq[idx];
  }
  const double n = static_cast<double>(sentences.size());
  std::vector<double> idf(vocab.size());
  for (std::size_t j = 0; j < vocab.size(); ++j)
    idf[j] = doc_freq[j] > 0 ? std::log(n / static_cast<double>(doc_freq[j])) : 0.0;

  std::vector<double> score(sentences.size(), 0.0);
  for (std::size_t i = 0; i < sentences.size(); ++i)
    for (const auto& t : sent_tokens[i])
      if (auto idx = vocab.index_of(t)) score[i] += idf[*idx];

  std::vector<std::size_t> order(sentences.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return score[a] > score[b];  // stable: ties keep earlier position first
  });

  std::vector<bool> selected(sentences.size(), false);
  std::size_t budget = max_words;
  bool any = false;
  for (std::size_t idx : order) {
    std::size_t w = count_words(sentences[idx]);
    if (w <= budget) {
      selected[idx] = true;
      budget -= w;
      any = true;
    }
  }

  if (!any) {
    // no sentence fits at all: emit the first max_words words of the
    // top-ranked sentence
    const std::string& best = sentences[order.empty() ? 0 : order[0]];
    std::string out;
    std::size_t words = 0;
    bool in_space = true;
    for (char c : best) {
      bool ws = std::isspace(static_cast<unsigned char>(c));
      if (!ws && in_space) {
        if (words == max_words) break;
        ++words;
        if (!out.empty()) out += ' ';
      }
      if (!ws) out += c;
      in_space = ws;
    }
    return out;
  }

  std::string out;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (!selected[i]) continue;
    if (!out.empty()) out += ' ';
    out += sentences[i];
  }
  return out;
}

double summary_fidelity(std::string_view original, std::string_view summary) {
  std::vector<std::vector<std::string>> docs = {tokenize(original), tokenize(summary)};
  Vocabulary vocab = Vocabulary::build(docs);
  return cosine_similarity(count_vector(docs[0], vocab), count_vector(docs[1], vocab));
}

}  // namespace merit
