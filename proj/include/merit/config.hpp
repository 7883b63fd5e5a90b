#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "merit/classify.hpp"
#include "merit/gan.hpp"
#include "merit/ingest.hpp"
#include "merit/lstm.hpp"

namespace merit {

/// One flat config drives every pipeline stage. The global seed fans out
/// to per-stage streams via derive_seed(seed, stage-name).
struct PipelineConfig {
  std::string input_csv;
  std::string workdir = "work";
  std::string corpus_file;  // defaults to <workdir>/corpus.csv when empty
  std::uint64_t seed = 0;

  FilterConfig filter;
  std::size_t summary_max_words = 128;

  std::string feature_mode = "tfidf";  // tfidf|truncated_tfidf|embed_plain|embed_idf
  std::size_t svd_k = 768;
  std::optional<long long> tf_cap;
  std::size_t embed_dim = 768;
  std::string embeddings_path;  // dense matrix file; empty = built-in provider

  std::string classifier = "lr";  // lr|rf|lstm
  SplitConfig split;
  LogisticHyper logistic;
  ForestHyper forest;
  LstmClassifierHyper lstm;
  GanConfig gan;

  std::string corpus_path() const {
    return corpus_file.empty() ? workdir + "/corpus.csv" : corpus_file;
  }

  bool bag_mode() const {
    return feature_mode == "tfidf" || feature_mode == "truncated_tfidf";
  }

  /// Validates value ranges and the featurization/classifier compatibility
  /// rule (bag-of-words modes cannot feed the LSTM).
  void validate() const;
};

PipelineConfig parse_config_text(const std::string& text);
PipelineConfig load_config_file(const std::string& path);
std::string dump_config(const PipelineConfig& c);

}  // namespace merit
