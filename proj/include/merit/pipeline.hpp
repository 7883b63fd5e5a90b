#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "merit/config.hpp"
#include "merit/featurize.hpp"
#include "merit/gan.hpp"
#include "merit/ingest.hpp"
#include "merit/metrics.hpp"

namespace merit {

/// Provider selected by the config: file-backed rows when
/// featurize.embeddings is set, the built-in hash provider otherwise.
std::unique_ptr<EmbeddingProvider> make_provider(const PipelineConfig& config);

struct FeatureBuild {
  Matrix features;  // [dummies | log_dollar | text]
  std::size_t dummy_width = 0;
  std::size_t text_width = 0;
  bool k_clamped = false;
  std::size_t k_used = 0;
};

/// Steps 1-2: dummies over product/issue/company, text featurization per
/// the configured mode, horizontal assembly.
FeatureBuild build_features(const std::vector<ComplaintRecord>& corpus,
                            const PipelineConfig& config);

/// Token sequences embedded for the LSTM classifier (per-token composition,
/// idf-reweighted when the mode asks for it).
std::vector<EmbeddedSequence> build_sequences(const std::vector<ComplaintRecord>& corpus,
                                              const PipelineConfig& config);

/// The full train/evaluate procedure in memory: featurize, split, train the
/// configured classifier, score the held-out rows.
MetricReport run_algorithm1(const std::vector<ComplaintRecord>& corpus,
                            const PipelineConfig& config);

// model file round trip (versioned text serialization with seed echo)
struct TrainedModel {
  std::string kind;  // lr|rf|lstm
  std::string feature_mode;
  std::uint64_t seed = 0;
  double test_fraction = 0.2;
  Standardizer standardizer;
  LogisticModel logistic;
  ForestModel forest;
  LstmClassifier lstm;
};
void save_model(std::ostream& out, const TrainedModel& m);
TrainedModel load_model(std::istream& in);

// subcommands; artifacts land under config.workdir
int cmd_ingest(const PipelineConfig& config);
int cmd_summarize(const PipelineConfig& config);
int cmd_featurize(const PipelineConfig& config);
int cmd_train(const PipelineConfig& config);
int cmd_eval(const PipelineConfig& config);
int cmd_generate(const PipelineConfig& config);
int cmd_compare(const std::string& report_a, const std::string& report_b,
                std::ostream& out);

std::string comparison_table(const MetricReport& a, const MetricReport& b);

}  // namespace merit
