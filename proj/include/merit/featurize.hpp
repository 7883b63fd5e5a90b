#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "merit/linalg.hpp"
#include "merit/text.hpp"

namespace merit {

struct TfIdfModel {
  Vocabulary vocab;
  std::vector<double> idf;  // ln(n_docs / doc_freq)
  std::size_t n_docs = 0;
  std::optional<long long> tf_cap;

  /// idf for any token; unseen tokens get ln(n_docs), the rarest-possible
  /// weight.
  double idf_of(std::string_view token) const;
};

TfIdfModel fit_tfidf(std::span<const std::vector<std::string>> docs,
                     std::optional<long long> tf_cap = std::nullopt);

/// Entry (i,j) = min(tf, cap) * idf[j]; zeros (idf 0) omitted, transform-time
/// out-of-vocabulary tokens skipped.
SparseMatrix tfidf_matrix(const TfIdfModel& model,
                          std::span<const std::vector<std::string>> docs);

struct TruncatedFeatures {
  Matrix features;  // n_docs x k_used, rows are U * diag(S)
  std::size_t k_used = 0;
  bool k_clamped = false;
};

/// Latent document representation U*diag(S) of the tf-idf matrix; k above
/// min(n_docs, vocab) is clamped.
TruncatedFeatures truncated_tfidf(const SparseMatrix& m, std::size_t k,
                                  std::uint64_t seed, std::size_t oversample = 10,
                                  std::size_t power_iters = 2);

/// Token/position/segment vector source. Must be deterministic per input.
class EmbeddingProvider {
public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dim() const = 0;
  virtual void token_vector(std::string_view token, std::span<double> out) const = 0;
  virtual void positional_vector(std::size_t position, std::span<double> out) const = 0;
  virtual void segment_vector(std::string_view token, std::span<double> out) const = 0;
};

/// Built-in provider: token vectors are unit Gaussians keyed by a 64-bit
/// hash of the token, positions are sinusoidal, segment is zero
/// (single-segment documents).
class HashEmbeddingProvider final : public EmbeddingProvider {
public:
  explicit HashEmbeddingProvider(std::size_t dim = 768, std::uint64_t seed = 0)
      : dim_(dim), seed_(seed) {}
  std::size_t dim() const override { return dim_; }
  void token_vector(std::string_view token, std::span<double> out) const override;
  void positional_vector(std::size_t position, std::span<double> out) const override;
  void segment_vector(std::string_view token, std::span<double> out) const override;

private:
  std::size_t dim_;
  std::uint64_t seed_;
};

enum class EmbeddingMode { Plain, IdfReweighted };

/// token + positional + segment; with idf present the token component is
/// scaled by it first.
std::vector<double> compose_token_embedding(const EmbeddingProvider& provider,
                                            std::string_view token,
                                            std::size_t position,
                                            std::optional<double> idf);

/// Mean of composed token embeddings (the pooled sentence vector). In
/// IdfReweighted mode the tf-idf model supplies per-token idf.
std::vector<double> doc_embedding(const EmbeddingProvider& provider,
                                  std::span<const std::string> tokens,
                                  EmbeddingMode mode,
                                  const TfIdfModel* model = nullptr);

Matrix embed_corpus(const EmbeddingProvider& provider,
                    std::span<const std::vector<std::string>> docs,
                    EmbeddingMode mode, const TfIdfModel* model = nullptr);

/// One-hot encoder over named categorical columns; category order is
/// lexicographic, unknown categories map to an all-zero block.
struct DummyEncoder {
  struct Column {
    std::string name;
    std::vector<std::string> categories;  // sorted
  };
  std::vector<Column> columns;

  std::size_t width() const;
  std::optional<std::string> decode(std::size_t column, std::span<const double> row) const;
};

DummyEncoder fit_dummy(std::span<const std::vector<std::string>> column_values,
                       std::span<const std::string> names);
Matrix dummy_transform(const DummyEncoder& enc,
                       std::span<const std::vector<std::string>> column_values);

/// [dummies | numeric | text_features]; throws RowCountMismatch.
Matrix assemble_features(const Matrix& text_features, const Matrix& dummies,
                         std::span<const double> numeric);

/// Column-wise standardization fitted on the given rows only.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;  // 1 for zero-variance columns
};
Standardizer fit_standardizer(const Matrix& x, std::span<const std::size_t> rows);
void standardize(Matrix& x, const Standardizer& s);

}  // namespace merit
