#include "merit/featurize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "merit/errors.hpp"
#include "merit/rng.hpp"
#include "merit/svd.hpp"

namespace merit {

double TfIdfModel::idf_of(std::string_view token) const {
  if (auto idx = vocab.index_of(token)) return idf[*idx];
  return std::log(static_cast<double>(n_docs));
}

TfIdfModel fit_tfidf(std::span<const std::vector<std::string>> docs,
                     std::optional<long long> tf_cap) {
  if (docs.empty()) throw EmptyCorpus();
  TfIdfModel model;
  model.vocab = Vocabulary::build(docs);
  if (model.vocab.size() == 0) throw EmptyCorpus();
  model.n_docs = docs.size();
  model.tf_cap = tf_cap;

  std::vector<long long> doc_freq(model.vocab.size(), 0);
  for (const auto& doc : docs) {
    std::set<std::size_t> seen;
    for (const auto& tok : doc)
      if (auto idx = model.vocab.index_of(tok)) seen.insert(*idx);
    for (std::size_t idx : seen) ++doc_freq[idx];
  }
  model.idf.resize(model.vocab.size());
  for (std::size_t j = 0; j < model.vocab.size(); ++j)
    model.idf[j] = std::log(static_cast<double>(model.n_docs) /
                            static_cast<double>(doc_freq[j]));
  return model;
}

SparseMatrix tfidf_matrix(const TfIdfModel& model,
                          std::span<const std::vector<std::string>> docs) {
  std::vector<SparseEntry> entries;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    std::map<std::size_t, long long> tf;
    for (const auto& tok : docs[i])
      if (auto idx = model.vocab.index_of(tok)) ++tf[*idx];
    for (const auto& [j, count] : tf) {
      long long capped = model.tf_cap ? std::min(count, *model.tf_cap) : count;
      double value = static_cast<double>(capped) * model.idf[j];
      if (value != 0.0) entries.push_back({i, j, value});
    }
  }
  return SparseMatrix(docs.size(), model.vocab.size(), std::move(entries));
}

TruncatedFeatures truncated_tfidf(const SparseMatrix& m, std::size_t k,
                                  std::uint64_t seed, std::size_t oversample,
                                  std::size_t power_iters) {
  TruncatedFeatures out;
  std::size_t limit = std::min(m.rows(), m.cols());
  out.k_used = std::min(k, limit);
  out.k_clamped = out.k_used != k;
  SvdFactors f = truncated_svd(m, out.k_used, seed, oversample, power_iters);
  out.features = Matrix(m.rows(), out.k_used);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < out.k_used; ++j)
      out.features(i, j) = f.u(i, j) * f.s[j];
  return out;
}

void HashEmbeddingProvider::token_vector(std::string_view token,
                                         std::span<double> out) const {
  Rng rng(derive_seed(seed_, std::string("tok:") + std::string(token)));
  for (double& x : out) x = rng.gaussian();
}

void HashEmbeddingProvider::positional_vector(std::size_t position,
                                              std::span<double> out) const {
  // transformer-style sinusoids
  const double d = static_cast<double>(dim_);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double angle = static_cast<double>(position) /
                   std::pow(10000.0, 2.0 * static_cast<double>(i / 2) / d);
    out[i] = (i % 2 == 0) ? std::sin(angle) : std::cos(angle);
  }
}

void HashEmbeddingProvider::segment_vector(std::string_view, std::span<double> out) const {
  for (double& x : out) x = 0.0;
}

std::vector<double> compose_token_embedding(const EmbeddingProvider& provider,
                                            std::string_view token,
                                            std::size_t position,
                                            std::optional<double> idf) {
  const std::size_t d = provider.dim();
  std::vector<double> x(d), tmp(d);
  provider.token_vector(token, x);
  if (idf)
    for (double& v : x) v *= *idf;
  provider.positional_vector(position, tmp);
  for (std::size_t i = 0; i < d; ++i) x[i] += tmp[i];
  provider.segment_vector(token, tmp);
  for (std::size_t i = 0; i < d; ++i) x[i] += tmp[i];
  return x;
}

std::vector<double> doc_embedding(const EmbeddingProvider& provider,
                                  std::span<const std::string> tokens,
                                  EmbeddingMode mode, const TfIdfModel* model) {
  if (tokens.empty()) throw EmptyDocument();
  const std::size_t d = provider.dim();
  std::vector<double> acc(d, 0.0);
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    std::optional<double> idf;
    if (mode == EmbeddingMode::IdfReweighted)
      idf = model ? model->idf_of(tokens[t]) : 1.0;
    std::vector<double> x = compose_token_embedding(provider, tokens[t], t, idf);
    for (std::size_t i = 0; i < d; ++i) acc[i] += x[i];
  }
  const double inv = 1.0 / static_cast<double>(tokens.size());
  for (double& v : acc) v *= inv;
  return acc;
}

Matrix embed_corpus(const EmbeddingProvider& provider,
                    std::span<const std::vector<std::string>> docs,
                    EmbeddingMode mode, const TfIdfModel* model) {
  Matrix out(docs.size(), provider.dim());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    std::vector<double> v = doc_embedding(provider, docs[i], mode, model);
    std::copy(v.begin(), v.end(), out.row(i).begin());
  }
  return out;
}

std::size_t DummyEncoder::width() const {
  std::size_t w = 0;
  for (const auto& c : columns) w += c.categories.size();
  return w;
}

std::optional<std::string> DummyEncoder::decode(std::size_t column,
                                                std::span<const double> row) const {
  std::size_t offset = 0;
  for (std::size_t c = 0; c < column; ++c) offset += columns[c].categories.size();
  const auto& cats = columns[column].categories;
  std::size_t best = 0;
  double best_v = -1.0;
  for (std::size_t i = 0; i < cats.size(); ++i) {
    if (row[offset + i] > best_v) {
      best_v = row[offset + i];
      best = i;
    }
  }
  if (best_v <= 0.0) return std::nullopt;  // all-zero block: unknown
  return cats[best];
}

DummyEncoder fit_dummy(std::span<const std::vector<std::string>> column_values,
                       std::span<const std::string> names) {
  DummyEncoder enc;
  for (std::size_t c = 0; c < column_values.size(); ++c) {
    std::set<std::string> cats(column_values[c].begin(), column_values[c].end());
    DummyEncoder::Column col;
    col.name = c < names.size() ? names[c] : "col" + std::to_string(c);
    col.categories.assign(cats.begin(), cats.end());
    enc.columns.push_back(std::move(col));
  }
  return enc;
}

Matrix dummy_transform(const DummyEncoder& enc,
                       std::span<const std::vector<std::string>> column_values) {
  std::size_t n = column_values.empty() ? 0 : column_values[0].size();
  Matrix out(n, enc.width());
  std::size_t offset = 0;
  for (std::size_t c = 0; c < enc.columns.size(); ++c) {
    const auto& cats = enc.columns[c].categories;
    for (std::size_t i = 0; i < n; ++i) {
      auto it = std::lower_bound(cats.begin(), cats.end(), column_values[c][i]);
      if (it != cats.end() && *it == column_values[c][i])
        out(i, offset + static_cast<std::size_t>(it - cats.begin())) = 1.0;
    }
    offset += cats.size();
  }
  return out;
}

Matrix assemble_features(const Matrix& text_features, const Matrix& dummies,
                         std::span<const double> numeric) {
  const std::size_t n = text_features.rows();
  if (dummies.rows() != n || numeric.size() != n)
    throw RowCountMismatch("assemble_features: rows " + std::to_string(n) + " vs " +
                           std::to_string(dummies.rows()) + " vs " +
                           std::to_string(numeric.size()));
  Matrix out(n, dummies.cols() + 1 + text_features.cols());
  for (std::size_t i = 0; i < n; ++i) {
    double* dst = out.row(i).data();
    const double* drow = dummies.row(i).data();
    for (std::size_t j = 0; j < dummies.cols(); ++j) dst[j] = drow[j];
    dst[dummies.cols()] = numeric[i];
    const double* trow = text_features.row(i).data();
    for (std::size_t j = 0; j < text_features.cols(); ++j)
      dst[dummies.cols() + 1 + j] = trow[j];
  }
  return out;
}

Standardizer fit_standardizer(const Matrix& x, std::span<const std::size_t> rows) {
  Standardizer s;
  s.mean.assign(x.cols(), 0.0);
  s.scale.assign(x.cols(), 1.0);
  if (rows.empty()) return s;
  for (std::size_t r : rows) {
    const double* row = x.row(r).data();
    for (std::size_t j = 0; j < x.cols(); ++j) s.mean[j] += row[j];
  }
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  for (double& m : s.mean) m *= inv_n;
  std::vector<double> var(x.cols(), 0.0);
  for (std::size_t r : rows) {
    const double* row = x.row(r).data();
    for (std::size_t j = 0; j < x.cols(); ++j) {
      double d = row[j] - s.mean[j];
      var[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < x.cols(); ++j) {
    double sd = std::sqrt(var[j] * inv_n);
    s.scale[j] = sd > 1e-12 ? sd : 1.0;
  }
  return s;
}

void standardize(Matrix& x, const Standardizer& s) {
  if (x.cols() != s.mean.size()) throw DimensionMismatch("standardize width");
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double* row = x.row(i).data();
    for (std::size_t j = 0; j < x.cols(); ++j)
      row[j] = (row[j] - s.mean[j]) / s.scale[j];
  }
}

}  // namespace merit
