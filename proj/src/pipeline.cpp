#include "merit/pipeline.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "merit/csv.hpp"
#include "merit/errors.hpp"
#include "merit/svd.hpp"
#include "merit/text.hpp"

namespace merit {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << content;
}

std::vector<std::vector<std::string>> tokenize_corpus(
    const std::vector<ComplaintRecord>& corpus) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(corpus.size());
  for (const auto& r : corpus) docs.push_back(tokenize(r.narrative));
  return docs;
}

/// Per-document rows loaded from a dense matrix file; order must match the
/// corpus file.
class FileEmbeddingSource {
public:
  FileEmbeddingSource(const std::string& path, std::size_t expected_rows)
      : rows_(load_matrix_file(path)) {
    if (rows_.rows() != expected_rows)
      throw RowCountMismatch("embedding file has " + std::to_string(rows_.rows()) +
                             " rows, corpus has " + std::to_string(expected_rows));
  }
  const Matrix& rows() const { return rows_; }

private:
  Matrix rows_;
};

}  // namespace

std::unique_ptr<EmbeddingProvider> make_provider(const PipelineConfig& config) {
  return std::make_unique<HashEmbeddingProvider>(config.embed_dim,
                                                 derive_seed(config.seed, "embed"));
}

FeatureBuild build_features(const std::vector<ComplaintRecord>& corpus,
                            const PipelineConfig& config) {
  if (corpus.empty()) throw EmptyCorpus();
  std::vector<std::vector<std::string>> docs = tokenize_corpus(corpus);

  Matrix text_features;
  FeatureBuild out;
  if (config.feature_mode == "tfidf") {
    TfIdfModel model = fit_tfidf(docs, config.tf_cap);
    text_features = tfidf_matrix(model, docs).to_dense();
  } else if (config.feature_mode == "truncated_tfidf") {
    TfIdfModel model = fit_tfidf(docs, config.tf_cap);
    SparseMatrix m = tfidf_matrix(model, docs);
    TruncatedFeatures t =
        truncated_tfidf(m, config.svd_k, derive_seed(config.seed, "svd"));
    out.k_clamped = t.k_clamped;
    out.k_used = t.k_used;
    text_features = std::move(t.features);
  } else if (config.feature_mode == "embed_plain" ||
             config.feature_mode == "embed_idf") {
    EmbeddingMode mode = config.feature_mode == "embed_idf"
                             ? EmbeddingMode::IdfReweighted
                             : EmbeddingMode::Plain;
    if (!config.embeddings_path.empty()) {
      // precomputed document rows replace on-the-fly composition
      FileEmbeddingSource source(config.embeddings_path, corpus.size());
      text_features = source.rows();
    } else {
      auto provider = make_provider(config);
      TfIdfModel model;
      const TfIdfModel* model_ptr = nullptr;
      if (mode == EmbeddingMode::IdfReweighted) {
        model = fit_tfidf(docs);
        model_ptr = &model;
      }
      text_features = embed_corpus(*provider, docs, mode, model_ptr);
    }
  } else {
    throw ConfigError("unknown featurize.mode " + config.feature_mode);
  }

  std::vector<std::vector<std::string>> cat_columns(3);
  for (const auto& r : corpus) {
    cat_columns[0].push_back(r.product);
    cat_columns[1].push_back(r.issue);
    cat_columns[2].push_back(r.company);
  }
  const std::string names[] = {"product", "issue", "company"};
  DummyEncoder enc = fit_dummy(cat_columns, names);
  Matrix dummies = dummy_transform(enc, cat_columns);

  std::vector<double> log_dollar(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) log_dollar[i] = corpus[i].log_dollar;

  out.dummy_width = dummies.cols();
  out.text_width = text_features.cols();
  out.features = assemble_features(text_features, dummies, log_dollar);
  return out;
}

std::vector<EmbeddedSequence> build_sequences(const std::vector<ComplaintRecord>& corpus,
                                              const PipelineConfig& config) {
  std::vector<std::vector<std::string>> docs = tokenize_corpus(corpus);
  auto provider = make_provider(config);
  EmbeddingMode mode = config.feature_mode == "embed_idf" ? EmbeddingMode::IdfReweighted
                                                          : EmbeddingMode::Plain;
  TfIdfModel model;
  const TfIdfModel* model_ptr = nullptr;
  if (mode == EmbeddingMode::IdfReweighted) {
    model = fit_tfidf(docs);
    model_ptr = &model;
  }
  std::vector<EmbeddedSequence> seqs(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (docs[i].empty()) throw EmptyDocument();
    EmbeddedSequence seq(docs[i].size());
    for (std::size_t t = 0; t < docs[i].size(); ++t) {
      std::optional<double> idf;
      if (model_ptr) idf = model_ptr->idf_of(docs[i][t]);
      seq[t] = compose_token_embedding(*provider, docs[i][t], t, idf);
    }
    seqs[i] = std::move(seq);
  }
  return seqs;
}

namespace {

Matrix take_rows(const Matrix& x, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto src = x.row(rows[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

template <typename T>
std::vector<T> take(const std::vector<T>& v, std::span<const std::size_t> idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(v[i]);
  return out;
}

std::vector<int> corpus_labels(const std::vector<ComplaintRecord>& corpus) {
  std::vector<int> y(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) y[i] = corpus[i].meritorious ? 1 : 0;
  return y;
}

}  // namespace

MetricReport run_algorithm1(const std::vector<ComplaintRecord>& corpus,
                            const PipelineConfig& config) {
  config.validate();
  std::vector<int> y = corpus_labels(corpus);
  SplitConfig split_cfg{config.split.test_fraction, derive_seed(config.seed, "split")};
  Split split = train_test_split(corpus.size(), split_cfg);
  std::vector<int> y_train = take(y, split.train_idx);
  std::vector<int> y_test = take(y, split.test_idx);

  if (config.classifier == "lstm") {
    std::vector<EmbeddedSequence> seqs = build_sequences(corpus, config);
    std::vector<EmbeddedSequence> train = take(seqs, split.train_idx);
    std::vector<EmbeddedSequence> test = take(seqs, split.test_idx);
    LstmClassifierHyper hyper = config.lstm;
    hyper.seed = derive_seed(config.seed, "lstm");
    LstmClassifier model = train_lstm_classifier(train, y_train, hyper);
    Prediction p = predict(model, test);
    return evaluate_all(y_test, p.labels);
  }

  FeatureBuild built = build_features(corpus, config);
  Standardizer st = fit_standardizer(built.features, split.train_idx);
  standardize(built.features, st);
  Matrix x_train = take_rows(built.features, split.train_idx);
  Matrix x_test = take_rows(built.features, split.test_idx);

  Prediction p;
  if (config.classifier == "lr") {
    LogisticModel model = train_logistic(x_train, y_train, config.logistic);
    p = predict(model, x_test);
  } else {
    ForestHyper hyper = config.forest;
    hyper.seed = derive_seed(config.seed, "forest");
    ForestModel model = train_forest(x_train, y_train, hyper);
    p = predict(model, x_test);
  }
  return evaluate_all(y_test, p.labels);
}

// ---------------------------------------------------------------------------
// model serialization

namespace {

void write_vector(std::ostream& out, std::span<const double> v) {
  char buf[40];
  out << v.size();
  for (double x : v) {
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    out << ' ' << buf;
  }
  out << '\n';
}

std::vector<double> read_vector(std::istream& in) {
  std::size_t n = 0;
  if (!(in >> n)) throw DataError("model file: bad vector length");
  std::vector<double> v(n);
  for (double& x : v)
    if (!(in >> x)) throw DataError("model file: truncated vector");
  return v;
}

}  // namespace

void save_model(std::ostream& out, const TrainedModel& m) {
  out << "MERIT-MODEL 1\n";
  out << "kind " << m.kind << '\n';
  out << "feature_mode " << m.feature_mode << '\n';
  out << "seed " << m.seed << '\n';
  char frac[40];
  std::snprintf(frac, sizeof(frac), "%.17g", m.test_fraction);
  out << "test_fraction " << frac << '\n';
  out << "standardizer_mean ";
  write_vector(out, m.standardizer.mean);
  out << "standardizer_scale ";
  write_vector(out, m.standardizer.scale);
  if (m.kind == "lr") {
    out << "weights ";
    write_vector(out, m.logistic.weights);
  } else if (m.kind == "rf") {
    out << "trees " << m.forest.trees.size() << '\n';
    for (const auto& tree : m.forest.trees) {
      out << "nodes " << tree.nodes.size() << '\n';
      char thr[40];
      for (const auto& nd : tree.nodes) {
        std::snprintf(thr, sizeof(thr), "%.17g", nd.threshold);
        out << nd.feature << ' ' << thr << ' ' << nd.left << ' ' << nd.right << ' '
            << nd.votes[0] << ' ' << nd.votes[1] << '\n';
      }
    }
  } else if (m.kind == "lstm") {
    out << "cell " << m.lstm.cell.input_dim << ' ' << m.lstm.cell.hidden_dim << '\n';
    out << "w ";
    write_vector(out, m.lstm.cell.w);
    out << "b ";
    write_vector(out, m.lstm.cell.b);
    out << "readout ";
    write_vector(out, m.lstm.readout);
    out << "embedding_source " << m.lstm.embedding_source << '\n';
  } else {
    throw ConfigError("save_model: unknown kind " + m.kind);
  }
}

TrainedModel load_model(std::istream& in) {
  std::string magic, version;
  in >> magic >> version;
  if (magic != "MERIT-MODEL" || version != "1")
    throw DataError("model file: bad magic/version");
  TrainedModel m;
  std::string tag;
  in >> tag >> m.kind;
  if (tag != "kind") throw DataError("model file: expected kind");
  in >> tag >> m.feature_mode;
  if (tag != "feature_mode") throw DataError("model file: expected feature_mode");
  in >> tag >> m.seed;
  if (tag != "seed") throw DataError("model file: expected seed");
  in >> tag >> m.test_fraction;
  if (tag != "test_fraction") throw DataError("model file: expected test_fraction");
  in >> tag;
  m.standardizer.mean = read_vector(in);
  in >> tag;
  m.standardizer.scale = read_vector(in);

  if (m.kind == "lr") {
    in >> tag;
    m.logistic.weights = read_vector(in);
  } else if (m.kind == "rf") {
    std::size_t n_trees = 0;
    in >> tag >> n_trees;
    m.forest.trees.resize(n_trees);
    for (auto& tree : m.forest.trees) {
      std::size_t n_nodes = 0;
      in >> tag >> n_nodes;
      tree.nodes.resize(n_nodes);
      for (auto& nd : tree.nodes)
        if (!(in >> nd.feature >> nd.threshold >> nd.left >> nd.right >>
              nd.votes[0] >> nd.votes[1]))
          throw DataError("model file: truncated tree");
    }
  } else if (m.kind == "lstm") {
    in >> tag >> m.lstm.cell.input_dim >> m.lstm.cell.hidden_dim;
    in >> tag;
    m.lstm.cell.w = read_vector(in);
    in >> tag;
    m.lstm.cell.b = read_vector(in);
    in >> tag;
    m.lstm.readout = read_vector(in);
    in >> tag;
    std::getline(in, m.lstm.embedding_source);
    if (!m.lstm.embedding_source.empty() && m.lstm.embedding_source[0] == ' ')
      m.lstm.embedding_source.erase(0, 1);
  } else {
    throw DataError("model file: unknown kind " + m.kind);
  }
  return m;
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_ingest(const PipelineConfig& config) {
  config.validate();
  if (config.input_csv.empty()) throw ConfigError("ingest: input.csv not set");
  std::filesystem::create_directories(config.workdir);

  auto raw = parse_complaints_csv(read_file(config.input_csv));
  FilterStats stats;
  auto records = filter_records(raw, config.filter, &stats);

  std::ostringstream out;
  write_corpus_csv(out, records);
  write_file(config.corpus_path(), out.str());

  std::cout << "ingest: " << raw.size() << " rows in, " << records.size()
            << " kept (dropped: date " << stats.dropped_date << ", label "
            << stats.dropped_label << ", category " << stats.dropped_category
            << ", empty narrative " << stats.dropped_empty_narrative << ", dollar "
            << stats.dropped_dollar << ")\n";
  std::cout << "wrote " << config.corpus_path() << '\n';
  return 0;
}

int cmd_summarize(const PipelineConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.workdir);
  auto records = read_corpus_csv(read_file(config.corpus_path()));

  std::ostringstream out;
  write_csv_row(out, {"date_received", "product", "issue", "company", "narrative",
                      "dollar_value", "log_dollar", "meritorious", "fidelity"});
  char dollars[32], logd[40], fid[32];
  for (const auto& r : records) {
    std::string summary = summarize_extractive(r.narrative, config.summary_max_words);
    double fidelity = summary_fidelity(r.narrative, summary);
    std::snprintf(dollars, sizeof(dollars), "%.2f", r.dollar_value);
    std::snprintf(logd, sizeof(logd), "%.17g", r.log_dollar);
    std::snprintf(fid, sizeof(fid), "%.6f", fidelity);
    write_csv_row(out, {format_date(r.date_received), r.product, r.issue, r.company,
                        summary, dollars, logd, r.meritorious ? "true" : "false", fid});
  }
  std::string path = config.workdir + "/summary.csv";
  write_file(path, out.str());
  std::cout << "summarize: " << records.size() << " documents, max "
            << config.summary_max_words << " words\nwrote " << path << '\n';
  return 0;
}

int cmd_featurize(const PipelineConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.workdir);
  auto records = read_corpus_csv(read_file(config.corpus_path()));
  FeatureBuild built = build_features(records, config);
  if (built.k_clamped)
    std::cerr << "warning: featurize.k clamped to " << built.k_used
              << " (matrix is smaller than the requested rank)\n";
  std::string path = config.workdir + "/features.mat";
  std::ostringstream out;
  save_matrix(out, built.features);
  write_file(path, out.str());
  std::cout << "featurize: " << built.features.rows() << " x "
            << built.features.cols() << " (" << built.dummy_width
            << " dummy + 1 numeric + " << built.text_width << " text)\nwrote "
            << path << '\n';
  return 0;
}

int cmd_train(const PipelineConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.workdir);
  auto records = read_corpus_csv(read_file(config.corpus_path()));
  std::vector<int> y = corpus_labels(records);
  SplitConfig split_cfg{config.split.test_fraction, derive_seed(config.seed, "split")};
  Split split = train_test_split(records.size(), split_cfg);
  std::vector<int> y_train = take(y, split.train_idx);

  TrainedModel m;
  m.kind = config.classifier;
  m.feature_mode = config.feature_mode;
  m.seed = config.seed;
  m.test_fraction = config.split.test_fraction;

  if (config.classifier == "lstm") {
    std::vector<EmbeddedSequence> seqs = build_sequences(records, config);
    LstmClassifierHyper hyper = config.lstm;
    hyper.seed = derive_seed(config.seed, "lstm");
    m.lstm = train_lstm_classifier(take(seqs, split.train_idx), y_train, hyper);
    m.lstm.embedding_source =
        config.embeddings_path.empty()
            ? "hash dim=" + std::to_string(config.embed_dim)
            : "file " + config.embeddings_path;
  } else {
    Matrix features = load_matrix_file(config.workdir + "/features.mat");
    if (features.rows() != records.size())
      throw RowCountMismatch("features.mat rows do not match the corpus");
    m.standardizer = fit_standardizer(features, split.train_idx);
    standardize(features, m.standardizer);
    Matrix x_train = take_rows(features, split.train_idx);
    if (config.classifier == "lr") {
      m.logistic = train_logistic(x_train, y_train, config.logistic);
    } else {
      ForestHyper hyper = config.forest;
      hyper.seed = derive_seed(config.seed, "forest");
      m.forest = train_forest(x_train, y_train, hyper);
    }
  }

  std::ostringstream out;
  save_model(out, m);
  std::string path = config.workdir + "/model.txt";
  write_file(path, out.str());
  std::cout << "train: " << config.classifier << " on " << split.train_idx.size()
            << " rows\nwrote " << path << '\n';
  return 0;
}

int cmd_eval(const PipelineConfig& config) {
  config.validate();
  auto records = read_corpus_csv(read_file(config.corpus_path()));
  std::ifstream model_in(config.workdir + "/model.txt", std::ios::binary);
  if (!model_in) throw DataError("cannot read " + config.workdir + "/model.txt");
  TrainedModel m = load_model(model_in);

  std::vector<int> y = corpus_labels(records);
  SplitConfig split_cfg{m.test_fraction, derive_seed(m.seed, "split")};
  Split split = train_test_split(records.size(), split_cfg);
  std::vector<int> y_test = take(y, split.test_idx);

  Prediction p;
  if (m.kind == "lstm") {
    std::vector<EmbeddedSequence> seqs = build_sequences(records, config);
    p = predict(m.lstm, take(seqs, split.test_idx));
  } else {
    Matrix features = load_matrix_file(config.workdir + "/features.mat");
    if (features.rows() != records.size())
      throw RowCountMismatch("features.mat rows do not match the corpus");
    standardize(features, m.standardizer);
    Matrix x_test = take_rows(features, split.test_idx);
    p = m.kind == "lr" ? predict(m.logistic, x_test) : predict(m.forest, x_test);
  }

  MetricReport report = evaluate_all(y_test, p.labels);
  std::string json = report_to_json(report);
  std::string path = config.workdir + "/report.json";
  write_file(path, json);
  std::cout << json;
  std::cout << "wrote " << path << '\n';
  return 0;
}

namespace {

void write_history_csv(const std::string& path,
                       const std::vector<GanHistoryRow>& history) {
  std::ostringstream out;
  out << "epoch,V,d_accuracy,js_divergence\n";
  char buf[128];
  for (const auto& row : history) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", row.epoch, row.value,
                  row.d_accuracy, row.js_divergence);
    out << buf;
  }
  write_file(path, out.str());
}

}  // namespace

int cmd_generate(const PipelineConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.workdir);
  auto records = read_corpus_csv(read_file(config.corpus_path()));

  std::vector<std::vector<std::string>> merit_docs, non_merit_docs;
  for (const auto& r : records) {
    auto toks = tokenize(r.narrative);
    if (toks.empty()) continue;
    (r.meritorious ? merit_docs : non_merit_docs).push_back(std::move(toks));
  }

  auto provider = make_provider(config);
  GanConfig gan_nm = config.gan;
  gan_nm.seed = derive_seed(config.seed, "gan:non-meritorious");
  GanConfig gan_m = config.gan;
  gan_m.seed = derive_seed(config.seed, "gan:meritorious");

  TrainedGan nm = train_gan(non_merit_docs, *provider, gan_nm);
  TrainedGan me = train_gan(merit_docs, *provider, gan_m);
  write_history_csv(config.workdir + "/gan_history_non_meritorious.csv", nm.history);
  write_history_csv(config.workdir + "/gan_history_meritorious.csv", me.history);

  GanConfig synth_cfg = config.gan;
  synth_cfg.seed = derive_seed(config.seed, "synth");
  auto synthetic = generate_synthetic_corpus(nm, me, *provider, synth_cfg);

  std::ostringstream out;
  write_csv_row(out, {"date_received", "product", "issue", "company", "narrative",
                      "dollar_value", "log_dollar", "meritorious"});
  for (const auto& rec : synthetic) {
    std::string narrative;
    for (const auto& tok : rec.tokens) {
      if (!narrative.empty()) narrative += ' ';
      narrative += tok;
    }
    write_csv_row(out, {"", "synthetic", "synthetic", "synthetic", narrative, "", "",
                        rec.meritorious ? "true" : "false"});
  }
  std::string path = config.workdir + "/synthetic.csv";
  write_file(path, out.str());
  std::cout << "generate: " << synthetic.size() << " synthetic narratives ("
            << config.gan.samples_per_label << " per label)\nwrote " << path << '\n';
  return 0;
}

std::string comparison_table(const MetricReport& a, const MetricReport& b) {
  struct Row {
    const char* name;
    double real;
    double synth;
  };
  const Row rows[] = {{"accuracy", a.accuracy, b.accuracy},
                      {"f1", a.f1, b.f1},
                      {"mcc", a.mcc, b.mcc},
                      {"kappa", a.kappa, b.kappa}};
  std::ostringstream out;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-10s %10s %10s %10s\n", "metric", "real",
                "synthetic", "delta(pp)");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%-10s %10.2f %10.2f %+10.2f\n", r.name,
                  100.0 * r.real, 100.0 * r.synth, 100.0 * (r.synth - r.real));
    out << buf;
  }
  return out.str();
}

int cmd_compare(const std::string& report_a, const std::string& report_b,
                std::ostream& out) {
  MetricReport a = report_from_json(read_file(report_a));
  MetricReport b = report_from_json(read_file(report_b));
  out << comparison_table(a, b);
  return 0;
}

}  // namespace merit
