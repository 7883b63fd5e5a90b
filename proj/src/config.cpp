#include "merit/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "merit/errors.hpp"

namespace merit {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " expects an integer, got \"" + v + "\"");
  }
}

double to_real(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " expects a number, got \"" + v + "\"");
  }
}

Date to_date(const std::string& key, const std::string& v) {
  auto d = parse_date(v);
  if (!d) throw ConfigError("config: " + key + " expects a date, got \"" + v + "\"");
  return *d;
}

std::string join_responses(const std::set<std::string>& responses) {
  std::string out;
  for (const auto& r : responses) {
    if (!out.empty()) out += '|';
    out += r;
  }
  return out;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

void PipelineConfig::validate() const {
  filter.validate();
  if (feature_mode != "tfidf" && feature_mode != "truncated_tfidf" &&
      feature_mode != "embed_plain" && feature_mode != "embed_idf")
    throw ConfigError("config: unknown featurize.mode \"" + feature_mode + "\"");
  if (classifier != "lr" && classifier != "rf" && classifier != "lstm")
    throw ConfigError("config: unknown classifier \"" + classifier + "\"");
  if (bag_mode() && classifier == "lstm")
    throw FeatureModelMismatch(
        "featurize.mode " + feature_mode +
        " is incompatible with the lstm classifier: bag-of-words vectors"
        " carry no token order for the recurrence");
  if (!(split.test_fraction > 0.0 && split.test_fraction < 1.0))
    throw ConfigError("config: split.test_fraction must be in (0,1)");
  if (svd_k < 1) throw ConfigError("config: featurize.k must be >= 1");
  if (embed_dim < 1) throw ConfigError("config: featurize.dim must be >= 1");
  if (summary_max_words < 1) throw ConfigError("config: summary.max_words must be >= 1");
  if (tf_cap && *tf_cap < 1) throw ConfigError("config: featurize.tf_cap must be >= 1");
  gan.validate();
}

PipelineConfig parse_config_text(const std::string& text) {
  PipelineConfig c;
  std::map<std::string, std::function<void(const std::string&, const std::string&)>>
      setters = {
          {"input.csv", [&](const std::string&, const std::string& v) { c.input_csv = v; }},
          {"workdir", [&](const std::string&, const std::string& v) { c.workdir = v; }},
          {"corpus.file", [&](const std::string&, const std::string& v) { c.corpus_file = v; }},
          {"seed",
           [&](const std::string& k, const std::string& v) {
             c.seed = static_cast<std::uint64_t>(to_int(k, v));
           }},
          {"filter.date_min",
           [&](const std::string& k, const std::string& v) { c.filter.date_min = to_date(k, v); }},
          {"filter.date_max",
           [&](const std::string& k, const std::string& v) { c.filter.date_max = to_date(k, v); }},
          {"filter.allowed_responses",
           [&](const std::string&, const std::string& v) {
             c.filter.allowed_responses.clear();
             std::stringstream ss(v);
             std::string item;
             while (std::getline(ss, item, '|')) {
               item = trim(item);
               if (!item.empty()) c.filter.allowed_responses.insert(item);
             }
           }},
          {"filter.min_category_frequency",
           [&](const std::string& k, const std::string& v) {
             c.filter.min_category_frequency = static_cast<int>(to_int(k, v));
           }},
          {"filter.dollar_min",
           [&](const std::string& k, const std::string& v) { c.filter.dollar_min = to_real(k, v); }},
          {"filter.dollar_max",
           [&](const std::string& k, const std::string& v) { c.filter.dollar_max = to_real(k, v); }},
          {"filter.min_narrative_words",
           [&](const std::string& k, const std::string& v) {
             c.filter.min_narrative_words = static_cast<int>(to_int(k, v));
           }},
          {"summary.max_words",
           [&](const std::string& k, const std::string& v) {
             c.summary_max_words = static_cast<std::size_t>(to_int(k, v));
           }},
          {"featurize.mode",
           [&](const std::string&, const std::string& v) { c.feature_mode = v; }},
          {"featurize.k",
           [&](const std::string& k, const std::string& v) {
             c.svd_k = static_cast<std::size_t>(to_int(k, v));
           }},
          {"featurize.tf_cap",
           [&](const std::string& k, const std::string& v) {
             if (v.empty())
               c.tf_cap.reset();
             else
               c.tf_cap = to_int(k, v);
           }},
          {"featurize.dim",
           [&](const std::string& k, const std::string& v) {
             c.embed_dim = static_cast<std::size_t>(to_int(k, v));
           }},
          {"featurize.embeddings",
           [&](const std::string&, const std::string& v) { c.embeddings_path = v; }},
          {"classifier",
           [&](const std::string&, const std::string& v) { c.classifier = v; }},
          {"split.test_fraction",
           [&](const std::string& k, const std::string& v) {
             c.split.test_fraction = to_real(k, v);
           }},
          {"lr.learning_rate",
           [&](const std::string& k, const std::string& v) {
             c.logistic.learning_rate = to_real(k, v);
           }},
          {"lr.epochs",
           [&](const std::string& k, const std::string& v) {
             c.logistic.epochs = static_cast<std::size_t>(to_int(k, v));
           }},
          {"lr.l2",
           [&](const std::string& k, const std::string& v) { c.logistic.l2 = to_real(k, v); }},
          {"rf.n_trees",
           [&](const std::string& k, const std::string& v) {
             c.forest.n_trees = static_cast<std::size_t>(to_int(k, v));
           }},
          {"rf.max_depth",
           [&](const std::string& k, const std::string& v) {
             c.forest.max_depth = static_cast<std::size_t>(to_int(k, v));
           }},
          {"rf.min_leaf",
           [&](const std::string& k, const std::string& v) {
             c.forest.min_leaf = static_cast<std::size_t>(to_int(k, v));
           }},
          {"lstm.hidden_dim",
           [&](const std::string& k, const std::string& v) {
             c.lstm.hidden_dim = static_cast<std::size_t>(to_int(k, v));
           }},
          {"lstm.learning_rate",
           [&](const std::string& k, const std::string& v) {
             c.lstm.learning_rate = to_real(k, v);
           }},
          {"lstm.epochs",
           [&](const std::string& k, const std::string& v) {
             c.lstm.epochs = static_cast<std::size_t>(to_int(k, v));
           }},
          {"lstm.batch_size",
           [&](const std::string& k, const std::string& v) {
             c.lstm.batch_size = static_cast<std::size_t>(to_int(k, v));
           }},
          {"gan.max_len",
           [&](const std::string& k, const std::string& v) {
             c.gan.max_len = static_cast<std::size_t>(to_int(k, v));
           }},
          {"gan.noise_sigma",
           [&](const std::string& k, const std::string& v) { c.gan.noise_sigma = to_real(k, v); }},
          {"gan.d_steps",
           [&](const std::string& k, const std::string& v) {
             c.gan.d_steps = static_cast<std::size_t>(to_int(k, v));
           }},
          {"gan.lr_d",
           [&](const std::string& k, const std::string& v) { c.gan.lr_d = to_real(k, v); }},
          {"gan.lr_g",
           [&](const std::string& k, const std::string& v) { c.gan.lr_g = to_real(k, v); }},
          {"gan.epochs",
           [&](const std::string& k, const std::string& v) {
             c.gan.epochs = static_cast<std::size_t>(to_int(k, v));
           }},
          {"gan.samples_per_label",
           [&](const std::string& k, const std::string& v) {
             c.gan.samples_per_label = static_cast<std::size_t>(to_int(k, v));
           }},
          {"gan.hidden_dim",
           [&](const std::string& k, const std::string& v) {
             c.gan.hidden_dim = static_cast<std::size_t>(to_int(k, v));
           }},
          {"gan.batch_size",
           [&](const std::string& k, const std::string& v) {
             c.gan.batch_size = static_cast<std::size_t>(to_int(k, v));
           }},
      };

  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end())
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": unknown key \"" + key + "\"");
    it->second(key, value);
  }
  return c;
}

PipelineConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string dump_config(const PipelineConfig& c) {
  std::ostringstream out;
  out << "input.csv = " << c.input_csv << '\n';
  out << "workdir = " << c.workdir << '\n';
  out << "corpus.file = " << c.corpus_file << '\n';
  out << "seed = " << c.seed << '\n';
  out << "filter.date_min = " << format_date(c.filter.date_min) << '\n';
  out << "filter.date_max = " << format_date(c.filter.date_max) << '\n';
  out << "filter.allowed_responses = " << join_responses(c.filter.allowed_responses)
      << '\n';
  out << "filter.min_category_frequency = " << c.filter.min_category_frequency << '\n';
  out << "filter.dollar_min = " << format_real(c.filter.dollar_min) << '\n';
  out << "filter.dollar_max = " << format_real(c.filter.dollar_max) << '\n';
  out << "filter.min_narrative_words = " << c.filter.min_narrative_words << '\n';
  out << "summary.max_words = " << c.summary_max_words << '\n';
  out << "featurize.mode = " << c.feature_mode << '\n';
  out << "featurize.k = " << c.svd_k << '\n';
  out << "featurize.tf_cap = " << (c.tf_cap ? std::to_string(*c.tf_cap) : "") << '\n';
  out << "featurize.dim = " << c.embed_dim << '\n';
  out << "featurize.embeddings = " << c.embeddings_path << '\n';
  out << "classifier = " << c.classifier << '\n';
  out << "split.test_fraction = " << format_real(c.split.test_fraction) << '\n';
  out << "lr.learning_rate = " << format_real(c.logistic.learning_rate) << '\n';
  out << "lr.epochs = " << c.logistic.epochs << '\n';
  out << "lr.l2 = " << format_real(c.logistic.l2) << '\n';
  out << "rf.n_trees = " << c.forest.n_trees << '\n';
  out << "rf.max_depth = " << c.forest.max_depth << '\n';
  out << "rf.min_leaf = " << c.forest.min_leaf << '\n';
  out << "lstm.hidden_dim = " << c.lstm.hidden_dim << '\n';
  out << "lstm.learning_rate = " << format_real(c.lstm.learning_rate) << '\n';
  out << "lstm.epochs = " << c.lstm.epochs << '\n';
  out << "lstm.batch_size = " << c.lstm.batch_size << '\n';
  out << "gan.max_len = " << c.gan.max_len << '\n';
  out << "gan.noise_sigma = " << format_real(c.gan.noise_sigma) << '\n';
  out << "gan.d_steps = " << c.gan.d_steps << '\n';
  out << "gan.lr_d = " << format_real(c.gan.lr_d) << '\n';
  out << "gan.lr_g = " << format_real(c.gan.lr_g) << '\n';
  out << "gan.epochs = " << c.gan.epochs << '\n';
  out << "gan.samples_per_label = " << c.gan.samples_per_label << '\n';
  out << "gan.hidden_dim = " << c.gan.hidden_dim << '\n';
  out << "gan.batch_size = " << c.gan.batch_size << '\n';
  return out.str();
}

}  // namespace merit
