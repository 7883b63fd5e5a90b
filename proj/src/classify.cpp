#include "merit/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "merit/errors.hpp"
#include "merit/rng.hpp"

namespace merit {

Split train_test_split(std::size_t n, const SplitConfig& config) {
  if (n < 2) throw DegenerateSplit("need at least 2 examples");
  if (!(config.test_fraction > 0.0 && config.test_fraction < 1.0))
    throw ConfigError("test fraction must be in (0,1)");
  std::size_t n_test = static_cast<std::size_t>(
      std::llround(config.test_fraction * static_cast<double>(n)));
  if (n_test == 0 || n_test == n)
    throw DegenerateSplit("split sizes " + std::to_string(n - n_test) + "/" +
                          std::to_string(n_test));
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(config.seed);
  rng.shuffle(perm);
  Split s;
  s.test_idx.assign(perm.begin(), perm.begin() + n_test);
  s.train_idx.assign(perm.begin() + n_test, perm.end());
  std::sort(s.test_idx.begin(), s.test_idx.end());
  std::sort(s.train_idx.begin(), s.train_idx.end());
  return s;
}

namespace {

void check_binary_two_class(std::span<const int> y) {
  bool has0 = false, has1 = false;
  for (int v : y) {
    if (v == 0)
      has0 = true;
    else if (v == 1)
      has1 = true;
    else
      throw NonBinaryLabels();
  }
  if (!has0 || !has1) throw SingleClassTraining();
}

double score_with(std::span<const double> weights, std::span<const double> row) {
  double z = weights[weights.size() - 1];  // bias
  for (std::size_t j = 0; j + 1 < weights.size(); ++j) z += weights[j] * row[j];
  return sigmoid(z);
}

}  // namespace

double logistic_loss(std::span<const double> weights, const Matrix& x,
                     std::span<const int> y, double l2) {
  const double n = static_cast<double>(x.rows());
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double z = weights[weights.size() - 1];
    const double* row = x.row(i).data();
    for (std::size_t j = 0; j < x.cols(); ++j) z += weights[j] * row[j];
    // log(1+exp(-z)) and friends, overflow-safe
    double log1pexp = z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
    loss += y[i] == 1 ? log1pexp : z + log1pexp;
  }
  loss /= n;
  double reg = 0.0;
  for (std::size_t j = 0; j + 1 < weights.size(); ++j) reg += weights[j] * weights[j];
  return loss + 0.5 * l2 * reg;
}

std::vector<double> logistic_gradient(std::span<const double> weights, const Matrix& x,
                                      std::span<const int> y, double l2) {
  const double inv_n = 1.0 / static_cast<double>(x.rows());
  std::vector<double> grad(weights.size(), 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double* row = x.row(i).data();
    double err = score_with(weights, x.row(i)) - static_cast<double>(y[i]);
    for (std::size_t j = 0; j < x.cols(); ++j) grad[j] += err * row[j];
    grad[weights.size() - 1] += err;
  }
  for (double& g : grad) g *= inv_n;
  for (std::size_t j = 0; j + 1 < weights.size(); ++j) grad[j] += l2 * weights[j];
  return grad;
}

LogisticModel train_logistic(const Matrix& x, std::span<const int> y,
                             const LogisticHyper& hyper,
                             std::vector<double>* loss_history) {
  if (x.rows() != y.size()) throw LengthMismatch("train_logistic rows vs labels");
  check_binary_two_class(y);
  if (!x.all_finite()) throw NonFiniteInput();

  LogisticModel model;
  model.hyper = hyper;
  model.weights.assign(x.cols() + 1, 0.0);

  double loss = logistic_loss(model.weights, x, y, hyper.l2);
  double step = hyper.learning_rate;
  if (loss_history) loss_history->push_back(loss);
  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::vector<double> grad = logistic_gradient(model.weights, x, y, hyper.l2);
    std::vector<double> trial(model.weights.size());
    double trial_loss = loss;
    // backtrack until the step does not increase the loss
    while (true) {
      for (std::size_t j = 0; j < trial.size(); ++j)
        trial[j] = model.weights[j] - step * grad[j];
      trial_loss = logistic_loss(trial, x, y, hyper.l2);
      if (trial_loss <= loss + 1e-12 || step < 1e-14) break;
      step *= 0.5;
    }
    if (step < 1e-14) break;  // converged as far as the line search allows
    model.weights = trial;
    loss = trial_loss;
    if (loss_history) loss_history->push_back(loss);
    step = std::min(step * 1.25, hyper.learning_rate);
  }
  return model;
}

double logistic_score(const LogisticModel& model, std::span<const double> row) {
  return score_with(model.weights, row);
}

int Tree::classify(std::span<const double> row) const {
  int node = 0;
  while (nodes[node].feature >= 0) {
    const TreeNode& nd = nodes[node];
    node = row[static_cast<std::size_t>(nd.feature)] < nd.threshold ? nd.left
                                                                    : nd.right;
  }
  const TreeNode& leaf = nodes[node];
  return leaf.votes[1] > leaf.votes[0] ? 1 : 0;  // tie -> class 0
}

namespace {

struct TreeBuilder {
  const Matrix& x;
  std::span<const int> y;
  const ForestHyper& hyper;
  Rng& rng;
  Tree tree;
  std::size_t n_split_features;

  int build(std::vector<std::size_t>& samples, std::size_t depth) {
    long long counts[2] = {0, 0};
    for (std::size_t s : samples) ++counts[y[s]];

    int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({});
    tree.nodes[node_id].votes[0] = counts[0];
    tree.nodes[node_id].votes[1] = counts[1];

    if (depth >= hyper.max_depth || counts[0] == 0 || counts[1] == 0 ||
        samples.size() < 2 * hyper.min_leaf)
      return node_id;

    // sample sqrt(d) candidate features without replacement
    std::vector<std::size_t> features(x.cols());
    std::iota(features.begin(), features.end(), 0);
    rng.shuffle(features);
    features.resize(std::min<std::size_t>(n_split_features, features.size()));

    double best_gini = std::numeric_limits<double>::infinity();
    int best_feature = -1;
    double best_threshold = 0.0;

    const double total = static_cast<double>(samples.size());
    std::vector<std::pair<double, int>> vals(samples.size());
    for (std::size_t f : features) {
      for (std::size_t i = 0; i < samples.size(); ++i)
        vals[i] = {x(samples[i], f), y[samples[i]]};
      std::sort(vals.begin(), vals.end());
      long long left[2] = {0, 0};
      for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
        ++left[vals[i].second];
        if (vals[i].first == vals[i + 1].first) continue;
        std::size_t nl = i + 1, nr = vals.size() - nl;
        if (nl < hyper.min_leaf || nr < hyper.min_leaf) continue;
        double l0 = static_cast<double>(left[0]), l1 = static_cast<double>(left[1]);
        double r0 = static_cast<double>(counts[0]) - l0;
        double r1 = static_cast<double>(counts[1]) - l1;
        double dl = static_cast<double>(nl), dr = static_cast<double>(nr);
        double gini_l = 1.0 - (l0 * l0 + l1 * l1) / (dl * dl);
        double gini_r = 1.0 - (r0 * r0 + r1 * r1) / (dr * dr);
        double weighted = (dl * gini_l + dr * gini_r) / total;
        if (weighted < best_gini - 1e-15) {
          best_gini = weighted;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (vals[i].first + vals[i + 1].first);
        }
      }
    }

    if (best_feature < 0) return node_id;

    // only keep the split if it actually purifies
    double g0 = static_cast<double>(counts[0]), g1 = static_cast<double>(counts[1]);
    double parent_gini = 1.0 - (g0 * g0 + g1 * g1) / (total * total);
    if (best_gini >= parent_gini - 1e-15) return node_id;

    std::vector<std::size_t> left_samples, right_samples;
    for (std::size_t s : samples)
      (x(s, static_cast<std::size_t>(best_feature)) < best_threshold ? left_samples
                                                                     : right_samples)
          .push_back(s);

    tree.nodes[node_id].feature = best_feature;
    tree.nodes[node_id].threshold = best_threshold;
    int l = build(left_samples, depth + 1);
    int r = build(right_samples, depth + 1);
    tree.nodes[node_id].left = l;
    tree.nodes[node_id].right = r;
    return node_id;
  }
};

}  // namespace

ForestModel train_forest(const Matrix& x, std::span<const int> y,
                         const ForestHyper& hyper) {
  if (x.rows() != y.size()) throw LengthMismatch("train_forest rows vs labels");
  check_binary_two_class(y);
  if (hyper.n_trees == 0) throw ConfigError("forest: n_trees must be positive");

  ForestModel model;
  model.hyper = hyper;
  std::size_t n_split_features = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::sqrt(static_cast<double>(x.cols()))));

  for (std::size_t t = 0; t < hyper.n_trees; ++t) {
    // independent per-tree stream so trees could be fit in parallel
    Rng rng(derive_seed(hyper.seed, "tree:" + std::to_string(t)));
    std::vector<std::size_t> bootstrap(x.rows());
    for (auto& s : bootstrap) s = rng.uniform_index(x.rows());
    TreeBuilder builder{x, y, hyper, rng, {}, n_split_features};
    builder.build(bootstrap, 0);
    model.trees.push_back(std::move(builder.tree));
  }
  return model;
}

Prediction predict(const LogisticModel& model, const Matrix& x) {
  if (x.cols() + 1 != model.weights.size())
    throw DimensionMismatch("logistic predict: feature width");
  Prediction p;
  p.labels.resize(x.rows());
  p.scores.resize(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    p.scores[i] = logistic_score(model, x.row(i));
    p.labels[i] = p.scores[i] >= 0.5 ? 1 : 0;
  }
  return p;
}

Prediction predict(const ForestModel& model, const Matrix& x) {
  Prediction p;
  p.labels.resize(x.rows());
  p.scores.resize(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    std::size_t ones = 0;
    for (const auto& tree : model.trees) ones += tree.classify(x.row(i)) == 1;
    p.scores[i] = static_cast<double>(ones) / static_cast<double>(model.trees.size());
    p.labels[i] = 2 * ones > model.trees.size() ? 1 : 0;  // tie -> class 0
  }
  return p;
}

}  // namespace merit
