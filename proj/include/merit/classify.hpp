#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "merit/linalg.hpp"

namespace merit {

struct SplitConfig {
  double test_fraction = 0.2;  // r in (0,1)
  std::uint64_t seed = 0;
};

struct Split {
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> test_idx;
};

/// Seeded permutation split; |test| = round(r*n). Throws DegenerateSplit
/// when either side would be empty.
Split train_test_split(std::size_t n, const SplitConfig& config);

struct LogisticHyper {
  double learning_rate = 1.0;
  std::size_t epochs = 300;
  double l2 = 1e-4;
};

struct LogisticModel {
  std::vector<double> weights;  // feature weights, bias last
  LogisticHyper hyper;
};

/// L2-regularized negative log-likelihood, full-batch gradient descent with
/// backtracking so the loss never increases. The bias is not regularized.
LogisticModel train_logistic(const Matrix& x, std::span<const int> y,
                             const LogisticHyper& hyper,
                             std::vector<double>* loss_history = nullptr);

double logistic_score(const LogisticModel& model, std::span<const double> row);

// loss/gradient at an arbitrary weight vector, exposed for gradient checks
double logistic_loss(std::span<const double> weights, const Matrix& x,
                     std::span<const int> y, double l2);
std::vector<double> logistic_gradient(std::span<const double> weights, const Matrix& x,
                                      std::span<const int> y, double l2);

struct ForestHyper {
  std::size_t n_trees = 100;
  std::size_t max_depth = 12;
  std::size_t min_leaf = 2;
  std::uint64_t seed = 0;
};

struct TreeNode {
  int feature = -1;       // -1 for leaves
  double threshold = 0.0;  // goes left when x[feature] < threshold
  int left = -1;
  int right = -1;
  long long votes[2] = {0, 0};
};

struct Tree {
  std::vector<TreeNode> nodes;  // node 0 is the root
  int classify(std::span<const double> row) const;
};

struct ForestModel {
  std::vector<Tree> trees;
  ForestHyper hyper;
};

/// Bootstrap-bagged CART, Gini criterion, sqrt(d) feature subsampling per
/// split. Ties in the vote go to class 0.
ForestModel train_forest(const Matrix& x, std::span<const int> y,
                         const ForestHyper& hyper);

struct Prediction {
  std::vector<int> labels;
  std::vector<double> scores;
};

Prediction predict(const LogisticModel& model, const Matrix& x);
Prediction predict(const ForestModel& model, const Matrix& x);

}  // namespace merit
