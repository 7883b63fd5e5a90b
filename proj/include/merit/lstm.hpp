#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "merit/classify.hpp"
#include "merit/linalg.hpp"

namespace merit {

/// Standard LSTM cell. Gate weights are stacked row blocks [i; f; o; g] of
/// shape 4H x (D+H) over the concatenated [x; h_prev]; biases likewise 4H.
struct LstmParams {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  std::vector<double> w;  // row-major 4H x (D+H)
  std::vector<double> b;  // 4H

  static LstmParams zeros(std::size_t input_dim, std::size_t hidden_dim);
  static LstmParams random(std::size_t input_dim, std::size_t hidden_dim,
                           std::uint64_t seed, double scale = 0.2);
  std::size_t param_count() const { return w.size() + b.size(); }
  bool all_finite() const;
};

struct LstmState {
  std::vector<double> h;
  std::vector<double> c;
  explicit LstmState(std::size_t hidden_dim)
      : h(hidden_dim, 0.0), c(hidden_dim, 0.0) {}
};

/// i,f,o = sigmoid gates, g = tanh candidate; c' = f.c + i.g, h' = o.tanh(c').
void lstm_step(const LstmParams& p, std::span<const double> x, LstmState& state);

// Per-step activations retained for backprop.
struct LstmStepCache {
  std::vector<double> xh;  // [x; h_prev]
  std::vector<double> i, f, o, g;
  std::vector<double> c_prev, c, tanh_c;
};

void lstm_step_cached(const LstmParams& p, std::span<const double> x, LstmState& state,
                      LstmStepCache& cache);

/// Accumulates parameter gradients for one step given dh/dc flowing in from
/// above; returns gradients w.r.t. h_prev/c_prev in dh/dc and w.r.t. the
/// input in dx (when non-null).
void lstm_step_backward(const LstmParams& p, const LstmStepCache& cache,
                        std::vector<double>& dh, std::vector<double>& dc,
                        std::span<double> dw, std::span<double> db,
                        std::span<double> dx);

struct LstmClassifierHyper {
  std::size_t hidden_dim = 768;
  double learning_rate = 0.1;
  std::size_t epochs = 10;
  std::size_t batch_size = 16;
  double clip_norm = 5.0;
  std::uint64_t seed = 0;
};

/// Sigmoid readout on the final hidden state, trained with mini-batch
/// gradient descent under global-norm clipping.
struct LstmClassifier {
  LstmParams cell;
  std::vector<double> readout;  // H weights + bias
  LstmClassifierHyper hyper;
  std::string embedding_source;  // descriptive, recorded in the model file
};

using EmbeddedSequence = std::vector<std::vector<double>>;

LstmClassifier train_lstm_classifier(std::span<const EmbeddedSequence> sequences,
                                     std::span<const int> labels,
                                     const LstmClassifierHyper& hyper,
                                     std::vector<double>* loss_history = nullptr);

double lstm_classifier_score(const LstmClassifier& model, const EmbeddedSequence& seq);

Prediction predict(const LstmClassifier& model,
                   std::span<const EmbeddedSequence> sequences);

/// Bag-of-words feature matrices carry no token order, which the recurrence
/// requires; reject them outright.
Prediction predict(const LstmClassifier& model, const Matrix& features);

/// Loss and flat gradient [cell.w | cell.b | readout] of the cross-entropy
/// of one sequence; exposed for finite-difference checks.
double lstm_classifier_loss_grad(const LstmParams& cell, std::span<const double> readout,
                                 const EmbeddedSequence& seq, int label,
                                 std::span<double> grad);

}  // namespace merit
