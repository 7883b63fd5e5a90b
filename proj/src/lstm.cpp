#include "merit/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "merit/errors.hpp"
#include "merit/rng.hpp"

namespace merit {

LstmParams LstmParams::zeros(std::size_t input_dim, std::size_t hidden_dim) {
  LstmParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  p.w.assign(4 * hidden_dim * (input_dim + hidden_dim), 0.0);
  p.b.assign(4 * hidden_dim, 0.0);
  return p;
}

LstmParams LstmParams::random(std::size_t input_dim, std::size_t hidden_dim,
                              std::uint64_t seed, double scale) {
  LstmParams p = zeros(input_dim, hidden_dim);
  Rng rng(seed);
  double s = scale / std::sqrt(static_cast<double>(input_dim + hidden_dim));
  for (double& w : p.w) w = s * rng.gaussian();
  return p;
}

bool LstmParams::all_finite() const {
  for (double v : w)
    if (!std::isfinite(v)) return false;
  for (double v : b)
    if (!std::isfinite(v)) return false;
  return true;
}

namespace {

// gate pre-activations a = W [x;h] + b, blocks ordered i,f,o,g
void gate_preactivations(const LstmParams& p, std::span<const double> xh,
                         std::vector<double>& a) {
  const std::size_t cols = p.input_dim + p.hidden_dim;
  a.assign(4 * p.hidden_dim, 0.0);
  for (std::size_t r = 0; r < 4 * p.hidden_dim; ++r) {
    const double* wrow = p.w.data() + r * cols;
    double s = p.b[r];
    for (std::size_t c = 0; c < cols; ++c) s += wrow[c] * xh[c];
    a[r] = s;
  }
}

}  // namespace

void lstm_step(const LstmParams& p, std::span<const double> x, LstmState& state) {
  LstmStepCache cache;
  lstm_step_cached(p, x, state, cache);
}

void lstm_step_cached(const LstmParams& p, std::span<const double> x, LstmState& state,
                      LstmStepCache& cache) {
  const std::size_t h = p.hidden_dim;
  if (x.size() != p.input_dim || state.h.size() != h)
    throw DimensionMismatch("lstm_step: input " + std::to_string(x.size()) +
                            " hidden " + std::to_string(state.h.size()));
  cache.xh.resize(p.input_dim + h);
  std::copy(x.begin(), x.end(), cache.xh.begin());
  std::copy(state.h.begin(), state.h.end(), cache.xh.begin() + p.input_dim);
  cache.c_prev = state.c;

  std::vector<double> a;
  gate_preactivations(p, cache.xh, a);
  cache.i.resize(h);
  cache.f.resize(h);
  cache.o.resize(h);
  cache.g.resize(h);
  cache.c.resize(h);
  cache.tanh_c.resize(h);
  for (std::size_t k = 0; k < h; ++k) {
    cache.i[k] = sigmoid(a[k]);
    cache.f[k] = sigmoid(a[h + k]);
    cache.o[k] = sigmoid(a[2 * h + k]);
    cache.g[k] = std::tanh(a[3 * h + k]);
    cache.c[k] = cache.f[k] * cache.c_prev[k] + cache.i[k] * cache.g[k];
    cache.tanh_c[k] = std::tanh(cache.c[k]);
    state.c[k] = cache.c[k];
    state.h[k] = cache.o[k] * cache.tanh_c[k];
  }
}

void lstm_step_backward(const LstmParams& p, const LstmStepCache& cache,
                        std::vector<double>& dh, std::vector<double>& dc,
                        std::span<double> dw, std::span<double> db,
                        std::span<double> dx) {
  const std::size_t h = p.hidden_dim;
  const std::size_t cols = p.input_dim + h;
  std::vector<double> da(4 * h);
  for (std::size_t k = 0; k < h; ++k) {
    double do_ = dh[k] * cache.tanh_c[k];
    double dct = dc[k] + dh[k] * cache.o[k] * (1.0 - cache.tanh_c[k] * cache.tanh_c[k]);
    double di = dct * cache.g[k];
    double df = dct * cache.c_prev[k];
    double dg = dct * cache.i[k];
    dc[k] = dct * cache.f[k];  // flows to c_prev
    da[k] = di * cache.i[k] * (1.0 - cache.i[k]);
    da[h + k] = df * cache.f[k] * (1.0 - cache.f[k]);
    da[2 * h + k] = do_ * cache.o[k] * (1.0 - cache.o[k]);
    da[3 * h + k] = dg * (1.0 - cache.g[k] * cache.g[k]);
  }
  std::vector<double> dxh(cols, 0.0);
  for (std::size_t r = 0; r < 4 * h; ++r) {
    const double* wrow = p.w.data() + r * cols;
    double* dwrow = dw.data() + r * cols;
    double dar = da[r];
    db[r] += dar;
    for (std::size_t c = 0; c < cols; ++c) {
      dwrow[c] += dar * cache.xh[c];
      dxh[c] += dar * wrow[c];
    }
  }
  for (std::size_t k = 0; k < h; ++k) dh[k] = dxh[p.input_dim + k];
  if (!dx.empty())
    for (std::size_t k = 0; k < p.input_dim; ++k) dx[k] += dxh[k];
}

double lstm_classifier_loss_grad(const LstmParams& cell, std::span<const double> readout,
                                 const EmbeddedSequence& seq, int label,
                                 std::span<double> grad) {
  if (seq.empty()) throw EmptySequence();
  const std::size_t h = cell.hidden_dim;
  LstmState state(h);
  std::vector<LstmStepCache> caches(seq.size());
  for (std::size_t t = 0; t < seq.size(); ++t)
    lstm_step_cached(cell, seq[t], state, caches[t]);

  double z = readout[h];
  for (std::size_t k = 0; k < h; ++k) z += readout[k] * state.h[k];
  double prob = sigmoid(z);
  double y = static_cast<double>(label);
  double log1pexp = z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
  double loss = label == 1 ? log1pexp : z + log1pexp;

  std::fill(grad.begin(), grad.end(), 0.0);
  std::span<double> dw = grad.subspan(0, cell.w.size());
  std::span<double> db = grad.subspan(cell.w.size(), cell.b.size());
  std::span<double> dreadout = grad.subspan(cell.w.size() + cell.b.size());

  double dz = prob - y;
  std::vector<double> dh(h), dc(h, 0.0);
  for (std::size_t k = 0; k < h; ++k) {
    dh[k] = dz * readout[k];
    dreadout[k] = dz * state.h[k];
  }
  dreadout[h] = dz;
  for (std::size_t t = seq.size(); t-- > 0;)
    lstm_step_backward(cell, caches[t], dh, dc, dw, db, {});
  return loss;
}

LstmClassifier train_lstm_classifier(std::span<const EmbeddedSequence> sequences,
                                     std::span<const int> labels,
                                     const LstmClassifierHyper& hyper,
                                     std::vector<double>* loss_history) {
  if (sequences.size() != labels.size())
    throw LengthMismatch("train_lstm_classifier sequences vs labels");
  bool has0 = false, has1 = false;
  for (int v : labels) {
    if (v == 0)
      has0 = true;
    else if (v == 1)
      has1 = true;
    else
      throw NonBinaryLabels();
  }
  if (!has0 || !has1) throw SingleClassTraining();
  for (const auto& seq : sequences)
    if (seq.empty()) throw EmptySequence();
  const std::size_t input_dim = sequences[0][0].size();

  LstmClassifier model;
  model.hyper = hyper;
  model.cell = LstmParams::random(input_dim, hyper.hidden_dim,
                                  derive_seed(hyper.seed, "lstm-cell"));
  model.readout.assign(hyper.hidden_dim + 1, 0.0);

  const std::size_t n_params = model.cell.param_count() + model.readout.size();
  std::vector<double> grad(n_params), batch_grad(n_params);

  std::vector<std::size_t> order(sequences.size());
  std::iota(order.begin(), order.end(), 0);
  Rng shuffle_rng(derive_seed(hyper.seed, "lstm-shuffle"));

  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += hyper.batch_size) {
      std::size_t end = std::min(order.size(), start + hyper.batch_size);
      std::fill(batch_grad.begin(), batch_grad.end(), 0.0);
      for (std::size_t bi = start; bi < end; ++bi) {
        std::size_t idx = order[bi];
        epoch_loss += lstm_classifier_loss_grad(model.cell, model.readout,
                                                sequences[idx], labels[idx], grad);
        for (std::size_t j = 0; j < n_params; ++j) batch_grad[j] += grad[j];
      }
      double inv = 1.0 / static_cast<double>(end - start);
      for (double& g : batch_grad) g *= inv;
      double gnorm = norm2(batch_grad);
      double scale = hyper.learning_rate;
      if (gnorm > hyper.clip_norm) scale *= hyper.clip_norm / gnorm;
      std::size_t off = 0;
      for (double& w : model.cell.w) w -= scale * batch_grad[off++];
      for (double& b : model.cell.b) b -= scale * batch_grad[off++];
      for (double& r : model.readout) r -= scale * batch_grad[off++];
    }
    epoch_loss /= static_cast<double>(sequences.size());
    if (!std::isfinite(epoch_loss) || !model.cell.all_finite())
      throw NonFiniteLoss("lstm classifier loss diverged at epoch " +
                          std::to_string(epoch));
    if (loss_history) loss_history->push_back(epoch_loss);
  }
  return model;
}

double lstm_classifier_score(const LstmClassifier& model, const EmbeddedSequence& seq) {
  if (seq.empty()) throw EmptySequence();
  LstmState state(model.cell.hidden_dim);
  for (const auto& x : seq) lstm_step(model.cell, x, state);
  double z = model.readout[model.cell.hidden_dim];
  for (std::size_t k = 0; k < model.cell.hidden_dim; ++k)
    z += model.readout[k] * state.h[k];
  return sigmoid(z);
}

Prediction predict(const LstmClassifier& model,
                   std::span<const EmbeddedSequence> sequences) {
  Prediction p;
  p.labels.resize(sequences.size());
  p.scores.resize(sequences.size());
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    p.scores[i] = lstm_classifier_score(model, sequences[i]);
    p.labels[i] = p.scores[i] >= 0.5 ? 1 : 0;
  }
  return p;
}

Prediction predict(const LstmClassifier&, const Matrix&) {
  throw FeatureModelMismatch(
      "bag-of-words features cannot drive the LSTM classifier; it consumes "
      "token sequences");
}

}  // namespace merit
