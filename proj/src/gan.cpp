#include "merit/gan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "merit/bigram.hpp"
#include "merit/errors.hpp"

namespace merit {

void GanConfig::validate() const {
  if (max_len < 1) throw ConfigError("gan: max_len must be >= 1");
  if (noise_sigma < 0.0) throw ConfigError("gan: noise_sigma must be >= 0");
  if (d_steps < 1) throw ConfigError("gan: d_steps must be >= 1");
  if (samples_per_label < 1) throw ConfigError("gan: samples_per_label must be >= 1");
  if (batch_size < 1) throw ConfigError("gan: batch_size must be >= 1");
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0))
    throw ConfigError("gan: holdout_fraction must be in (0,1)");
}

std::vector<double> emission_distribution(const GeneratorParams& params,
                                          std::span<const double> h_prev) {
  const std::size_t h = params.cell.hidden_dim;
  const std::size_t v = params.emission.cols();
  std::vector<double> logits(v, 0.0);
  for (std::size_t j = 0; j < v; ++j) {
    double s = params.emission(h, j);  // bias row
    for (std::size_t k = 0; k < h_prev.size(); ++k)
      s += h_prev[k] * params.emission(k, j);
    logits[j] = s;
  }
  return softmax(logits);
}

Rollout generator_rollout(const GeneratorParams& params,
                          const EmbeddingProvider& provider, std::size_t max_len,
                          Rng& rng, double noise_sigma) {
  const std::size_t e = params.cell.input_dim;
  Rollout r;
  LstmState state(params.cell.hidden_dim);
  std::vector<std::vector<double>> inputs;
  for (std::size_t t = 0; t < max_len; ++t) {
    std::vector<double> probs = emission_distribution(params, state.h);
    double u = rng.uniform();
    double cum = 0.0;
    std::size_t z = probs.size() - 1;
    for (std::size_t j = 0; j < probs.size(); ++j) {
      cum += probs[j];
      if (u < cum) {
        z = j;
        break;
      }
    }
    std::vector<double> x =
        compose_token_embedding(provider, params.vocab[z], t, std::nullopt);
    if (noise_sigma > 0.0)
      for (double& xi : x) xi += noise_sigma * rng.gaussian();
    lstm_step(params.cell, x, state);
    r.token_ids.push_back(z);
    inputs.push_back(std::move(x));
    if (params.eos_index && z == *params.eos_index) break;
    r.tokens.push_back(params.vocab[z]);
  }
  r.inputs = Matrix(inputs.size(), e);
  for (std::size_t t = 0; t < inputs.size(); ++t)
    std::copy(inputs[t].begin(), inputs[t].end(), r.inputs.row(t).begin());
  r.final_h = state.h;
  return r;
}

std::vector<double> encode_real(const LstmParams& cell,
                                const EmbeddingProvider& provider,
                                std::span<const std::string> tokens) {
  if (tokens.empty()) throw EmptySequence();
  LstmState state(cell.hidden_dim);
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    std::vector<double> x =
        compose_token_embedding(provider, tokens[t], t, std::nullopt);
    lstm_step(cell, x, state);
  }
  return state.h;
}

double discriminator_score(std::span<const double> h, std::span<const double> phi) {
  if (h.size() + 1 != phi.size())
    throw DimensionMismatch("discriminator: hidden " + std::to_string(h.size()) +
                            " vs phi " + std::to_string(phi.size()));
  double z = phi[h.size()];
  for (std::size_t k = 0; k < h.size(); ++k) z += h[k] * phi[k];
  return sigmoid(z);
}

double gan_value(const Matrix& real_hiddens, const Matrix& fake_hiddens,
                 std::span<const double> phi) {
  if (real_hiddens.rows() == 0 || fake_hiddens.rows() == 0) throw EmptyBatch();
  double v = 0.0;
  for (std::size_t i = 0; i < real_hiddens.rows(); ++i)
    v += std::log(discriminator_score(real_hiddens.row(i), phi)) /
         static_cast<double>(real_hiddens.rows());
  for (std::size_t i = 0; i < fake_hiddens.rows(); ++i)
    v += std::log(1.0 - discriminator_score(fake_hiddens.row(i), phi)) /
         static_cast<double>(fake_hiddens.rows());
  return v;
}

std::vector<double> gan_value_grad_phi(const Matrix& real_hiddens,
                                       const Matrix& fake_hiddens,
                                       std::span<const double> phi) {
  if (real_hiddens.rows() == 0 || fake_hiddens.rows() == 0) throw EmptyBatch();
  const std::size_t h = phi.size() - 1;
  std::vector<double> grad(phi.size(), 0.0);
  const double inv_r = 1.0 / static_cast<double>(real_hiddens.rows());
  for (std::size_t i = 0; i < real_hiddens.rows(); ++i) {
    auto row = real_hiddens.row(i);
    double coeff = (1.0 - discriminator_score(row, phi)) * inv_r;
    for (std::size_t k = 0; k < h; ++k) grad[k] += coeff * row[k];
    grad[h] += coeff;
  }
  const double inv_f = 1.0 / static_cast<double>(fake_hiddens.rows());
  for (std::size_t i = 0; i < fake_hiddens.rows(); ++i) {
    auto row = fake_hiddens.row(i);
    double coeff = -discriminator_score(row, phi) * inv_f;
    for (std::size_t k = 0; k < h; ++k) grad[k] += coeff * row[k];
    grad[h] += coeff;
  }
  return grad;
}

GenSequenceGrad generator_sequence_grad(const GeneratorParams& params,
                                        std::span<const std::size_t> token_ids,
                                        const Matrix& inputs,
                                        std::span<const double> phi,
                                        double baseline) {
  const std::size_t h = params.cell.hidden_dim;
  const std::size_t v = params.emission.cols();
  const std::size_t t_steps = token_ids.size();
  if (inputs.rows() != t_steps) throw DimensionMismatch("sequence grad: inputs vs ids");

  // forward, caching per-step activations and each step's emission softmax
  LstmState state(h);
  std::vector<LstmStepCache> caches(t_steps);
  std::vector<std::vector<double>> probs(t_steps);
  std::vector<std::vector<double>> h_prevs(t_steps);
  double log_prob = 0.0;
  for (std::size_t t = 0; t < t_steps; ++t) {
    h_prevs[t] = state.h;
    probs[t] = emission_distribution(params, state.h);
    log_prob += std::log(probs[t][token_ids[t]]);
    lstm_step_cached(params.cell, inputs.row(t), state, caches[t]);
  }
  double score = discriminator_score(state.h, phi);
  double reward = std::log(score);

  GenSequenceGrad out;
  out.log_prob = log_prob;
  out.reward = reward;
  out.grad.assign(params.cell.param_count() + params.emission.data().size(), 0.0);
  std::span<double> dw(out.grad.data(), params.cell.w.size());
  std::span<double> db(out.grad.data() + params.cell.w.size(), params.cell.b.size());
  std::span<double> demit(out.grad.data() + params.cell.param_count(),
                          params.emission.data().size());

  const double advantage = reward - baseline;
  std::vector<double> dh(h, 0.0), dc(h, 0.0);
  // pathwise reward gradient enters at the final hidden state
  for (std::size_t k = 0; k < h; ++k) dh[k] = (1.0 - score) * phi[k];

  for (std::size_t t = t_steps; t-- > 0;) {
    lstm_step_backward(params.cell, caches[t], dh, dc, dw, db, {});
    // emission at step t read h_{t-1}: score-function term
    const auto& p = probs[t];
    const auto& hp = h_prevs[t];
    for (std::size_t j = 0; j < v; ++j) {
      double dlogit = advantage * ((j == token_ids[t] ? 1.0 : 0.0) - p[j]);
      if (dlogit == 0.0) continue;
      double* drow_bias = demit.data() + h * v;  // bias row of emission
      drow_bias[j] += dlogit;
      for (std::size_t k = 0; k < h; ++k) {
        demit[k * v + j] += dlogit * hp[k];
        dh[k] += dlogit * params.emission(k, j);
      }
    }
  }
  return out;
}

namespace {

struct Branch {
  GeneratorParams params;
  std::vector<double> phi;
};

Matrix encode_batch(const LstmParams& cell, const EmbeddingProvider& provider,
                    std::span<const std::vector<std::string>> docs,
                    std::span<const std::size_t> idx) {
  Matrix out(idx.size(), cell.hidden_dim);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    std::vector<double> h = encode_real(cell, provider, docs[idx[i]]);
    std::copy(h.begin(), h.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace

TrainedGan train_gan(std::span<const std::vector<std::string>> real_docs,
                     const EmbeddingProvider& provider, const GanConfig& config) {
  config.validate();
  if (real_docs.size() < 2)
    throw CorpusTooSmall("gan needs at least 2 real narratives, got " +
                         std::to_string(real_docs.size()));
  for (const auto& doc : real_docs)
    if (doc.empty()) throw EmptySequence();

  // vocabulary of this branch's real corpus plus the reserved EOS
  std::set<std::string> uniq;
  for (const auto& doc : real_docs)
    for (const auto& tok : doc) uniq.insert(tok);
  TrainedGan trained;
  GeneratorParams& gen = trained.generator;
  gen.vocab.assign(uniq.begin(), uniq.end());
  gen.vocab.push_back(kEosToken);
  gen.eos_index = gen.vocab.size() - 1;

  const std::size_t e = provider.dim();
  const std::size_t h = config.hidden_dim;
  const std::size_t v = gen.vocab.size();
  gen.cell = LstmParams::random(e, h, derive_seed(config.seed, "gan-cell"));
  gen.emission = Matrix(h + 1, v);
  {
    Rng init_rng(derive_seed(config.seed, "gan-emission"));
    for (double& x : gen.emission.data()) x = 0.01 * init_rng.gaussian();
  }
  trained.discriminator.phi.assign(h + 1, 0.0);
  std::vector<double>& phi = trained.discriminator.phi;

  // every real sequence ends with EOS so the stopping time is learnable
  std::vector<std::vector<std::string>> real_eos(real_docs.begin(), real_docs.end());
  for (auto& doc : real_eos) doc.push_back(kEosToken);

  // held-out real narratives feed the per-epoch discriminator accuracy
  Rng rng(derive_seed(config.seed, "gan-train"));
  std::vector<std::size_t> order(real_eos.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::size_t n_hold = std::max<std::size_t>(
      1, static_cast<std::size_t>(config.holdout_fraction *
                                  static_cast<double>(real_eos.size())));
  if (n_hold >= real_eos.size()) n_hold = real_eos.size() - 1;
  std::vector<std::size_t> hold_idx(order.begin(), order.begin() + n_hold);
  std::vector<std::size_t> train_idx(order.begin() + n_hold, order.end());

  const std::size_t n_gen_params = gen.cell.param_count() + gen.emission.data().size();
  std::vector<double> batch_grad(n_gen_params);
  double baseline = 0.0;
  bool baseline_set = false;

  auto draw_batch = [&](std::span<const std::size_t> pool) {
    std::vector<std::size_t> idx(config.batch_size);
    for (auto& i : idx) i = pool[rng.uniform_index(pool.size())];
    return idx;
  };

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    // discriminator ascent
    for (std::size_t ds = 0; ds < config.d_steps; ++ds) {
      Matrix real_h = encode_batch(gen.cell, provider, real_eos, draw_batch(train_idx));
      Matrix fake_h(config.batch_size, h);
      for (std::size_t i = 0; i < config.batch_size; ++i) {
        Rollout r = generator_rollout(gen, provider, config.max_len, rng,
                                      config.noise_sigma);
        std::copy(r.final_h.begin(), r.final_h.end(), fake_h.row(i).begin());
      }
      std::vector<double> dphi = gan_value_grad_phi(real_h, fake_h, phi);
      for (std::size_t k = 0; k < phi.size(); ++k) phi[k] += config.lr_d * dphi[k];
    }

    // one non-saturating generator step
    std::fill(batch_grad.begin(), batch_grad.end(), 0.0);
    double batch_reward = 0.0;
    for (std::size_t i = 0; i < config.batch_size; ++i) {
      Rollout r =
          generator_rollout(gen, provider, config.max_len, rng, config.noise_sigma);
      GenSequenceGrad g = generator_sequence_grad(
          gen, r.token_ids, r.inputs, phi, baseline_set ? baseline : 0.0);
      for (std::size_t j = 0; j < n_gen_params; ++j) batch_grad[j] += g.grad[j];
      batch_reward += g.reward;
    }
    const double inv_b = 1.0 / static_cast<double>(config.batch_size);
    for (double& g : batch_grad) g *= inv_b;
    batch_reward *= inv_b;
    baseline = baseline_set ? 0.9 * baseline + 0.1 * batch_reward : batch_reward;
    baseline_set = true;

    double gnorm = norm2(batch_grad);
    double scale = config.lr_g;
    const double clip = 5.0;
    if (gnorm > clip) scale *= clip / gnorm;
    std::size_t off = 0;
    for (double& w : gen.cell.w) w += scale * batch_grad[off++];
    for (double& b : gen.cell.b) b += scale * batch_grad[off++];
    for (double& m : gen.emission.data()) m += scale * batch_grad[off++];

    // epoch diagnostics on held-out real vs fresh fakes
    Matrix hold_h = encode_batch(gen.cell, provider, real_eos, hold_idx);
    Matrix eval_fake(config.batch_size, h);
    std::vector<std::vector<std::string>> eval_docs;
    for (std::size_t i = 0; i < config.batch_size; ++i) {
      Rollout r =
          generator_rollout(gen, provider, config.max_len, rng, config.noise_sigma);
      std::copy(r.final_h.begin(), r.final_h.end(), eval_fake.row(i).begin());
      if (r.tokens.size() >= 2) eval_docs.push_back(r.tokens);
    }
    GanHistoryRow row;
    row.epoch = epoch;
    row.value = gan_value(hold_h, eval_fake, phi);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < hold_h.rows(); ++i)
      correct += discriminator_score(hold_h.row(i), phi) >= 0.5;
    for (std::size_t i = 0; i < eval_fake.rows(); ++i)
      correct += discriminator_score(eval_fake.row(i), phi) < 0.5;
    row.d_accuracy = static_cast<double>(correct) /
                     static_cast<double>(hold_h.rows() + eval_fake.rows());
    row.js_divergence = eval_docs.empty()
                            ? std::log(2.0)  // nothing generated: maximal JS
                            : bigram_js_divergence(eval_docs, real_docs);
    trained.history.push_back(row);

    if (!std::isfinite(row.value) || !gen.cell.all_finite() ||
        !gen.emission.all_finite())
      throw NonFiniteLoss("gan diverged at epoch " + std::to_string(epoch) +
                          " (V=" + std::to_string(row.value) + ")");
  }
  return trained;
}

std::vector<SyntheticRecord> generate_synthetic_corpus(
    const TrainedGan& non_meritorious, const TrainedGan& meritorious,
    const EmbeddingProvider& provider, const GanConfig& config) {
  std::vector<SyntheticRecord> out;
  out.reserve(2 * config.samples_per_label);
  struct LabelBranch {
    const TrainedGan* gan;
    bool label;
    const char* name;
  };
  // the non-meritorious branch (upper segment) emits first
  for (const LabelBranch& b :
       {LabelBranch{&non_meritorious, false, "non-meritorious"},
        LabelBranch{&meritorious, true, "meritorious"}}) {
    Rng rng(derive_seed(config.seed, std::string("synth:") + b.name));
    for (std::size_t i = 0; i < config.samples_per_label; ++i) {
      Rollout r;
      for (int attempt = 0; attempt < 1000 && r.tokens.empty(); ++attempt)
        r = generator_rollout(b.gan->generator, provider, config.max_len, rng,
                              config.noise_sigma);
      if (r.tokens.empty())
        throw DataError("generator emitted only empty sequences");
      out.push_back({std::move(r.tokens), b.label});
    }
  }
  return out;
}

}  // namespace merit
