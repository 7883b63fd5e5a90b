#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "merit/featurize.hpp"
#include "merit/linalg.hpp"
#include "merit/lstm.hpp"
#include "merit/rng.hpp"

namespace merit {

/// Free-running LSTM text generator. Emission logits at step t are
/// [h_{t-1}^T 1] * emission, a (H+1) x V projection over the vocabulary.
struct GeneratorParams {
  LstmParams cell;                       // input dim E, hidden dim H
  Matrix emission;                       // (H+1) x V
  std::vector<std::string> vocab;        // index -> token
  std::optional<std::size_t> eos_index;  // generation stops after emitting it
};

/// Single linear layer over [h^T 1]; sigmoid score in (0,1).
struct DiscriminatorParams {
  std::vector<double> phi;  // H + 1
};

struct GanConfig {
  std::size_t max_len = 50;  // stopping time tau
  double noise_sigma = 0.1;
  std::size_t d_steps = 1;
  double lr_d = 0.05;
  double lr_g = 0.05;
  std::size_t epochs = 300;
  std::uint64_t seed = 0;
  std::size_t samples_per_label = 5000;
  std::size_t hidden_dim = 768;
  std::size_t batch_size = 32;
  double holdout_fraction = 0.2;

  void validate() const;
};

struct Rollout {
  std::vector<std::string> tokens;     // emitted tokens, EOS excluded
  std::vector<std::size_t> token_ids;  // includes the EOS step if taken
  Matrix inputs;                       // T x E inputs consumed (noise applied)
  std::vector<double> final_h;         // h_T
};

/// h_0 = 0; each step samples z_t from the softmax emission, embeds it
/// (plus Gaussian noise when noise_sigma > 0) and advances the recurrence.
/// Stops at max_len or after consuming EOS.
Rollout generator_rollout(const GeneratorParams& params,
                          const EmbeddingProvider& provider, std::size_t max_len,
                          Rng& rng, double noise_sigma);

/// Final hidden state of the recurrence over an observed token sequence.
std::vector<double> encode_real(const LstmParams& cell,
                                const EmbeddingProvider& provider,
                                std::span<const std::string> tokens);

double discriminator_score(std::span<const double> h, std::span<const double> phi);

/// V = mean_x log D(h_real) + mean_z log(1 - D(h_fake)); rows of the
/// matrices are hidden states.
double gan_value(const Matrix& real_hiddens, const Matrix& fake_hiddens,
                 std::span<const double> phi);

std::vector<double> gan_value_grad_phi(const Matrix& real_hiddens,
                                       const Matrix& fake_hiddens,
                                       std::span<const double> phi);

/// Per-sequence generator gradient: score-function term
/// (reward - baseline) * grad log p(z) plus the pathwise grad of the
/// reward log D(h_T) through the recurrence. Gradient layout is
/// [cell.w | cell.b | emission] flattened row-major.
struct GenSequenceGrad {
  std::vector<double> grad;
  double log_prob = 0.0;
  double reward = 0.0;
};
GenSequenceGrad generator_sequence_grad(const GeneratorParams& params,
                                        std::span<const std::size_t> token_ids,
                                        const Matrix& inputs,
                                        std::span<const double> phi,
                                        double baseline);

/// Emission distribution given the previous hidden state (h_prev empty
/// means h_0 = 0).
std::vector<double> emission_distribution(const GeneratorParams& params,
                                          std::span<const double> h_prev);

struct GanHistoryRow {
  std::size_t epoch = 0;
  double value = 0.0;         // V on held-out real vs fresh fakes
  double d_accuracy = 0.0;    // held-out real-vs-fake accuracy
  double js_divergence = 0.0; // generated-vs-real bigram JS divergence
};

struct TrainedGan {
  GeneratorParams generator;
  DiscriminatorParams discriminator;
  std::vector<GanHistoryRow> history;
};

/// Alternating minimax: d_steps ascent steps on phi, then one
/// non-saturating generator step through the score-function estimator.
/// Noise is injected on generated-branch inputs only.
TrainedGan train_gan(std::span<const std::vector<std::string>> real_docs,
                     const EmbeddingProvider& provider, const GanConfig& config);

struct SyntheticRecord {
  std::vector<std::string> tokens;
  bool meritorious = false;
};

/// samples_per_label rollouts per branch; the non-meritorious block comes
/// first. Records are at most max_len tokens.
std::vector<SyntheticRecord> generate_synthetic_corpus(
    const TrainedGan& non_meritorious, const TrainedGan& meritorious,
    const EmbeddingProvider& provider, const GanConfig& config);

inline const char* kEosToken = "</s>";

}  // namespace merit
