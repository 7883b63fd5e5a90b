#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace merit {

/// First-order Markov model over tokens; counts retained for audit.
struct BigramModel {
  std::map<std::string, std::map<std::string, long long>> counts;
  std::map<std::string, std::map<std::string, double>> prob;
  std::map<std::string, long long> start_counts;
};

/// P(next | context) = count(context,next) / count(context,*). Throws
/// CorpusTooShort when no document has two tokens.
BigramModel fit_bigram(std::span<const std::vector<std::string>> docs);

/// Seeded sampling walk; starts at start_token, stops early when the
/// current context was never followed by anything.
std::vector<std::string> bigram_generate(const BigramModel& model,
                                         const std::string& start_token,
                                         std::size_t length, std::uint64_t seed);

/// Jensen-Shannon divergence between the joint bigram distributions of two
/// corpora (natural log; 0 when identical).
double bigram_js_divergence(std::span<const std::vector<std::string>> docs_a,
                            std::span<const std::vector<std::string>> docs_b);

}  // namespace merit
