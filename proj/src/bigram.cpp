#include "merit/bigram.hpp"

#include <cmath>

#include "merit/errors.hpp"
#include "merit/rng.hpp"

namespace merit {

BigramModel fit_bigram(std::span<const std::vector<std::string>> docs) {
  BigramModel model;
  bool any_pair = false;
  for (const auto& doc : docs) {
    if (!doc.empty()) ++model.start_counts[doc.front()];
    for (std::size_t i = 0; i + 1 < doc.size(); ++i) {
      ++model.counts[doc[i]][doc[i + 1]];
      any_pair = true;
    }
  }
  if (!any_pair) throw CorpusTooShort();
  for (const auto& [context, nexts] : model.counts) {
    long long total = 0;
    for (const auto& [next, c] : nexts) total += c;
    auto& dist = model.prob[context];
    for (const auto& [next, c] : nexts)
      dist[next] = static_cast<double>(c) / static_cast<double>(total);
  }
  return model;
}

std::vector<std::string> bigram_generate(const BigramModel& model,
                                         const std::string& start_token,
                                         std::size_t length, std::uint64_t seed) {
  bool known = model.prob.count(start_token) > 0;
  if (!known) {
    // a token appearing only document-finally has no outgoing context but
    // is still a valid start
    for (const auto& [context, nexts] : model.counts)
      if (nexts.count(start_token)) {
        known = true;
        break;
      }
    if (model.start_counts.count(start_token)) known = true;
  }
  if (!known) throw UnknownStartToken(start_token);

  std::vector<std::string> out{start_token};
  Rng rng(seed);
  while (out.size() < length) {
    auto it = model.prob.find(out.back());
    if (it == model.prob.end()) break;  // context never followed by anything
    double u = rng.uniform();
    double cum = 0.0;
    const std::string* pick = nullptr;
    for (const auto& [next, p] : it->second) {
      cum += p;
      pick = &next;
      if (u < cum) break;
    }
    out.push_back(*pick);
  }
  return out;
}

namespace {

std::map<std::pair<std::string, std::string>, double> bigram_distribution(
    std::span<const std::vector<std::string>> docs) {
  std::map<std::pair<std::string, std::string>, double> dist;
  double total = 0.0;
  for (const auto& doc : docs)
    for (std::size_t i = 0; i + 1 < doc.size(); ++i) {
      dist[{doc[i], doc[i + 1]}] += 1.0;
      total += 1.0;
    }
  for (auto& [k, v] : dist) v /= total;
  return dist;
}

}  // namespace

double bigram_js_divergence(std::span<const std::vector<std::string>> docs_a,
                            std::span<const std::vector<std::string>> docs_b) {
  auto pa = bigram_distribution(docs_a);
  auto pb = bigram_distribution(docs_b);
  if (pa.empty() || pb.empty()) throw CorpusTooShort();
  double js = 0.0;
  auto half_kl = [](const auto& p, const auto& q) {
    double kl = 0.0;
    for (const auto& [k, pv] : p) {
      auto it = q.find(k);
      double qv = it == q.end() ? 0.0 : it->second;
      double m = 0.5 * (pv + qv);
      kl += pv * std::log(pv / m);
    }
    return kl;
  };
  js = 0.5 * half_kl(pa, pb) + 0.5 * half_kl(pb, pa);
  return js;
}

}  // namespace merit
