// Deterministic corpus fixtures shared by the unit and acceptance suites.
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "merit/ingest.hpp"
#include "merit/linalg.hpp"
#include "merit/rng.hpp"

namespace fixtures {

inline std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

// ---------------------------------------------------------------------------
// raw complaints CSV for the ingest oracle comparison

struct RawFixture {
  std::string csv;
  std::vector<merit::RawComplaintRecord> records;
};

inline RawFixture raw_complaints_fixture(std::size_t n, std::uint64_t seed) {
  merit::Rng rng(seed);
  const std::vector<std::string> products = {"credit card", "mortgage", "auto loan",
                                             "checking account", "payday loan"};
  const std::vector<std::string> issues = {"billing dispute", "fraud", "fees",
                                           "closing account"};
  const std::vector<std::string> companies = {"acme bank", "zenith corp",
                                              "omega finance", "delta credit",
                                              "tiny lender"};
  const std::vector<std::string> responses = {
      "Closed with monetary relief", "Closed with non-monetary relief",
      "Closed with explanation", "Untimely response", "In progress"};
  const std::vector<std::string> words = {
      "they",  "charged", "me",     "for",   "services", "never",   "received",
      "the",   "account", "was",    "closed", "without",  "notice",  "my",
      "payment", "did",   "not",    "post",  "and",      "interest", "accrued",
      "refund", "promised", "but",  "delayed", "weeks",   "statement", "showed",
      "errors", "every",  "month",  "called", "support",  "no",      "resolution"};

  RawFixture fx;
  std::string csv =
      "Date received,Product,Issue,Company,Consumer complaint narrative,"
      "Company response to consumer\n";
  for (std::size_t i = 0; i < n; ++i) {
    merit::RawComplaintRecord r;
    // dates straddle the [2020, 2024] window
    int year = 2019 + static_cast<int>(rng.uniform_index(7));  // 2019..2025
    int month = 1 + static_cast<int>(rng.uniform_index(12));
    int day = 1 + static_cast<int>(rng.uniform_index(28));
    r.date_received = {year, month, day};
    r.product = products[rng.uniform_index(products.size())];
    r.issue = issues[rng.uniform_index(issues.size())];
    r.company = companies[rng.uniform_index(companies.size())];
    r.company_response = responses[rng.uniform_index(responses.size())];

    std::vector<std::string> toks;
    std::size_t len = 6 + rng.uniform_index(10);
    for (std::size_t t = 0; t < len; ++t) toks.push_back(words[rng.uniform_index(words.size())]);
    // dollar mentions: none / in-bounds / out-of-bounds / zero-then-valid
    double roll = rng.uniform();
    char buf[32];
    if (roll < 0.15) {
      // no dollar amount
    } else if (roll < 0.25) {
      std::snprintf(buf, sizeof(buf), "$%d", 10001 + static_cast<int>(rng.uniform_index(5000)));
      toks.insert(toks.begin() + 2, buf);
    } else if (roll < 0.35) {
      std::snprintf(buf, sizeof(buf), "$%d.%02d", 1 + static_cast<int>(rng.uniform_index(9999)),
                    static_cast<int>(rng.uniform_index(100)));
      toks.insert(toks.begin() + 1, "$0");
      toks.insert(toks.begin() + 4, buf);
    } else {
      std::snprintf(buf, sizeof(buf), "$%d,%03d", static_cast<int>(rng.uniform_index(9)),
                    static_cast<int>(rng.uniform_index(1000)));
      if (buf[1] == '0') std::snprintf(buf, sizeof(buf), "$%d", 1 + static_cast<int>(rng.uniform_index(999)));
      toks.insert(toks.begin() + 3, buf);
    }
    r.narrative = join(toks);
    fx.records.push_back(r);

    csv += merit::format_date(r.date_received) + "," + r.product + "," + r.issue +
           "," + r.company + ",\"" + r.narrative + "\"," + r.company_response + "\n";
  }
  fx.csv = std::move(csv);
  return fx;
}

// ---------------------------------------------------------------------------
// two-class text corpus with class-distinct word distributions

struct TwoClassParams {
  std::size_t n_docs = 2000;
  std::size_t shared_words = 300;
  std::size_t class_words = 80;
  std::size_t doc_len_min = 25;
  std::size_t doc_len_max = 40;
  double class_word_rate = 0.4;  // chance a token comes from the class pool
  std::uint64_t seed = 7;
};

inline std::vector<merit::ComplaintRecord> two_class_corpus(const TwoClassParams& p) {
  merit::Rng rng(p.seed);
  auto word = [](const char* prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%03zu", prefix, i);
    return std::string(buf);
  };
  std::vector<merit::ComplaintRecord> corpus;
  corpus.reserve(p.n_docs);
  for (std::size_t i = 0; i < p.n_docs; ++i) {
    bool label = i % 2 == 1;  // near-balanced
    std::size_t len = p.doc_len_min + rng.uniform_index(p.doc_len_max - p.doc_len_min + 1);
    std::vector<std::string> toks;
    for (std::size_t t = 0; t < len; ++t) {
      if (rng.uniform() < p.class_word_rate)
        toks.push_back(word(label ? "pos" : "neg", rng.uniform_index(p.class_words)));
      else
        toks.push_back(word("com", rng.uniform_index(p.shared_words)));
    }
    merit::ComplaintRecord r;
    r.date_received = {2022, 6, 15};
    r.product = "credit card";
    r.issue = "billing";
    r.company = "acme bank";
    r.narrative = join(toks);
    r.dollar_value = 1.0 + 9998.0 * rng.uniform();
    r.log_dollar = std::log(r.dollar_value);
    r.meritorious = label;
    corpus.push_back(std::move(r));
  }
  return corpus;
}

// ---------------------------------------------------------------------------
// 8-token bigram-chain corpus for the adversarial equilibrium check

inline std::vector<std::vector<std::string>> bigram_chain_corpus(std::size_t n_docs,
                                                                 std::uint64_t seed) {
  merit::Rng rng(seed);
  const char* vocab[8] = {"credit", "report", "error", "dispute",
                          "bank",   "charge", "fee",   "account"};
  std::vector<std::vector<std::string>> docs;
  for (std::size_t i = 0; i < n_docs; ++i) {
    std::size_t state = rng.uniform_index(8);
    std::size_t len = 8 + rng.uniform_index(5);
    std::vector<std::string> doc{vocab[state]};
    for (std::size_t t = 1; t < len; ++t) {
      state = rng.uniform() < 0.7 ? (state + 1) % 8 : (state + 3) % 8;
      doc.push_back(vocab[state]);
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

// ---------------------------------------------------------------------------
// toy classed corpora for the sequence classifier

struct TokenCorpus {
  std::vector<std::vector<std::string>> docs;
  std::vector<int> labels;
};

// class-1 documents contain "refund", class-0 never does
inline TokenCorpus refund_corpus(std::size_t n_docs, std::uint64_t seed) {
  merit::Rng rng(seed);
  const std::vector<std::string> filler = {
      "they", "said", "the", "card", "was", "late", "and", "my", "bill", "showed",
      "fees", "after", "calling", "support", "nothing", "changed", "again", "ever"};
  TokenCorpus out;
  for (std::size_t i = 0; i < n_docs; ++i) {
    int label = i % 2 == 0 ? 0 : 1;
    std::vector<std::string> doc;
    for (std::size_t t = 0; t < 10; ++t)
      doc.push_back(filler[rng.uniform_index(filler.size())]);
    if (label == 1) {
      std::size_t where = rng.uniform_index(doc.size());
      doc[where] = "refund";
    }
    out.docs.push_back(std::move(doc));
    out.labels.push_back(label);
  }
  return out;
}

// mostly-disjoint class vocabularies; input for the adversarial
// real-vs-synthetic comparison
inline TokenCorpus disjoint_class_corpus(std::size_t docs_per_label,
                                         std::uint64_t seed) {
  merit::Rng rng(seed);
  auto word = [](const char* prefix, std::size_t i) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%s%zu", prefix, i);
    return std::string(buf);
  };
  TokenCorpus out;
  for (std::size_t label = 0; label < 2; ++label) {
    for (std::size_t i = 0; i < docs_per_label; ++i) {
      std::size_t len = 8 + rng.uniform_index(7);
      std::vector<std::string> doc;
      for (std::size_t t = 0; t < len; ++t) {
        if (rng.uniform() < 0.7)
          doc.push_back(word(label ? "merit" : "plain", rng.uniform_index(10)));
        else
          doc.push_back(word("join", rng.uniform_index(5)));
      }
      out.docs.push_back(std::move(doc));
      out.labels.push_back(static_cast<int>(label));
    }
  }
  return out;
}

// two Gaussian blobs around +/-(2,2)
inline void blob_fixture(std::size_t n, std::uint64_t seed, merit::Matrix& x,
                         std::vector<int>& y) {
  merit::Rng rng(seed);
  x = merit::Matrix(n, 2);
  y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    int label = i % 2 == 0 ? 0 : 1;
    double cx = label == 1 ? 2.0 : -2.0;
    x(i, 0) = cx + rng.gaussian();
    x(i, 1) = cx + rng.gaussian();
    y[i] = label;
  }
}

}  // namespace fixtures
