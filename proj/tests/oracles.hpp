// Test-only oracles, written independently of the library code they check:
// naive matrix algebra, an exact SVD through the Gram matrix, brute-force
// metric formulas, and a regex-based record filter.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <regex>
#include <string>
#include <vector>

#include "merit/ingest.hpp"

namespace oracle {

using Mat = std::vector<std::vector<double>>;

inline Mat naive_matmul(const Mat& a, const Mat& b) {
  std::size_t n = a.size(), m = b[0].size(), k = b.size();
  Mat c(n, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t l = 0; l < k; ++l) c[i][j] += a[i][l] * b[l][j];
  return c;
}

inline Mat naive_transpose(const Mat& a) {
  Mat t(a[0].size(), std::vector<double>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

// Classic two-sided Jacobi eigendecomposition of a symmetric matrix.
// Returns eigenvalues (unsorted) with eigenvectors in the columns of v.
inline void jacobi_eigen(Mat a, std::vector<double>& eigenvalues, Mat& v) {
  const std::size_t n = a.size();
  v.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-28) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          double aip = a[i][p], aiq = a[i][q];
          a[i][p] = c * aip - s * aiq;
          a[i][q] = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          double api = a[p][i], aqi = a[q][i];
          a[p][i] = c * api - s * aqi;
          a[q][i] = s * api + c * aqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          double vip = v[i][p], viq = v[i][q];
          v[i][p] = c * vip - s * viq;
          v[i][q] = s * vip + c * viq;
        }
      }
    }
  }
  eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) eigenvalues[i] = a[i][i];
}

// Exact singular values (descending) of a dense matrix via the Gram matrix
// of its smaller side.
inline std::vector<double> exact_singular_values(const Mat& a) {
  const std::size_t n = a.size(), m = a[0].size();
  Mat gram = m <= n ? naive_matmul(naive_transpose(a), a)
                    : naive_matmul(a, naive_transpose(a));
  std::vector<double> eig;
  Mat v;
  jacobi_eigen(gram, eig, v);
  std::sort(eig.begin(), eig.end(), std::greater<double>());
  std::vector<double> sv;
  for (double e : eig) sv.push_back(std::sqrt(std::max(0.0, e)));
  return sv;
}

// ||A - A_k||_F of the exact truncation: the l2 mass of the tail.
inline double exact_rank_k_error(const Mat& a, std::size_t k) {
  std::vector<double> sv = exact_singular_values(a);
  double err2 = 0.0;
  for (std::size_t i = k; i < sv.size(); ++i) err2 += sv[i] * sv[i];
  return std::sqrt(err2);
}

inline double frob(const Mat& a) {
  double s = 0.0;
  for (const auto& row : a)
    for (double x : row) s += x * x;
  return std::sqrt(s);
}

// --------------------------------------------------------------------------
// reference metrics (direct formula translations; same documented
// zero-denominator conventions as the contract)

struct RefMetrics {
  double accuracy = 0;
  double f1_binary = 0;
  double f1_macro = 0;
  double f1_weighted = 0;
  double mcc = 0;
  double kappa = 0;
};

inline RefMetrics ref_metrics(const std::vector<int>& yt, const std::vector<int>& yp) {
  double tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < yt.size(); ++i) {
    if (yt[i] == 1 && yp[i] == 1) ++tp;
    if (yt[i] == 0 && yp[i] == 1) ++fp;
    if (yt[i] == 0 && yp[i] == 0) ++tn;
    if (yt[i] == 1 && yp[i] == 0) ++fn;
  }
  double n = tp + fp + tn + fn;
  RefMetrics r;
  r.accuracy = (tp + tn) / n;

  auto f1c = [](double tpc, double fpc, double fnc) {
    double d = 2 * tpc + fpc + fnc;
    return d == 0 ? 0.0 : 2 * tpc / d;
  };
  double f1_pos = f1c(tp, fp, fn);
  double f1_neg = f1c(tn, fn, fp);
  r.f1_binary = f1_pos;
  r.f1_macro = (f1_pos + f1_neg) / 2;
  r.f1_weighted = (f1_pos * (tp + fn) + f1_neg * (tn + fp)) / n;

  double s1 = tp + fp, s2 = tp + fn, s3 = tn + fp, s4 = tn + fn;
  r.mcc = (s1 == 0 || s2 == 0 || s3 == 0 || s4 == 0)
              ? 0.0
              : (tp * tn - fp * fn) / std::sqrt(s1 * s2 * s3 * s4);

  double p_o = (tp + tn) / n;
  double p_e = ((tp + fn) * (tp + fp) + (tn + fp) * (tn + fn)) / (n * n);
  r.kappa = p_e >= 1.0 ? (p_o >= 1.0 ? 1.0 : 0.0) : (p_o - p_e) / (1.0 - p_e);
  return r;
}

// --------------------------------------------------------------------------
// central finite differences of a scalar function of a parameter vector

inline std::vector<double> central_differences(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> params, double step) {
  std::vector<double> grad(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    double saved = params[i];
    params[i] = saved + step;
    double up = f(params);
    params[i] = saved - step;
    double down = f(params);
    params[i] = saved;
    grad[i] = (up - down) / (2.0 * step);
  }
  return grad;
}

inline double max_relative_error(const std::vector<double>& a,
                                 const std::vector<double>& b,
                                 double floor = 1e-8) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double denom = std::max({std::abs(a[i]), std::abs(b[i]), floor});
    worst = std::max(worst, std::abs(a[i] - b[i]) / denom);
  }
  return worst;
}

// --------------------------------------------------------------------------
// brute-force record filter (regex dollar extraction, std::regex being a
// deliberately different engine from the library's scanner)

inline std::vector<std::size_t> brute_force_filter_indices(
    const std::vector<merit::RawComplaintRecord>& records,
    const merit::FilterConfig& cfg) {
  // pass 1: date window + label
  std::vector<std::size_t> pass1;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.date_received < cfg.date_min || cfg.date_max < r.date_received) continue;
    bool labeled = r.company_response == "Closed with monetary relief" ||
                   r.company_response == "Closed with non-monetary relief" ||
                   r.company_response == "Closed with explanation";
    if (!labeled || !cfg.allowed_responses.count(r.company_response)) continue;
    pass1.push_back(i);
  }
  // pass 2: category frequency over the pass-1 survivors
  auto count_of = [&](auto field) {
    std::map<std::string, int> freq;
    for (std::size_t i : pass1) ++freq[field(records[i])];
    return freq;
  };
  auto prod = count_of([](const auto& r) { return r.product; });
  auto issue = count_of([](const auto& r) { return r.issue; });
  auto comp = count_of([](const auto& r) { return r.company; });

  std::regex dollar_re(R"(\$(\d{1,3}(,\d{3})+|\d+)(\.\d\d?)?)");
  std::vector<std::size_t> kept;
  for (std::size_t i : pass1) {
    const auto& r = records[i];
    if (prod[r.product] <= cfg.min_category_frequency) continue;
    if (issue[r.issue] <= cfg.min_category_frequency) continue;
    if (comp[r.company] <= cfg.min_category_frequency) continue;
    // fixtures keep narratives clean, so only the word-count rule applies
    std::string cleaned = merit::clean_narrative(r.narrative, cfg.min_narrative_words);
    if (cleaned.empty()) continue;
    bool found = false;
    for (auto it = std::sregex_iterator(cleaned.begin(), cleaned.end(), dollar_re);
         it != std::sregex_iterator(); ++it) {
      std::string digits = it->str().substr(1);
      digits.erase(std::remove(digits.begin(), digits.end(), ','), digits.end());
      double v = std::stod(digits);
      if (v > cfg.dollar_min && v <= cfg.dollar_max) {
        found = true;
        break;
      }
    }
    if (found) kept.push_back(i);
  }
  return kept;
}

}  // namespace oracle
