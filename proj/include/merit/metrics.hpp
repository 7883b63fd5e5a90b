#pragma once

#include <span>
#include <string>

namespace merit {

struct ConfusionCounts {
  long long tp = 0;
  long long fp = 0;
  long long tn = 0;
  long long fn = 0;
  long long total() const { return tp + fp + tn + fn; }
};

ConfusionCounts confusion(std::span<const int> y_true, std::span<const int> y_pred,
                          int positive_class = 1);

double accuracy(const ConfusionCounts& c);

enum class F1Mode { Binary, Macro, Weighted };

/// Per-class F1 is 0 when its denominator is 0.
double f1(std::span<const int> y_true, std::span<const int> y_pred,
          F1Mode mode = F1Mode::Weighted, int positive_class = 1);

/// Matthews correlation; 0 when any marginal sum is 0. Stable for counts
/// up to 1e9 (long double products).
double mcc(const ConfusionCounts& c);

/// (p_o - p_e) / (1 - p_e); when p_e == 1, returns 1 if p_o == 1 else 0.
double cohens_kappa(std::span<const int> y_true, std::span<const int> y_pred);

struct MetricReport {
  double accuracy = 0.0;
  double f1 = 0.0;
  double mcc = 0.0;
  double kappa = 0.0;
  ConfusionCounts counts;
  int positive_class = 1;
  F1Mode f1_mode = F1Mode::Weighted;
};

MetricReport evaluate_all(std::span<const int> y_true, std::span<const int> y_pred,
                          F1Mode f1_mode = F1Mode::Weighted, int positive_class = 1);

// JSON report with metric values as percentages to two decimals.
std::string report_to_json(const MetricReport& r);
MetricReport report_from_json(const std::string& json_text);

std::string f1_mode_name(F1Mode mode);

}  // namespace merit
