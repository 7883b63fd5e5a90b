#include "merit/metrics.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "merit/errors.hpp"

namespace merit {

ConfusionCounts confusion(std::span<const int> y_true, std::span<const int> y_pred,
                          int positive_class) {
  if (y_true.size() != y_pred.size() || y_true.empty())
    throw LengthMismatch("confusion: lengths " + std::to_string(y_true.size()) +
                         " vs " + std::to_string(y_pred.size()));
  ConfusionCounts c;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if ((y_true[i] != 0 && y_true[i] != 1) || (y_pred[i] != 0 && y_pred[i] != 1))
      throw NonBinaryLabels();
    bool tpos = y_true[i] == positive_class;
    bool ppos = y_pred[i] == positive_class;
    if (tpos && ppos)
      ++c.tp;
    else if (!tpos && ppos)
      ++c.fp;
    else if (!tpos && !ppos)
      ++c.tn;
    else
      ++c.fn;
  }
  return c;
}

double accuracy(const ConfusionCounts& c) {
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

namespace {

// binary F1 for one positive class from its own confusion
double f1_one_class(long long tp, long long fp, long long fn) {
  long long denom = 2 * tp + fp + fn;
  if (denom == 0) return 0.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

}  // namespace

double f1(std::span<const int> y_true, std::span<const int> y_pred, F1Mode mode,
          int positive_class) {
  ConfusionCounts c = confusion(y_true, y_pred, positive_class);
  double f_pos = f1_one_class(c.tp, c.fp, c.fn);
  if (mode == F1Mode::Binary) return f_pos;
  // the other class's confusion is the swap
  double f_neg = f1_one_class(c.tn, c.fn, c.fp);
  if (mode == F1Mode::Macro) return 0.5 * (f_pos + f_neg);
  double support_pos = static_cast<double>(c.tp + c.fn);
  double support_neg = static_cast<double>(c.tn + c.fp);
  return (f_pos * support_pos + f_neg * support_neg) / (support_pos + support_neg);
}

double mcc(const ConfusionCounts& c) {
  long double tp = c.tp, fp = c.fp, tn = c.tn, fn = c.fn;
  long double m1 = tp + fp, m2 = tp + fn, m3 = tn + fp, m4 = tn + fn;
  if (m1 == 0 || m2 == 0 || m3 == 0 || m4 == 0) return 0.0;
  long double num = tp * tn - fp * fn;
  long double den = std::sqrt(m1) * std::sqrt(m2) * std::sqrt(m3) * std::sqrt(m4);
  return static_cast<double>(num / den);
}

double cohens_kappa(std::span<const int> y_true, std::span<const int> y_pred) {
  ConfusionCounts c = confusion(y_true, y_pred, 1);
  long double n = c.total();
  long double p_o = static_cast<long double>(c.tp + c.tn) / n;
  long double true_pos = c.tp + c.fn, true_neg = c.tn + c.fp;
  long double pred_pos = c.tp + c.fp, pred_neg = c.tn + c.fn;
  long double p_e = (true_pos * pred_pos + true_neg * pred_neg) / (n * n);
  if (p_e >= 1.0L) return p_o >= 1.0L ? 1.0 : 0.0;
  return static_cast<double>((p_o - p_e) / (1.0L - p_e));
}

MetricReport evaluate_all(std::span<const int> y_true, std::span<const int> y_pred,
                          F1Mode f1_mode, int positive_class) {
  MetricReport r;
  r.counts = confusion(y_true, y_pred, positive_class);
  r.accuracy = accuracy(r.counts);
  r.f1 = f1(y_true, y_pred, f1_mode, positive_class);
  r.mcc = mcc(r.counts);
  r.kappa = cohens_kappa(y_true, y_pred);
  r.positive_class = positive_class;
  r.f1_mode = f1_mode;
  return r;
}

std::string f1_mode_name(F1Mode mode) {
  switch (mode) {
    case F1Mode::Binary: return "binary";
    case F1Mode::Macro: return "macro";
    case F1Mode::Weighted: return "weighted";
  }
  return "weighted";
}

namespace {

std::string percent(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * x);
  return buf;
}

}  // namespace

std::string report_to_json(const MetricReport& r) {
  nlohmann::ordered_json j;
  j["metrics"] = {{"accuracy", percent(r.accuracy)},
                  {"f1", percent(r.f1)},
                  {"mcc", percent(r.mcc)},
                  {"kappa", percent(r.kappa)}};
  j["counts"] = {{"tp", r.counts.tp}, {"fp", r.counts.fp},
                 {"tn", r.counts.tn}, {"fn", r.counts.fn}};
  j["positive_class"] = r.positive_class;
  j["f1_mode"] = f1_mode_name(r.f1_mode);
  return j.dump(2) + "\n";
}

MetricReport report_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaMismatch(std::string("report parse: ") + e.what());
  }
  if (!j.contains("metrics") || !j.contains("counts"))
    throw SchemaMismatch("report missing metrics/counts");
  const auto& m = j["metrics"];
  for (const char* key : {"accuracy", "f1", "mcc", "kappa"})
    if (!m.contains(key)) throw SchemaMismatch(std::string("report missing ") + key);
  MetricReport r;
  r.accuracy = std::stod(m["accuracy"].get<std::string>()) / 100.0;
  r.f1 = std::stod(m["f1"].get<std::string>()) / 100.0;
  r.mcc = std::stod(m["mcc"].get<std::string>()) / 100.0;
  r.kappa = std::stod(m["kappa"].get<std::string>()) / 100.0;
  const auto& c = j["counts"];
  r.counts = {c["tp"].get<long long>(), c["fp"].get<long long>(),
              c["tn"].get<long long>(), c["fn"].get<long long>()};
  if (j.contains("positive_class")) r.positive_class = j["positive_class"].get<int>();
  std::string mode = j.value("f1_mode", "weighted");
  r.f1_mode = mode == "binary"   ? F1Mode::Binary
              : mode == "macro"  ? F1Mode::Macro
                                 : F1Mode::Weighted;
  return r;
}

}  // namespace merit
