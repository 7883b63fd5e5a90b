#include "merit/ingest.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "merit/csv.hpp"
#include "merit/errors.hpp"

namespace merit {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

int days_in_month(int year, int month) {
  static const int d[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2) {
    bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return leap ? 29 : 28;
  }
  return d[month - 1];
}

std::optional<Date> make_date(int y, int m, int d) {
  if (y < 1000 || y > 9999 || m < 1 || m > 12 || d < 1 || d > days_in_month(y, m))
    return std::nullopt;
  return Date{y, m, d};
}

}  // namespace

std::optional<Date> parse_date(std::string_view s) {
  if (s.size() == 10 && s[4] == '-' && s[7] == '-') {
    auto y = s.substr(0, 4), m = s.substr(5, 2), d = s.substr(8, 2);
    if (all_digits(y) && all_digits(m) && all_digits(d))
      return make_date(std::stoi(std::string(y)), std::stoi(std::string(m)),
                       std::stoi(std::string(d)));
  }
  if (s.size() == 10 && s[2] == '/' && s[5] == '/') {
    auto m = s.substr(0, 2), d = s.substr(3, 2), y = s.substr(6, 4);
    if (all_digits(y) && all_digits(m) && all_digits(d))
      return make_date(std::stoi(std::string(y)), std::stoi(std::string(m)),
                       std::stoi(std::string(d)));
  }
  return std::nullopt;
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

void FilterConfig::validate() const {
  if (date_max < date_min) throw ConfigError("filter: date_min > date_max");
  if (!(dollar_min < dollar_max)) throw ConfigError("filter: dollar_min >= dollar_max");
  if (min_category_frequency < 1)
    throw ConfigError("filter: min_category_frequency < 1");
  if (min_narrative_words < 1) throw ConfigError("filter: min_narrative_words < 1");
}

std::vector<RawComplaintRecord> parse_complaints_csv(std::string_view bytes,
                                                     char delimiter) {
  CsvTable table = parse_csv(bytes, delimiter);
  std::size_t c_date = table.require_column("Date received");
  std::size_t c_product = table.require_column("Product");
  std::size_t c_issue = table.require_column("Issue");
  std::size_t c_company = table.require_column("Company");
  std::size_t c_narr = table.require_column("Consumer complaint narrative");
  std::size_t c_resp = table.require_column("Company response to consumer");

  std::vector<RawComplaintRecord> out;
  out.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    auto date = parse_date(row[c_date]);
    if (!date)
      throw MalformedRow(i + 2, "unparseable date \"" + row[c_date] + "\"");
    out.push_back({*date, row[c_product], row[c_issue], row[c_company],
                   row[c_narr], row[c_resp]});
  }
  return out;
}

Label derive_label(std::string_view company_response) {
  if (company_response == "Closed with monetary relief" ||
      company_response == "Closed with non-monetary relief")
    return Label::Meritorious;
  if (company_response == "Closed with explanation") return Label::NonMeritorious;
  return Label::Excluded;
}

std::optional<double> extract_dollar_value(std::string_view narrative,
                                           double dollar_min, double dollar_max) {
  const std::size_t n = narrative.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (narrative[i] != '$') continue;
    std::size_t j = i + 1;
    std::string digits;
    if (j >= n || !std::isdigit(static_cast<unsigned char>(narrative[j]))) continue;
    // leading digit group
    while (j < n && std::isdigit(static_cast<unsigned char>(narrative[j])))
      digits += narrative[j++];
    // optional ",ddd" groups
    while (j + 3 < n && narrative[j] == ',' &&
           std::isdigit(static_cast<unsigned char>(narrative[j + 1])) &&
           std::isdigit(static_cast<unsigned char>(narrative[j + 2])) &&
           std::isdigit(static_cast<unsigned char>(narrative[j + 3]))) {
      digits += narrative.substr(j + 1, 3);
      j += 4;
    }
    // optional cents, one or two digits
    std::string cents;
    if (j + 1 < n && narrative[j] == '.' &&
        std::isdigit(static_cast<unsigned char>(narrative[j + 1]))) {
      cents += narrative[j + 1];
      j += 2;
      if (j < n && std::isdigit(static_cast<unsigned char>(narrative[j]))) {
        cents += narrative[j];
        ++j;
      }
    }
    double value = std::stod(digits + (cents.empty() ? "" : "." + cents));
    if (value > dollar_min && value <= dollar_max) return value;
    i = j - 1;  // resume scanning after this match
  }
  return std::nullopt;
}

std::string clean_narrative(std::string_view text, int min_narrative_words) {
  std::string s;
  s.reserve(text.size());
  // strip control characters first (tab/newline count as whitespace below)
  for (char c : text) {
    unsigned char u = static_cast<unsigned char>(c);
    if (u < 0x20 && c != '\t' && c != '\n' && c != '\r') continue;
    if (u == 0x7F) continue;
    s += c;
  }
  // drop redaction runs: 2+ X's, optionally continued by /X+ groups
  std::string t;
  t.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == 'X') {
      std::size_t j = i;
      while (j < s.size() && s[j] == 'X') ++j;
      if (j - i >= 2) {
        // swallow date-like continuations XX/XX/XXXX
        while (j < s.size() && s[j] == '/' && j + 1 < s.size() && s[j + 1] == 'X') {
          ++j;
          while (j < s.size() && s[j] == 'X') ++j;
        }
        i = j;
        continue;
      }
    }
    t += s[i++];
  }
  // collapse whitespace
  std::string out;
  out.reserve(t.size());
  bool in_space = true;  // also strips leading whitespace
  int words = 0;
  for (char c : t) {
    bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r';
    if (ws) {
      in_space = true;
    } else {
      if (in_space && !out.empty()) out += ' ';
      if (in_space) ++words;
      in_space = false;
      out += c;
    }
  }
  if (words < min_narrative_words) return "";
  return out;
}

std::vector<ComplaintRecord> filter_records(
    const std::vector<RawComplaintRecord>& records, const FilterConfig& config,
    FilterStats* stats) {
  config.validate();
  FilterStats local;
  FilterStats& st = stats ? *stats : local;

  // date + label pass; category frequencies are counted over its survivors
  std::vector<const RawComplaintRecord*> pass1;
  std::vector<Label> labels;
  for (const auto& r : records) {
    if (r.date_received < config.date_min || config.date_max < r.date_received) {
      ++st.dropped_date;
      continue;
    }
    Label label = derive_label(r.company_response);
    if (label == Label::Excluded || !config.allowed_responses.count(r.company_response)) {
      ++st.dropped_label;
      continue;
    }
    pass1.push_back(&r);
    labels.push_back(label);
  }

  std::map<std::string, int> product_freq, issue_freq, company_freq;
  for (const auto* r : pass1) {
    ++product_freq[r->product];
    ++issue_freq[r->issue];
    ++company_freq[r->company];
  }

  std::vector<ComplaintRecord> out;
  for (std::size_t i = 0; i < pass1.size(); ++i) {
    const auto& r = *pass1[i];
    if (product_freq[r.product] <= config.min_category_frequency ||
        issue_freq[r.issue] <= config.min_category_frequency ||
        company_freq[r.company] <= config.min_category_frequency) {
      ++st.dropped_category;
      continue;
    }
    std::string cleaned = clean_narrative(r.narrative, config.min_narrative_words);
    if (cleaned.empty()) {
      ++st.dropped_empty_narrative;
      continue;
    }
    auto dollars = extract_dollar_value(cleaned, config.dollar_min, config.dollar_max);
    if (!dollars) {
      ++st.dropped_dollar;
      continue;
    }
    out.push_back({r.date_received, r.product, r.issue, r.company,
                   std::move(cleaned), *dollars, std::log(*dollars),
                   labels[i] == Label::Meritorious});
  }
  return out;
}

void write_corpus_csv(std::ostream& out, const std::vector<ComplaintRecord>& records) {
  write_csv_row(out, {"date_received", "product", "issue", "company", "narrative",
                      "dollar_value", "log_dollar", "meritorious"});
  char dollars[32], logd[40];
  for (const auto& r : records) {
    std::snprintf(dollars, sizeof(dollars), "%.2f", r.dollar_value);
    std::snprintf(logd, sizeof(logd), "%.17g", r.log_dollar);
    write_csv_row(out, {format_date(r.date_received), r.product, r.issue, r.company,
                        r.narrative, dollars, logd, r.meritorious ? "true" : "false"});
  }
}

std::vector<ComplaintRecord> read_corpus_csv(std::string_view bytes) {
  CsvTable table = parse_csv(bytes);
  std::size_t c_date = table.require_column("date_received");
  std::size_t c_product = table.require_column("product");
  std::size_t c_issue = table.require_column("issue");
  std::size_t c_company = table.require_column("company");
  std::size_t c_narr = table.require_column("narrative");
  std::size_t c_dollar = table.require_column("dollar_value");
  std::size_t c_log = table.require_column("log_dollar");
  std::size_t c_merit = table.require_column("meritorious");

  std::vector<ComplaintRecord> out;
  out.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    ComplaintRecord rec;
    auto date = parse_date(row[c_date]);
    rec.date_received = date ? *date : Date{};
    rec.product = row[c_product];
    rec.issue = row[c_issue];
    rec.company = row[c_company];
    rec.narrative = row[c_narr];
    rec.dollar_value = row[c_dollar].empty() ? 0.0 : std::stod(row[c_dollar]);
    rec.log_dollar = row[c_log].empty() ? 0.0 : std::stod(row[c_log]);
    if (row[c_merit] == "true") {
      rec.meritorious = true;
    } else if (row[c_merit] == "false") {
      rec.meritorious = false;
    } else {
      throw MalformedRow(i + 2, "meritorious must be true/false");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace merit
