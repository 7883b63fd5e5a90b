#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace merit {

struct Date {
  int year = 0;
  int month = 0;
  int day = 0;
  auto operator<=>(const Date&) const = default;
};

/// Accepts ISO "YYYY-MM-DD" and US "MM/DD/YYYY"; rejects impossible dates.
std::optional<Date> parse_date(std::string_view s);
std::string format_date(const Date& d);  // ISO

struct RawComplaintRecord {
  Date date_received;
  std::string product;
  std::string issue;
  std::string company;
  std::string narrative;
  std::string company_response;
};

enum class Label { Meritorious, NonMeritorious, Excluded };

struct ComplaintRecord {
  Date date_received;
  std::string product;
  std::string issue;
  std::string company;
  std::string narrative;  // cleaned, non-empty
  double dollar_value = 0.0;
  double log_dollar = 0.0;
  bool meritorious = false;
};

struct FilterConfig {
  Date date_min{2020, 1, 1};
  Date date_max{2024, 12, 31};
  std::set<std::string> allowed_responses = {
      "Closed with monetary relief",
      "Closed with non-monetary relief",
      "Closed with explanation",
  };
  int min_category_frequency = 1000;
  double dollar_min = 0.0;      // exclusive
  double dollar_max = 10000.0;  // inclusive
  int min_narrative_words = 3;

  void validate() const;  // throws ConfigError
};

/// Header must name "Date received", "Product", "Issue", "Company",
/// "Consumer complaint narrative" and "Company response to consumer";
/// extra columns are ignored.
std::vector<RawComplaintRecord> parse_complaints_csv(std::string_view bytes,
                                                     char delimiter = ',');

/// Exact match on the three response strings; anything else is Excluded.
Label derive_label(std::string_view company_response);

/// First "$amount" occurrence inside (dollar_min, dollar_max]; amounts may
/// carry thousands commas and a one- or two-digit cents part.
std::optional<double> extract_dollar_value(
    std::string_view narrative, double dollar_min = 0.0,
    double dollar_max = std::numeric_limits<double>::infinity());

/// Collapses whitespace, strips redaction runs (XX..., XX/XX/XXXX forms)
/// and control characters; returns "" when fewer than min_narrative_words
/// words remain.
std::string clean_narrative(std::string_view text, int min_narrative_words = 3);

struct FilterStats {
  std::size_t dropped_date = 0;
  std::size_t dropped_label = 0;
  std::size_t dropped_category = 0;
  std::size_t dropped_empty_narrative = 0;
  std::size_t dropped_dollar = 0;
};

std::vector<ComplaintRecord> filter_records(
    const std::vector<RawComplaintRecord>& records, const FilterConfig& config,
    FilterStats* stats = nullptr);

// Cleaned corpus file: date_received, product, issue, company, narrative,
// dollar_value, log_dollar, meritorious.
void write_corpus_csv(std::ostream& out, const std::vector<ComplaintRecord>& records);
std::vector<ComplaintRecord> read_corpus_csv(std::string_view bytes);

}  // namespace merit
