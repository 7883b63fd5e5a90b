#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace merit {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(std::string_view name) const;
  std::size_t require_column(std::string_view name) const;  // throws MissingColumn
};

/// RFC-4180 parse: quoted fields may hold delimiters, quotes ("") and
/// newlines. Every data row must match the header field count. Input must
/// be valid UTF-8.
CsvTable parse_csv(std::string_view bytes, char delimiter = ',');

/// Quotes a field when it contains the delimiter, a quote or a newline.
std::string csv_escape(std::string_view field, char delimiter = ',');

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields,
                   char delimiter = ',');

}  // namespace merit
