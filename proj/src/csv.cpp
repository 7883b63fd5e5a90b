#include "merit/csv.hpp"

#include <ostream>

#include "merit/errors.hpp"

namespace merit {

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  return std::nullopt;
}

std::size_t CsvTable::require_column(std::string_view name) const {
  auto c = column(name);
  if (!c) throw MissingColumn(std::string(name));
  return *c;
}

namespace {

void validate_utf8(std::string_view bytes) {
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    unsigned char c = static_cast<unsigned char>(bytes[i]);
    std::size_t extra;
    if (c < 0x80) {
      extra = 0;
    } else if ((c & 0xE0) == 0xC0) {
      if (c < 0xC2) throw EncodingError(i);  // overlong
      extra = 1;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
    } else if ((c & 0xF8) == 0xF0) {
      if (c > 0xF4) throw EncodingError(i);
      extra = 3;
    } else {
      throw EncodingError(i);
    }
    if (extra > 0 && i + extra >= n) throw EncodingError(i);
    for (std::size_t j = 1; j <= extra; ++j)
      if ((static_cast<unsigned char>(bytes[i + j]) & 0xC0) != 0x80)
        throw EncodingError(i + j);
    i += extra + 1;
  }
}

}  // namespace

CsvTable parse_csv(std::string_view bytes, char delimiter) {
  validate_utf8(bytes);

  CsvTable table;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool row_started = false;
  std::size_t line = 1;
  std::size_t row_start_line = 1;

  auto end_field = [&]() {
    fields.push_back(std::move(field));
    field.clear();
  };
  auto end_row = [&]() {
    end_field();
    if (fields.size() == 1 && fields[0].empty()) {  // blank line
      fields.clear();
      row_started = false;
      return;
    }
    if (table.header.empty()) {
      table.header = std::move(fields);
    } else {
      if (fields.size() != table.header.size())
        throw MalformedRow(row_start_line,
                           "expected " + std::to_string(table.header.size()) +
                               " fields, got " + std::to_string(fields.size()));
      table.rows.push_back(std::move(fields));
    }
    fields.clear();
    row_started = false;
  };

  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    char c = bytes[i];
    if (!row_started) {
      row_started = true;
      row_start_line = line;
    }
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < n && bytes[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
          // only delimiter, newline or EOF may follow a closing quote
          if (i + 1 < n && bytes[i + 1] != delimiter && bytes[i + 1] != '\n' &&
              bytes[i + 1] != '\r')
            throw MalformedRow(row_start_line, "text after closing quote");
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      in_quotes = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\r') {
      // swallow; the \n (if any) ends the row
      if (i + 1 < n && bytes[i + 1] != '\n') {
        ++line;
        end_row();
      }
    } else if (c == '\n') {
      ++line;
      end_row();
    } else {
      field += c;
    }
    ++i;
  }
  if (in_quotes) throw MalformedRow(row_start_line, "unterminated quote");
  if (row_started) end_row();
  if (table.header.empty()) throw DataError("csv: missing header row");
  return table;
}

std::string csv_escape(std::string_view field, char delimiter) {
  bool needs = false;
  for (char c : field)
    if (c == delimiter || c == '"' || c == '\n' || c == '\r') needs = true;
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields,
                   char delimiter) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << delimiter;
    out << csv_escape(fields[i], delimiter);
  }
  out << '\n';
}

}  // namespace merit
