#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "astrid/dataset.hpp"

namespace astrid {

inline std::optional<double> parse_double(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last) return std::nullopt;
  return value;
}

namespace detail {

// Field-level CSV reader: comma separator, double-quote quoting with "" as
// the escaped quote, records ended by LF or CRLF (quoted fields may span
// lines). Returns one vector of fields per record.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view text,
                                                       const std::string& source) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line;
        field += ch;
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (!field.empty() || field_started)
          throw std::runtime_error(source + ":" + std::to_string(line) +
                                   ": quote inside an unquoted field");
        quoted = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field += ch;
        field_started = true;
        break;
    }
  }
  if (quoted)
    throw std::runtime_error(source + ": unterminated quoted field at end of file");
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

inline bool is_missing(const std::string& field) { return field.empty() || field == "?"; }

}  // namespace detail

struct LoadOptions {
  // Force a column to a kind instead of inferring it from the values.
  std::map<std::string, ColumnKind> kind_overrides;
  // Minimum number of distinct class labels required after cleaning. The
  // significance pipeline needs two; shuffling an unlabelled-style dataset
  // for release is meaningful with one, so that path lowers this to 1.
  std::size_t min_classes = 2;
};

struct LoadResult {
  Dataset dataset;
  std::size_t rows_dropped = 0;             // rows removed for missing values
  std::vector<std::string> columns_dropped; // constant columns removed after that
};

inline LoadResult load_csv_text(std::string_view text, const std::string& class_column,
                                const LoadOptions& options = {},
                                const std::string& source = "<input>") {
  const auto records = detail::parse_csv(text, source);
  if (records.empty()) throw std::runtime_error(source + ": empty input");
  const std::vector<std::string>& header = records.front();

  std::size_t class_index = header.size();
  for (std::size_t j = 0; j < header.size(); ++j) {
    for (std::size_t l = j + 1; l < header.size(); ++l)
      if (header[j] == header[l])
        throw std::runtime_error(source + ": duplicate column name \"" + header[j] + "\"");
    if (header[j] == class_column) class_index = j;
  }
  if (class_index == header.size()) {
    std::string known;
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (j) known += ", ";
      known += header[j];
    }
    throw std::runtime_error(source + ": class column \"" + class_column +
                             "\" not found (columns: " + known + ")");
  }

  // Drop rows with any missing value, then drop attribute columns that are
  // constant over the surviving rows.
  std::vector<std::size_t> kept;
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != header.size())
      throw std::runtime_error(source + ": record " + std::to_string(r + 1) + " has " +
                               std::to_string(records[r].size()) + " fields, expected " +
                               std::to_string(header.size()));
    bool missing = false;
    for (const std::string& f : records[r])
      if (detail::is_missing(f)) { missing = true; break; }
    if (!missing) kept.push_back(r);
  }
  const std::size_t rows_dropped = records.size() - 1 - kept.size();
  if (kept.empty()) throw std::runtime_error(source + ": no rows left after dropping missing values");

  std::vector<std::string> class_tokens;
  class_tokens.reserve(kept.size());
  for (std::size_t r : kept) class_tokens.push_back(records[r][class_index]);
  std::vector<std::string> class_names = class_tokens;
  std::sort(class_names.begin(), class_names.end());
  class_names.erase(std::unique(class_names.begin(), class_names.end()), class_names.end());
  if (class_names.size() < options.min_classes)
    throw std::runtime_error(source + ": class column \"" + class_column + "\" has " +
                             std::to_string(class_names.size()) + " distinct value(s), need at least " +
                             std::to_string(options.min_classes));
  std::vector<std::int32_t> labels;
  labels.reserve(kept.size());
  for (const std::string& t : class_tokens) {
    const auto it = std::lower_bound(class_names.begin(), class_names.end(), t);
    labels.push_back(static_cast<std::int32_t>(it - class_names.begin()));
  }

  std::vector<Column> columns;
  std::vector<std::string> columns_dropped;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j == class_index) continue;
    std::vector<std::string> tokens;
    tokens.reserve(kept.size());
    for (std::size_t r : kept) tokens.push_back(records[r][j]);

    ColumnKind kind;
    const auto over = options.kind_overrides.find(header[j]);
    if (over != options.kind_overrides.end()) {
      kind = over->second;
    } else {
      kind = ColumnKind::kNumeric;
      for (const std::string& t : tokens)
        if (!parse_double(t)) { kind = ColumnKind::kCategorical; break; }
    }

    Column col;
    col.name = header[j];
    col.kind = kind;
    if (kind == ColumnKind::kNumeric) {
      col.numeric.reserve(tokens.size());
      for (const std::string& t : tokens) {
        const auto v = parse_double(t);
        if (!v)
          throw std::runtime_error(source + ": column \"" + header[j] +
                                   "\" is declared numeric but \"" + t + "\" does not parse");
        col.numeric.push_back(*v);
      }
      bool constant = true;
      for (double v : col.numeric)
        if (v != col.numeric.front()) { constant = false; break; }
      if (constant) { columns_dropped.push_back(col.name); continue; }
    } else {
      col.categories = tokens;
      std::sort(col.categories.begin(), col.categories.end());
      col.categories.erase(std::unique(col.categories.begin(), col.categories.end()),
                           col.categories.end());
      if (col.categories.size() < 2) { columns_dropped.push_back(col.name); continue; }
      col.codes.reserve(tokens.size());
      for (const std::string& t : tokens) {
        const auto it = std::lower_bound(col.categories.begin(), col.categories.end(), t);
        col.codes.push_back(static_cast<std::int32_t>(it - col.categories.begin()));
      }
    }
    columns.push_back(std::move(col));
  }
  if (columns.empty())
    throw std::runtime_error(source + ": no attribute columns remain after cleaning");

  return LoadResult{Dataset(std::move(columns), std::move(labels), std::move(class_names),
                            class_column),
                    rows_dropped, std::move(columns_dropped)};
}

inline LoadResult load_csv(const std::string& path, const std::string& class_column,
                           const LoadOptions& options = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_csv_text(buf.str(), class_column, options, path);
}

namespace detail {

inline void write_csv_field(std::ostream& out, const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) {
    out << field;
    return;
  }
  out << '"';
  for (char ch : field) {
    if (ch == '"') out << '"';
    out << ch;
  }
  out << '"';
}

}  // namespace detail

// Attribute columns in order, class column last. Numeric fields use the
// shortest representation that round-trips, so write/load is lossless.
inline void write_csv(const Dataset& d, std::ostream& out, bool include_class = true) {
  for (std::size_t j = 0; j < d.n_cols(); ++j) {
    if (j) out << ',';
    detail::write_csv_field(out, d.column(j).name);
  }
  if (include_class) {
    if (d.n_cols()) out << ',';
    detail::write_csv_field(out, d.class_column());
  }
  out << '\n';
  for (std::size_t i = 0; i < d.n_rows(); ++i) {
    for (std::size_t j = 0; j < d.n_cols(); ++j) {
      if (j) out << ',';
      detail::write_csv_field(out, d.column(j).token(i));
    }
    if (include_class) {
      if (d.n_cols()) out << ',';
      detail::write_csv_field(out, d.label_token(i));
    }
    out << '\n';
  }
}

inline void write_csv(const Dataset& d, const std::string& path, bool include_class = true) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  write_csv(d, out, include_class);
}

}  // namespace astrid
