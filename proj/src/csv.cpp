#include "stiefel/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "stiefel/errors.hpp"

namespace stiefel::csv {
namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

struct RawRow {
  std::size_t line;
  std::vector<std::string> fields;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) {
    s.remove_suffix(1);
  }
  return s;
}

bool is_missing(std::string_view field) { return field.empty() || field == "NA"; }

std::optional<double> parse_number(std::string_view field) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) return std::nullopt;
  return value;
}

std::vector<RawRow> read_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<RawRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    RawRow row{line_no, {}};
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      const std::string_view piece(line.data() + start,
                                   (comma == std::string::npos ? line.size() : comma) - start);
      row.fields.emplace_back(trim(piece));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  if (rows.empty()) throw ParseError(path.string() + ": file is empty");
  return rows;
}

bool looks_like_header(const RawRow& row) {
  for (const auto& f : row.fields) {
    if (!is_missing(f) && !parse_number(f)) return true;
  }
  return false;
}

std::string cell_name(const std::filesystem::path& path, const RawRow& row, std::size_t col) {
  return path.string() + ": line " + std::to_string(row.line) + ", column " + std::to_string(col + 1);
}

NumericTable to_table(const std::filesystem::path& path, std::vector<RawRow> rows) {
  NumericTable table;
  std::size_t first = 0;
  if (looks_like_header(rows.front())) {
    table.header = rows.front().fields;
    first = 1;
  }
  const std::size_t width = rows.front().fields.size();
  const std::size_t count = rows.size() - first;
  table.values.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(width));
  for (std::size_t r = first; r < rows.size(); ++r) {
    const RawRow& row = rows[r];
    if (row.fields.size() != width) {
      throw ParseError(path.string() + ": line " + std::to_string(row.line) + " has " +
                       std::to_string(row.fields.size()) + " fields, expected " + std::to_string(width));
    }
    for (std::size_t c = 0; c < width; ++c) {
      const std::string& f = row.fields[c];
      double value = kMissing;
      if (!is_missing(f)) {
        const auto parsed = parse_number(f);
        if (!parsed) throw ParseError(cell_name(path, row, c) + ": '" + f + "' is not a number");
        value = *parsed;
      }
      table.values(static_cast<Eigen::Index>(r - first), static_cast<Eigen::Index>(c)) = value;
    }
  }
  return table;
}

// Checks that every non-skipped cell is 0, 1 or missing.
void require_binary(const std::filesystem::path& path, const std::vector<RawRow>& rows,
                    std::size_t first, bool skip_diagonal) {
  for (std::size_t r = first; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].fields.size(); ++c) {
      if (skip_diagonal && c == r - first) continue;
      const std::string& f = rows[r].fields[c];
      if (is_missing(f)) continue;
      const auto v = parse_number(f);
      if (!v || (*v != 0.0 && *v != 1.0)) {
        throw ParseError(cell_name(path, rows[r], c) + ": entry '" + f + "' must be 0, 1 or NA");
      }
    }
  }
}

void check_widths(const std::filesystem::path& path, const std::vector<RawRow>& rows) {
  const std::size_t width = rows.front().fields.size();
  for (const auto& row : rows) {
    if (row.fields.size() != width) {
      throw ParseError(path.string() + ": line " + std::to_string(row.line) + " has " +
                       std::to_string(row.fields.size()) + " fields, expected " + std::to_string(width));
    }
  }
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "NA";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf, ptr);
}

NumericTable read_numeric(const std::filesystem::path& path) { return to_table(path, read_rows(path)); }

SymmetricBinaryNetwork parse_adjacency(const std::filesystem::path& path) {
  std::vector<RawRow> rows = read_rows(path);
  check_widths(path, rows);
  const std::size_t first = looks_like_header(rows.front()) ? 1 : 0;
  require_binary(path, rows, first, /*skip_diagonal=*/true);
  // Diagonal cells may hold anything; blank them before numeric conversion.
  for (std::size_t r = first; r < rows.size(); ++r) {
    if (r - first < rows[r].fields.size()) rows[r].fields[r - first] = "NA";
  }
  NumericTable table = to_table(path, std::move(rows));
  if (table.values.rows() != table.values.cols()) {
    throw ParseError(path.string() + ": adjacency matrix is " + std::to_string(table.values.rows()) +
                     "x" + std::to_string(table.values.cols()) + ", expected square");
  }
  return SymmetricBinaryNetwork::from_matrix(table.values);
}

NodeCovariates parse_covariates(const std::filesystem::path& path,
                                std::optional<Eigen::Index> expected_rows) {
  std::vector<RawRow> rows = read_rows(path);
  check_widths(path, rows);
  const std::size_t first = looks_like_header(rows.front()) ? 1 : 0;
  require_binary(path, rows, first, /*skip_diagonal=*/false);
  NumericTable table = to_table(path, std::move(rows));
  if (expected_rows && table.values.rows() != *expected_rows) {
    throw InputError(path.string() + ": covariates have " + std::to_string(table.values.rows()) +
                     " rows but the network has " + std::to_string(*expected_rows) + " nodes");
  }
  NodeCovariates out;
  out.values = std::move(table.values);
  if (table.header.empty()) {
    for (Eigen::Index c = 0; c < out.values.cols(); ++c) out.names.push_back("x" + std::to_string(c + 1));
  } else {
    out.names = std::move(table.header);
  }
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

void write_matrix(const std::filesystem::path& path, const Matrix& values,
                  const std::vector<std::string>& header) {
  if (!header.empty() && static_cast<Eigen::Index>(header.size()) != values.cols()) {
    throw DimensionError("write_matrix: header width differs from column count");
  }
  std::string text;
  auto append_row = [&text](const auto& fields) {
    bool first = true;
    for (const auto& f : fields) {
      if (!first) text += ',';
      text += f;
      first = false;
    }
    text += '\n';
  };
  if (!header.empty()) append_row(header);
  std::vector<std::string> fields(static_cast<std::size_t>(values.cols()));
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) fields[static_cast<std::size_t>(j)] = format_double(values(i, j));
    append_row(fields);
  }
  write_text(path, text);
}

void write_rows(const std::filesystem::path& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream text;
  auto append = [&text](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) text << (i ? "," : "") << fields[i];
    text << '\n';
  };
  append(header);
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw DimensionError("write_rows: ragged row");
    append(row);
  }
  write_text(path, text.str());
}

}  // namespace stiefel::csv
