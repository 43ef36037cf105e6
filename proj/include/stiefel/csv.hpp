#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stiefel/linalg.hpp"
#include "stiefel/network.hpp"

// Comma-separated input and output. Missing values are the literal NA (an
// empty field also reads as missing). Numbers are written in the shortest
// form that parses back to the identical double.

namespace stiefel::csv {

/// Shortest round-trip representation; NaN is written as NA.
std::string format_double(double value);

struct NumericTable {
  std::vector<std::string> header;  // empty when the file has none
  Matrix values;                    // NaN marks a missing cell
};

/// Reads a rectangular numeric CSV. A first row containing any field that is
/// neither a number nor missing is taken as a header. Throws IoError when the
/// file cannot be read and ParseError (with the 1-based line) for ragged rows
/// or non-numeric cells.
NumericTable read_numeric(const std::filesystem::path& path);

/// Adjacency matrix with entries 0, 1 or NA. Diagonal cells are ignored
/// whatever they contain. Throws ParseError naming the line and column of a
/// bad cell, and InputError naming the first asymmetric (i, j).
SymmetricBinaryNetwork parse_adjacency(const std::filesystem::path& path);

/// Node covariates with entries 0, 1 or NA, one row per node. When
/// `expected_rows` is given the row count must match it (InputError).
NodeCovariates parse_covariates(const std::filesystem::path& path,
                                std::optional<Eigen::Index> expected_rows = std::nullopt);

/// Writes `values` row by row, preceded by `header` when it is non-empty.
void write_matrix(const std::filesystem::path& path, const Matrix& values,
                  const std::vector<std::string>& header = {});

/// Writes pre-formatted rows. Every row must have header.size() fields.
void write_rows(const std::filesystem::path& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows);

/// Writes text to a file, throwing IoError with the path on failure.
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace stiefel::csv
