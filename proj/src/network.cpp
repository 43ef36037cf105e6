#include "stiefel/network.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "stiefel/errors.hpp"

namespace stiefel {
namespace {

Edge classify(double v, Eigen::Index i, Eigen::Index j) {
  if (std::isnan(v)) return Edge::kMissing;
  if (v == 0.0) return Edge::kAbsent;
  if (v == 1.0) return Edge::kPresent;
  throw InputError("adjacency entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                   ") must be 0, 1 or NA");
}

}  // namespace

SymmetricBinaryNetwork SymmetricBinaryNetwork::from_matrix(const Matrix& y) {
  if (y.rows() != y.cols()) throw DimensionError("adjacency matrix must be square");
  if (y.rows() < 1) throw DimensionError("adjacency matrix is empty");
  const Eigen::Index n = y.rows();
  std::vector<Edge> edges(static_cast<std::size_t>(n * n), Edge::kMissing);
  // Row-major scan so the first reported asymmetry is the first in reading order.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Edge upper = classify(y(i, j), i, j);
      const Edge lower = classify(y(j, i), j, i);
      if (upper != lower) {
        throw InputError("adjacency matrix is not symmetric at (" + std::to_string(i + 1) + "," +
                         std::to_string(j + 1) + ")");
      }
      edges[static_cast<std::size_t>(j * n + i)] = upper;
      edges[static_cast<std::size_t>(i * n + j)] = upper;
    }
  }
  return SymmetricBinaryNetwork(n, std::move(edges));
}

std::size_t SymmetricBinaryNetwork::observed_dyads() const {
  std::size_t count = 0;
  for (Eigen::Index j = 1; j < n_; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) count += at(i, j) != Edge::kMissing;
  }
  return count;
}

double SymmetricBinaryNetwork::observed_density() const {
  std::size_t observed = 0;
  std::size_t present = 0;
  for (Eigen::Index j = 1; j < n_; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const Edge e = at(i, j);
      observed += e != Edge::kMissing;
      present += e == Edge::kPresent;
    }
  }
  if (observed == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(present) / static_cast<double>(observed);
}

Matrix SymmetricBinaryNetwork::to_matrix() const {
  Matrix out(n_, n_);
  for (Eigen::Index j = 0; j < n_; ++j) {
    for (Eigen::Index i = 0; i < n_; ++i) {
      const Edge e = at(i, j);
      out(i, j) = e == Edge::kMissing ? std::numeric_limits<double>::quiet_NaN()
                                      : static_cast<double>(static_cast<int>(e));
    }
  }
  return out;
}

}  // namespace stiefel
