#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stiefel/linalg.hpp"

namespace stiefel {

enum class Edge : std::int8_t { kAbsent = 0, kPresent = 1, kMissing = -1 };

/// Undirected binary network on n nodes with possibly missing dyads. The
/// diagonal is always missing.
class SymmetricBinaryNetwork {
 public:
  /// Entries are 0, 1 or NaN (missing). The diagonal is ignored. Throws
  /// InputError naming the first offending (i, j), 1-based, when the matrix
  /// is not symmetric or holds any other value.
  static SymmetricBinaryNetwork from_matrix(const Matrix& y);

  Eigen::Index size() const { return n_; }
  Edge at(Eigen::Index i, Eigen::Index j) const {
    return edges_[static_cast<std::size_t>(j * n_ + i)];
  }
  /// Fraction of observed off-diagonal dyads that are edges; NaN if none
  /// are observed.
  double observed_density() const;
  std::size_t observed_dyads() const;
  /// 0/1 with NaN for missing entries and the diagonal.
  Matrix to_matrix() const;

 private:
  SymmetricBinaryNetwork(Eigen::Index n, std::vector<Edge> edges)
      : n_(n), edges_(std::move(edges)) {}
  Eigen::Index n_;
  std::vector<Edge> edges_;
};

/// Per-node binary covariates, NaN for missing. Carried through to output
/// for annotation only.
struct NodeCovariates {
  std::vector<std::string> names;
  Matrix values;  // n x p
};

}  // namespace stiefel
