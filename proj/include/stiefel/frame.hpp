#pragma once

#include "stiefel/linalg.hpp"
#include "stiefel/rng.hpp"

namespace stiefel {

/// Orthonormality tolerance enforced on every frame: ||U^T U - I||_max.
inline constexpr double kFrameTolerance = 1e-10;

/// An m x R matrix with orthonormal columns, i.e. a point on the Stiefel
/// manifold V_{R,m}. The constraint is checked on construction.
class OrthonormalFrame {
 public:
  /// Throws DimensionError when R > m or a dimension is zero and
  /// ConstraintError when the columns are not orthonormal within `tolerance`.
  explicit OrthonormalFrame(Matrix entries, double tolerance = kFrameTolerance);

  /// First R columns of the m x m identity.
  static OrthonormalFrame identity(Eigen::Index m, Eigen::Index r);

  Eigen::Index rows() const { return entries_.rows(); }
  Eigen::Index cols() const { return entries_.cols(); }
  const Matrix& matrix() const { return entries_; }
  auto col(Eigen::Index j) const { return entries_.col(j); }

  /// ||U^T U - I||_max of the stored entries.
  double error() const { return orthonormality_error(entries_); }

 private:
  Matrix entries_;
};

/// Thin QR with the signs fixed so that diag(R) > 0. The Q factor is
/// continuous in its argument, so applying this to a nearly orthonormal matrix
/// moves it by O(drift).
Matrix orthonormalize(const Matrix& x);

/// Re-orthonormalizes `u` only when its drift exceeds kFrameTolerance.
Matrix reorthonormalize_if_needed(Matrix u);

/// Haar-distributed frame on V_{R,m}: QR of an m x R standard normal matrix
/// with the sign of each column chosen so that diag(R) > 0.
OrthonormalFrame random_uniform_frame(Eigen::Index m, Eigen::Index r, Rng& rng);

/// Orthonormal basis (m x (m - k)) of the orthogonal complement of the span
/// of the k columns of `x`, taken from a full Householder QR. For k = 0 this
/// is the identity.
Matrix null_space_basis(const Matrix& x);

}  // namespace stiefel
