#pragma once

#include <vector>

#include "stiefel/frame.hpp"
#include "stiefel/linalg.hpp"

namespace stiefel {

/// Symmetry tolerance for the quadratic parameter A.
inline constexpr double kSymmetryTolerance = 1e-12;

/// Parameters (A, B, C) of the matrix Bingham-von Mises-Fisher density
///   p(U) ∝ etr(C^T U + diag(B) U^T A U)  on V_{R,m}.
///
/// B is kept in non-increasing order. Construction sorts B (stably) and moves
/// the columns of C with it; column_order()[k] is the original index of the
/// k-th stored column. A frame U evaluated under the original parameters has
/// the same density as permute_columns(U, column_order()) under these.
class BmfParams {
 public:
  BmfParams(Matrix a, Vector b, Matrix c);

  const Matrix& a() const { return a_; }
  const Vector& b() const { return b_; }
  const Matrix& c() const { return c_; }
  Eigen::Index rows() const { return c_.rows(); }
  Eigen::Index cols() const { return c_.cols(); }
  const std::vector<Eigen::Index>& column_order() const { return order_; }

 private:
  Matrix a_;
  Vector b_;
  Matrix c_;
  std::vector<Eigen::Index> order_;
};

/// Parameters (c, A) of the vector density p(u) ∝ exp(c^T u + u^T A u).
struct VectorBmfParams {
  VectorBmfParams(Vector c_, Matrix a_);
  Vector c;
  Matrix a;
};

/// The exponent tr(C^T U) + tr(diag(B) U^T A U), with no reordering of B.
double bmf_exponent(const Matrix& a, const Vector& b, const Matrix& c, const Matrix& u);

/// Unnormalized log-density of `u` under `params`.
double log_density_bmf(const BmfParams& params, const OrthonormalFrame& u);

/// c^T u + u^T A u. Throws ConstraintError unless ||u|| = 1 within 1e-10.
double log_density_vector_bmf(const VectorBmfParams& params, const Vector& u);

/// Same distribution with B sorted non-increasingly; see BmfParams.
BmfParams canonicalize_bmf(Matrix a, Vector b, Matrix c);

/// Columns of `u` reordered so that column k of the result is u.col(order[k]).
Matrix permute_columns(const Matrix& u, const std::vector<Eigen::Index>& order);

/// Throws InputError unless `a` is square, finite and symmetric within
/// kSymmetryTolerance. `what` prefixes the message.
void require_symmetric(const Matrix& a, const char* what);

}  // namespace stiefel
