#include "stiefel/frame.hpp"

#include <cmath>
#include <string>

#include "stiefel/errors.hpp"
#include "stiefel/simd.hpp"

namespace stiefel {

double asymmetry(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("asymmetry: matrix is not square");
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

double orthonormality_error(const Matrix& u) {
  if (u.cols() == 0) return 0.0;
  const Matrix gram = u.transpose() * u;
  return (gram - Matrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

double upper_triangle_sum(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("upper_triangle_sum: matrix is not square");
  double total = 0.0;
  // Column j holds the strictly-upper entries m(0..j-1, j) contiguously.
  for (Eigen::Index j = 1; j < m.cols(); ++j) {
    total += simd::sum({m.data() + j * m.rows(), static_cast<std::size_t>(j)});
  }
  return total;
}

double squared_frobenius_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("squared_frobenius_distance: shapes differ");
  }
  return simd::squared_distance(flat(a), flat(b));
}

double mean_squared_error(const Matrix& a, const Matrix& b) {
  if (a.size() == 0) throw DimensionError("mean_squared_error: empty matrix");
  return squared_frobenius_distance(a, b) / static_cast<double>(a.size());
}

OrthonormalFrame::OrthonormalFrame(Matrix entries, double tolerance) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.cols() < 1) {
    throw DimensionError("OrthonormalFrame: dimensions must be positive");
  }
  if (entries_.cols() > entries_.rows()) {
    throw DimensionError("OrthonormalFrame: R = " + std::to_string(entries_.cols()) +
                         " exceeds m = " + std::to_string(entries_.rows()));
  }
  if (!entries_.allFinite()) throw InputError("OrthonormalFrame: non-finite entries");
  const double err = orthonormality_error(entries_);
  if (!(err <= tolerance)) {
    throw ConstraintError("OrthonormalFrame: ||U^T U - I||_max = " + std::to_string(err) +
                          " exceeds tolerance");
  }
}

OrthonormalFrame OrthonormalFrame::identity(Eigen::Index m, Eigen::Index r) {
  return OrthonormalFrame(Matrix::Identity(m, r));
}

Matrix orthonormalize(const Matrix& x) {
  const Eigen::Index m = x.rows();
  const Eigen::Index r = x.cols();
  Eigen::HouseholderQR<Matrix> qr(x);
  Matrix q = qr.householderQ() * Matrix::Identity(m, r);
  const Matrix& packed = qr.matrixQR();
  for (Eigen::Index j = 0; j < r; ++j) {
    if (packed(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

Matrix reorthonormalize_if_needed(Matrix u) {
  if (orthonormality_error(u) > kFrameTolerance) return orthonormalize(u);
  return u;
}

OrthonormalFrame random_uniform_frame(Eigen::Index m, Eigen::Index r, Rng& rng) {
  if (m < 1 || r < 1) throw DimensionError("random_uniform_frame: dimensions must be positive");
  if (r > m) throw DimensionError("random_uniform_frame: R exceeds m");
  Matrix g(m, r);
  for (Eigen::Index j = 0; j < r; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) g(i, j) = rng.normal();
  }
  return OrthonormalFrame(orthonormalize(g));
}

Matrix null_space_basis(const Matrix& x) {
  const Eigen::Index m = x.rows();
  const Eigen::Index k = x.cols();
  if (k > m) throw DimensionError("null_space_basis: more columns than rows");
  if (k == 0) return Matrix::Identity(m, m);
  Eigen::HouseholderQR<Matrix> qr(x);
  const Matrix q = qr.householderQ();
  return q.rightCols(m - k);
}

}  // namespace stiefel
