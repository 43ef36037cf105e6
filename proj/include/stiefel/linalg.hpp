#pragma once

#include <Eigen/Dense>
#include <span>

namespace stiefel {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Column-major storage of a dense matrix as a flat span.
inline std::span<const double> flat(const Matrix& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}
inline std::span<double> flat(Matrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
inline std::span<const double> flat(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

/// max_{i,j} |m(i,j) - m(j,i)|; requires a square matrix.
double asymmetry(const Matrix& m);
/// ||U^T U - I||_max
double orthonormality_error(const Matrix& u);

bool all_finite(const Matrix& m);

/// sum_{i<j} m(i,j) for a square matrix.
double upper_triangle_sum(const Matrix& m);
/// ||a - b||_F^2 through the dispatched kernels.
double squared_frobenius_distance(const Matrix& a, const Matrix& b);
/// Mean squared entrywise difference.
double mean_squared_error(const Matrix& a, const Matrix& b);

}  // namespace stiefel
