#include "stiefel/bmf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "stiefel/errors.hpp"
#include "stiefel/simd.hpp"

namespace stiefel {

void require_symmetric(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw DimensionError(std::string(what) + ": A must be square");
  }
  if (!a.allFinite()) throw InputError(std::string(what) + ": A has non-finite entries");
  if (a.size() > 0 && asymmetry(a) > kSymmetryTolerance) {
    throw InputError(std::string(what) + ": A is not symmetric");
  }
}

BmfParams::BmfParams(Matrix a, Vector b, Matrix c) {
  require_symmetric(a, "BmfParams");
  if (a.rows() != c.rows()) throw DimensionError("BmfParams: A and C row counts differ");
  if (b.size() != c.cols()) throw DimensionError("BmfParams: B length differs from C columns");
  if (c.cols() > c.rows()) throw DimensionError("BmfParams: R exceeds m");
  if (!b.allFinite() || !c.allFinite()) throw InputError("BmfParams: non-finite entries");

  order_.resize(static_cast<std::size_t>(b.size()));
  std::iota(order_.begin(), order_.end(), Eigen::Index{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [&b](Eigen::Index i, Eigen::Index j) { return b(i) > b(j); });

  a_ = std::move(a);
  b_.resize(b.size());
  c_.resize(c.rows(), c.cols());
  for (std::size_t k = 0; k < order_.size(); ++k) {
    const auto idx = static_cast<Eigen::Index>(k);
    b_(idx) = b(order_[k]);
    c_.col(idx) = c.col(order_[k]);
  }
}

VectorBmfParams::VectorBmfParams(Vector c_, Matrix a_) : c(std::move(c_)), a(std::move(a_)) {
  require_symmetric(a, "VectorBmfParams");
  if (a.rows() != c.size()) throw DimensionError("VectorBmfParams: c and A sizes differ");
  if (!c.allFinite()) throw InputError("VectorBmfParams: non-finite c");
}

double bmf_exponent(const Matrix& a, const Vector& b, const Matrix& c, const Matrix& u) {
  if (u.rows() != c.rows() || u.cols() != c.cols() || a.rows() != u.rows() ||
      a.cols() != u.rows() || b.size() != u.cols()) {
    throw DimensionError("bmf_exponent: parameter and frame dimensions differ");
  }
  double value = simd::dot(flat(c), flat(u));
  if (b.size() > 0 && a.size() > 0) {
    const Matrix au = a * u;
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      if (b(j) != 0.0) value += b(j) * u.col(j).dot(au.col(j));
    }
  }
  return value;
}

double log_density_bmf(const BmfParams& params, const OrthonormalFrame& u) {
  return bmf_exponent(params.a(), params.b(), params.c(), u.matrix());
}

double log_density_vector_bmf(const VectorBmfParams& params, const Vector& u) {
  if (u.size() != params.c.size()) throw DimensionError("log_density_vector_bmf: size mismatch");
  if (!(std::abs(u.norm() - 1.0) <= 1e-10)) {
    throw ConstraintError("log_density_vector_bmf: u is not a unit vector");
  }
  return params.c.dot(u) + u.dot(params.a * u);
}

BmfParams canonicalize_bmf(Matrix a, Vector b, Matrix c) {
  return BmfParams(std::move(a), std::move(b), std::move(c));
}

Matrix permute_columns(const Matrix& u, const std::vector<Eigen::Index>& order) {
  if (static_cast<Eigen::Index>(order.size()) != u.cols()) {
    throw DimensionError("permute_columns: order length differs from column count");
  }
  Matrix out(u.rows(), u.cols());
  for (std::size_t k = 0; k < order.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = u.col(order[k]);
  return out;
}

}  // namespace stiefel
