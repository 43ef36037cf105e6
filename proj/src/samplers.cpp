#include "stiefel/samplers.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <utility>

#include "stiefel/bmf.hpp"
#include "stiefel/errors.hpp"

namespace stiefel {
namespace {

// Rejection loops give up after this many proposals. At the concentrations
// the samplers are used for the acceptance rate is far above 1e-6.
constexpr std::uint64_t kMaxProposals = 100'000'000;

Vector uniform_on_sphere(Eigen::Index m, Rng& rng) {
  Vector v(m);
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < m; ++i) v(i) = rng.normal();
    norm = v.norm();
  } while (norm == 0.0);
  return v / norm;
}

// Unit vector orthogonal to the unit vector mu, uniform on that great sphere.
Vector uniform_tangent(const Vector& mu, Rng& rng) {
  Vector v(mu.size());
  for (;;) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
    v -= v.dot(mu) * mu;
    const double norm = v.norm();
    if (norm > 1e-8) return v / norm;
  }
}

// Component w = u^T mu of a Langevin draw on S^{m-1} with concentration
// kappa > 0 (Wood, 1994).
double sample_wood_component(double kappa, Eigen::Index m, Rng& rng) {
  const double d = static_cast<double>(m - 1);
  const double b = d / (2.0 * kappa + std::sqrt(4.0 * kappa * kappa + d * d));
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c0 = kappa * x0 + d * std::log1p(-x0 * x0);
  for (std::uint64_t attempt = 0; attempt < kMaxProposals; ++attempt) {
    const double z = rng.beta(0.5 * d, 0.5 * d);
    const double w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    const double log_u = std::log(rng.uniform());
    if (kappa * w + d * std::log1p(-x0 * w) - c0 >= log_u) return w;
  }
  throw Error("sample_mf_vector: rejection sampler did not terminate");
}

void check_frame_shape(const Matrix& param, const OrthonormalFrame& current, const char* what) {
  if (param.rows() != current.rows() || param.cols() != current.cols()) {
    throw DimensionError(std::string(what) + ": parameter is " + std::to_string(param.rows()) + "x" +
                         std::to_string(param.cols()) + " but the frame is " +
                         std::to_string(current.rows()) + "x" + std::to_string(current.cols()));
  }
}

// Columns of u other than j.
Matrix other_columns(const Matrix& u, Eigen::Index j) {
  Matrix out(u.rows(), u.cols() - 1);
  for (Eigen::Index k = 0, col = 0; k < u.cols(); ++k) {
    if (k != j) out.col(col++) = u.col(k);
  }
  return out;
}

}  // namespace

Vector sample_mf_vector(const Vector& c, Rng& rng) {
  const Eigen::Index m = c.size();
  if (m < 1) throw DimensionError("sample_mf_vector: empty parameter");
  if (!c.allFinite()) throw InputError("sample_mf_vector: non-finite parameter");
  const double kappa = c.norm();
  if (kappa == 0.0) return uniform_on_sphere(m, rng);
  if (m == 1) {
    // S^0 = {-1, +1} with P(+1) = e^c / (e^c + e^-c).
    const double p_plus = 1.0 / (1.0 + std::exp(-2.0 * c(0)));
    Vector u(1);
    u(0) = rng.uniform() < p_plus ? 1.0 : -1.0;
    return u;
  }
  const Vector mu = c / kappa;
  const double w = sample_wood_component(kappa, m, rng);
  Vector u = w * mu + std::sqrt(std::max(0.0, 1.0 - w * w)) * uniform_tangent(mu, rng);
  return u / u.norm();
}

Vector sample_bingham_vector(const Matrix& a, Rng& rng) {
  require_symmetric(a, "sample_bingham_vector");
  const Eigen::Index m = a.rows();
  if (m < 1) throw DimensionError("sample_bingham_vector: empty parameter");
  if (m == 1) {
    Vector u(1);
    u(0) = rng.sign();
    return u;
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  if (eig.info() != Eigen::Success) throw InputError("sample_bingham_vector: eigensolver failed");
  const Vector& values = eig.eigenvalues();  // ascending
  const double top = values(m - 1);
  // Density exp(-x^T L x) in the eigenbasis, L = diag(top - values) >= 0.
  const Vector lam = (top - values.array()).max(0.0).matrix();
  if (lam.maxCoeff() == 0.0) return uniform_on_sphere(m, rng);

  const double md = static_cast<double>(m);
  auto envelope_equation = [&lam](double b) { return (1.0 / (b + 2.0 * lam.array())).sum() - 1.0; };
  // lam contains a zero, so the root lies in (0, m].
  double b = md;
  if (envelope_equation(md) < 0.0) {
    double lo = 1e-300;
    double hi = md;
    std::uintmax_t iters = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        envelope_equation, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
    b = 0.5 * (bracket.first + bracket.second);
  }
  const Vector omega = (1.0 + 2.0 * lam.array() / b).matrix();
  const Vector inv_sd = omega.cwiseSqrt().cwiseInverse();
  const double log_bound = -0.5 * (md - b) + 0.5 * md * std::log(md / b);

  Vector y(m);
  for (std::uint64_t attempt = 0; attempt < kMaxProposals; ++attempt) {
    for (Eigen::Index i = 0; i < m; ++i) y(i) = rng.normal() * inv_sd(i);
    const double norm2 = y.squaredNorm();
    if (norm2 == 0.0) continue;
    const Vector x2 = y.array().square() / norm2;
    const double quad = lam.dot(x2);
    const double envelope = omega.dot(x2);
    const double log_ratio = -quad + 0.5 * md * std::log(envelope) - log_bound;
    if (std::log(rng.uniform()) < log_ratio) {
      Vector u = eig.eigenvectors() * (y / std::sqrt(norm2));
      return u / u.norm();
    }
  }
  throw Error("sample_bingham_vector: rejection sampler did not terminate");
}

OrthonormalFrame sample_mf_matrix_gibbs(const Matrix& c, const OrthonormalFrame& current, Rng& rng) {
  check_frame_shape(c, current, "sample_mf_matrix_gibbs");
  if (!c.allFinite()) throw InputError("sample_mf_matrix_gibbs: non-finite parameter");
  Matrix u = current.matrix();
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    const Matrix basis = null_space_basis(other_columns(u, j));
    const Vector z = sample_mf_vector(basis.transpose() * c.col(j), rng);
    u.col(j) = basis * z;
  }
  return OrthonormalFrame(reorthonormalize_if_needed(std::move(u)));
}

OrthonormalFrame sample_bingham_matrix_gibbs(const Matrix& a, const Vector& b,
                                             const OrthonormalFrame& current, Rng& rng) {
  require_symmetric(a, "sample_bingham_matrix_gibbs");
  if (a.rows() != current.rows()) {
    throw DimensionError("sample_bingham_matrix_gibbs: A does not match the frame rows");
  }
  if (b.size() != current.cols()) {
    throw DimensionError("sample_bingham_matrix_gibbs: B length does not match the frame columns");
  }
  if (!b.allFinite()) throw InputError("sample_bingham_matrix_gibbs: non-finite B");

  Matrix shifted = a;
  shifted.diagonal().array() -= a.diagonal().minCoeff();

  Matrix u = current.matrix();
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    const Matrix basis = null_space_basis(other_columns(u, j));
    Vector z;
    if (b(j) == 0.0) {
      z = uniform_on_sphere(basis.cols(), rng);
    } else {
      Matrix k = b(j) * (basis.transpose() * shifted * basis);
      k = 0.5 * (k + k.transpose()).eval();
      z = sample_bingham_vector(k, rng);
    }
    u.col(j) = basis * z;
  }
  return OrthonormalFrame(reorthonormalize_if_needed(std::move(u)));
}

OrthonormalFrame sample_mf_matrix(const Matrix& c, Rng& rng, int sweeps) {
  if (sweeps < 1) throw InputError("sample_mf_matrix: sweeps must be positive");
  OrthonormalFrame u = random_uniform_frame(c.rows(), c.cols(), rng);
  for (int s = 0; s < sweeps; ++s) u = sample_mf_matrix_gibbs(c, u, rng);
  return u;
}

void sweep_mf(GibbsKernelState& state, const Matrix& c, Rng& rng) {
  state.current = sample_mf_matrix_gibbs(c, state.current, rng);
  ++state.sweep_count;
}

void sweep_bingham(GibbsKernelState& state, const Matrix& a, const Vector& b, Rng& rng) {
  state.current = sample_bingham_matrix_gibbs(a, b, state.current, rng);
  ++state.sweep_count;
}

}  // namespace stiefel
