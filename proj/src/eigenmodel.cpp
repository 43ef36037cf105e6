#include "stiefel/eigenmodel.hpp"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "stiefel/errors.hpp"
#include "stiefel/samplers.hpp"
#include "stiefel/simd.hpp"
#include "stiefel/truncnorm.hpp"

namespace stiefel::eigen {
namespace {

const double kDiagonalSd = std::sqrt(2.0);

void check_state(const ModelState& state) {
  const Eigen::Index n = state.z.rows();
  if (state.z.cols() != n || state.u.rows() != n || state.u.cols() != state.lambda.size()) {
    throw DimensionError("eigenmodel: state dimensions are inconsistent");
  }
}

double probit(double p) { return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p); }

// Probit of the observed edge density, clamped half a dyad away from 0 and 1
// so that an empty or complete network still gives a finite start.
double initial_theta(const SymmetricBinaryNetwork& y) {
  const std::size_t observed = y.observed_dyads();
  if (observed == 0) return 0.0;
  const double half = 0.5 / static_cast<double>(observed);
  return probit(std::clamp(y.observed_density(), half, 1.0 - half));
}

}  // namespace

void HyperParams::validate(Eigen::Index n) const {
  if (!(t2_lambda > 0.0) || !std::isfinite(t2_lambda) || !(t2_theta > 0.0) ||
      !std::isfinite(t2_theta)) {
    throw InputError("eigenmodel hyperparameters must be finite and strictly positive");
  }
  if (rank < 1 || rank > n) {
    throw DimensionError("eigenmodel: rank " + std::to_string(rank) + " must lie in [1, n = " +
                         std::to_string(n) + "]");
  }
}

Matrix latent_mean(double theta, const OrthonormalFrame& u, const Vector& lambda) {
  if (u.cols() != lambda.size()) throw DimensionError("latent_mean: rank mismatch");
  const Matrix& um = u.matrix();
  Matrix mean = um * lambda.asDiagonal() * um.transpose();
  mean = 0.5 * (mean + mean.transpose()).eval();
  mean.array() += theta;
  return mean;
}

Matrix sample_z(const SymmetricBinaryNetwork& y, const Matrix& mean, Rng& rng) {
  const Eigen::Index n = y.size();
  if (mean.rows() != n || mean.cols() != n) {
    throw DimensionError("sample_z: mean is not " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (!mean.allFinite()) throw InputError("sample_z: mean has non-finite entries");
  const double scale = std::max(1.0, mean.cwiseAbs().maxCoeff());
  if (asymmetry(mean) > 1e-12 * scale) throw InputError("sample_z: mean is not symmetric");

  Matrix z(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double mu = mean(i, j);
      double value = 0.0;
      switch (y.at(i, j)) {
        case Edge::kPresent:
          value = sample_normal_above(mu, 1.0, 0.0, rng);
          break;
        case Edge::kAbsent:
          value = sample_normal_below(mu, 1.0, 0.0, rng);
          break;
        case Edge::kMissing:
          value = rng.normal(mu, 1.0);
          break;
      }
      z(i, j) = value;
      z(j, i) = value;
    }
    z(j, j) = rng.normal(mean(j, j), kDiagonalSd);
  }
  return z;
}

std::size_t count_sign_violations(const SymmetricBinaryNetwork& y, const Matrix& z) {
  std::size_t bad = 0;
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (i == j) continue;
      const Edge e = y.at(i, j);
      if (e == Edge::kPresent && !(z(i, j) > 0.0)) ++bad;
      if (e == Edge::kAbsent && !(z(i, j) < 0.0)) ++bad;
    }
  }
  return bad;
}

ThetaConditional theta_full_conditional(const ModelState& state, const HyperParams& hyper) {
  check_state(state);
  const double n = static_cast<double>(state.z.rows());
  const double variance = 1.0 / (1.0 / hyper.t2_theta + 0.5 * n * (n - 1.0));
  const Matrix& um = state.u.matrix();
  const Matrix resid = state.z - um * state.lambda.asDiagonal() * um.transpose();
  return {variance * upper_triangle_sum(resid), variance};
}

double update_theta(const ModelState& state, const HyperParams& hyper, Rng& rng) {
  const ThetaConditional cond = theta_full_conditional(state, hyper);
  return rng.normal(cond.mean, std::sqrt(cond.variance));
}

LambdaConditional lambda_full_conditional(const ModelState& state, const HyperParams& hyper) {
  check_state(state);
  const double variance = 2.0 * hyper.t2_lambda / (2.0 + hyper.t2_lambda);
  const Matrix& um = state.u.matrix();
  const Matrix e = (state.z.array() - state.theta).matrix();
  const Matrix eu = e * um;
  Vector mean(um.cols());
  for (Eigen::Index r = 0; r < um.cols(); ++r) {
    mean(r) = variance * simd::dot({um.col(r).data(), static_cast<std::size_t>(um.rows())},
                                   {eu.col(r).data(), static_cast<std::size_t>(eu.rows())}) /
              2.0;
  }
  return {std::move(mean), variance};
}

Vector update_lambda(const ModelState& state, const HyperParams& hyper, Rng& rng) {
  const LambdaConditional cond = lambda_full_conditional(state, hyper);
  const double sd = std::sqrt(cond.variance);
  Vector out(cond.mean.size());
  for (Eigen::Index r = 0; r < out.size(); ++r) out(r) = rng.normal(cond.mean(r), sd);
  return out;
}

Matrix bingham_parameter(const Matrix& z, double theta) { return (z.array() - theta).matrix() / 2.0; }

OrthonormalFrame update_u(const ModelState& state, Rng& rng) {
  check_state(state);
  return sample_bingham_matrix_gibbs(bingham_parameter(state.z, state.theta), state.lambda, state.u,
                                     rng);
}

GibbsResult run_gibbs(const SymmetricBinaryNetwork& y, const HyperParams& hyper, long iters, long burn,
                      long thin, Rng& rng, const Observer& observer) {
  const Eigen::Index n = y.size();
  hyper.validate(n);
  if (burn < 0 || iters <= burn || thin < 1) {
    throw InputError("eigenmodel run: require iters > burn >= 0 and thin >= 1");
  }
  const Eigen::Index r = hyper.rank;

  ModelState state{Matrix::Zero(n, n), random_uniform_frame(n, r, rng), Vector::Zero(r),
                   initial_theta(y)};

  const long expected = iters / thin - burn / thin;
  GibbsResult result{{}, Matrix(expected, r), Vector(expected), Matrix::Zero(n, n), 0, state};
  for (long s = 1; s <= iters; ++s) {
    state.z = sample_z(y, latent_mean(state.theta, state.u, state.lambda), rng);
    state.theta = update_theta(state, hyper, rng);
    state.lambda = update_lambda(state, hyper, rng);
    state.u = update_u(state, rng);

    if (s > burn && s % thin == 0) {
      Vector sorted = state.lambda;
      std::sort(sorted.data(), sorted.data() + sorted.size());
      result.lambda_trace.row(result.saved_count) = sorted.transpose();
      result.theta_trace(result.saved_count) = state.theta;
      const Matrix& um = state.u.matrix();
      const Matrix ulu = um * state.lambda.asDiagonal() * um.transpose();
      simd::axpy(1.0, flat(ulu), flat(result.m_bar));
      result.saved_iterations.push_back(s);
      ++result.saved_count;
    }
    if (observer) observer(s, state);
  }
  result.m_bar /= static_cast<double>(result.saved_count);
  result.m_bar = 0.5 * (result.m_bar + result.m_bar.transpose()).eval();
  result.final_state = std::move(state);
  return result;
}

Matrix LatentPositions::scaled() const {
  return positions * eigenvalues.cwiseAbs().cwiseSqrt().asDiagonal();
}

LatentPositions latent_positions(const Matrix& m_bar, Eigen::Index r) {
  if (m_bar.rows() != m_bar.cols()) throw DimensionError("latent_positions: matrix is not square");
  if (r < 1 || r > m_bar.rows()) throw DimensionError("latent_positions: rank out of range");
  if (!m_bar.allFinite()) throw InputError("latent_positions: non-finite entries");
  const double scale = std::max(1.0, m_bar.cwiseAbs().maxCoeff());
  if (asymmetry(m_bar) > 1e-10 * scale) throw InputError("latent_positions: matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m_bar + m_bar.transpose()));
  if (eig.info() != Eigen::Success) throw InputError("latent_positions: eigensolver failed");
  const Vector& values = eig.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&values](Eigen::Index a, Eigen::Index b) {
    return std::abs(values(a)) > std::abs(values(b));
  });

  LatentPositions out{Matrix(m_bar.rows(), r), Vector(r)};
  for (Eigen::Index k = 0; k < r; ++k) {
    const Eigen::Index idx = order[static_cast<std::size_t>(k)];
    Vector vec = eig.eigenvectors().col(idx);
    for (Eigen::Index i = 0; i < vec.size(); ++i) {
      if (std::abs(vec(i)) > 1e-12) {
        if (vec(i) < 0.0) vec = -vec;
        break;
      }
    }
    out.positions.col(k) = vec;
    out.eigenvalues(k) = values(idx);
  }
  return out;
}

SymmetricBinaryNetwork simulate_network(double theta, const Vector& lambda, const OrthonormalFrame& u,
                                        Rng& rng) {
  const Matrix mean = latent_mean(theta, u, lambda);
  const Eigen::Index n = u.rows();
  Matrix y = Matrix::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double edge = mean(i, j) + rng.normal() > 0.0 ? 1.0 : 0.0;
      y(i, j) = edge;
      y(j, i) = edge;
    }
  }
  return SymmetricBinaryNetwork::from_matrix(y);
}

}  // namespace stiefel::eigen
