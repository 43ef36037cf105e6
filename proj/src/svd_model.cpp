#include "stiefel/svd_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "stiefel/errors.hpp"
#include "stiefel/samplers.hpp"
#include "stiefel/simd.hpp"

namespace stiefel::svd {
namespace {

void check_rank(Eigen::Index m, Eigen::Index n, Eigen::Index r, const char* what) {
  if (m < 1 || n < 1) throw DimensionError(std::string(what) + ": empty data matrix");
  if (r < 1 || r > std::min(m, n)) {
    throw DimensionError(std::string(what) + ": rank " + std::to_string(r) +
                         " must lie in [1, min(m, n)] = [1, " + std::to_string(std::min(m, n)) +
                         "]");
  }
}

void check_state(const ModelState& state, const Matrix& y) {
  if (state.u.rows() != y.rows() || state.v.rows() != y.cols() ||
      state.u.cols() != state.d.size() || state.v.cols() != state.d.size()) {
    throw DimensionError("svd model: state dimensions do not match the data");
  }
}

Eigen::BDCSVD<Matrix> thin_svd(const Matrix& m) {
  return Eigen::BDCSVD<Matrix>(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

}  // namespace

void HyperParams::validate() const {
  for (double v : {nu0, s20, eta0, t20}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InputError("svd hyperparameters must be finite and strictly positive");
    }
  }
}

Matrix ModelState::mean_matrix() const { return u.matrix() * d.asDiagonal() * v.matrix().transpose(); }

SimulatedData simulate_dataset(Eigen::Index m, Eigen::Index n, Eigen::Index r0, Rng& rng) {
  check_rank(m, n, r0, "simulate_dataset");
  OrthonormalFrame u0 = random_uniform_frame(m, r0, rng);
  OrthonormalFrame v0 = random_uniform_frame(n, r0, rng);
  Vector d0(r0);
  for (Eigen::Index j = 0; j < r0; ++j) d0(j) = rng.exponential();
  std::sort(d0.data(), d0.data() + r0, std::greater<>());
  d0 *= std::sqrt(static_cast<double>(m * n));

  ModelState truth{std::move(u0), std::move(v0), d0, 1.0, 1.0};
  Matrix m0 = truth.mean_matrix();
  Matrix y = m0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) y(i, j) += rng.normal();
  }
  return {std::move(y), std::move(m0), std::move(truth)};
}

ModelState mle_init(const Matrix& y, Eigen::Index r) {
  check_rank(y.rows(), y.cols(), r, "mle_init");
  if (!y.allFinite()) throw InputError("mle_init: data has non-finite entries");
  const auto svd = thin_svd(y);
  OrthonormalFrame u(reorthonormalize_if_needed(svd.matrixU().leftCols(r)));
  OrthonormalFrame v(reorthonormalize_if_needed(svd.matrixV().leftCols(r)));
  Vector d = svd.singularValues().head(r);

  const Matrix fit = u.matrix() * d.asDiagonal() * v.matrix().transpose();
  const double count = static_cast<double>(y.size());
  const Matrix resid = y - fit;
  const double mean = simd::sum(flat(resid)) / count;
  double sigma2 = 0.0;
  if (y.size() > 1) {
    const Matrix centered = (resid.array() - mean).matrix();
    sigma2 = simd::dot(flat(centered), flat(centered)) / (count - 1.0);
  }
  const double tau2 = d.squaredNorm() / static_cast<double>(r);
  // An exact rank-R fit leaves sigma2 at rounding level; keep it positive so
  // the chain can start.
  sigma2 = std::max(sigma2, std::numeric_limits<double>::min());
  return {std::move(u), std::move(v), std::move(d), sigma2, std::max(tau2, std::numeric_limits<double>::min())};
}

Matrix mf_parameter_u(const ModelState& state, const Matrix& y) {
  check_state(state, y);
  return (y * state.v.matrix()) * state.d.asDiagonal() * (1.0 / state.sigma2);
}

Matrix mf_parameter_v(const ModelState& state, const Matrix& y) {
  check_state(state, y);
  return (y.transpose() * state.u.matrix()) * state.d.asDiagonal() * (1.0 / state.sigma2);
}

NormalConditional d_full_conditional(const ModelState& state, const Matrix& y) {
  check_state(state, y);
  const double s2 = state.sigma2;
  const double t2 = state.tau2;
  const Matrix proj = state.u.matrix().transpose() * y * state.v.matrix();
  Vector mean = (t2 / (s2 + t2)) * proj.diagonal();
  return {std::move(mean), t2 * s2 / (t2 + s2)};
}

GammaConditional precision_full_conditional(const ModelState& state, const Matrix& y,
                                            const HyperParams& hyper) {
  check_state(state, y);
  const double rss = squared_frobenius_distance(y, state.mean_matrix());
  const double mn = static_cast<double>(y.rows()) * static_cast<double>(y.cols());
  return {0.5 * (hyper.nu0 + mn), 0.5 * (hyper.nu0 * hyper.s20 + rss)};
}

GammaConditional d_precision_full_conditional(const ModelState& state, const HyperParams& hyper) {
  const double r = static_cast<double>(state.rank());
  return {0.5 * (hyper.eta0 + r), 0.5 * (hyper.eta0 * hyper.t20 + state.d.squaredNorm())};
}

ModelState update_u(ModelState state, const Matrix& y, Rng& rng) {
  const Matrix c = mf_parameter_u(state, y);
  state.u = sample_mf_matrix_gibbs(c, state.u, rng);
  return state;
}

ModelState update_v(ModelState state, const Matrix& y, Rng& rng) {
  const Matrix c = mf_parameter_v(state, y);
  state.v = sample_mf_matrix_gibbs(c, state.v, rng);
  return state;
}

ModelState update_d(ModelState state, const Matrix& y, Rng& rng) {
  const NormalConditional cond = d_full_conditional(state, y);
  const double sd = std::sqrt(cond.variance);
  for (Eigen::Index j = 0; j < state.d.size(); ++j) state.d(j) = rng.normal(cond.mean(j), sd);
  return state;
}

ModelState update_variances(ModelState state, const Matrix& y, const HyperParams& hyper, Rng& rng) {
  const GammaConditional s = precision_full_conditional(state, y, hyper);
  state.sigma2 = 1.0 / rng.gamma(s.shape, s.rate);
  const GammaConditional t = d_precision_full_conditional(state, hyper);
  state.tau2 = 1.0 / rng.gamma(t.shape, t.rate);
  return state;
}

GibbsResult run_gibbs(const Matrix& y, Eigen::Index r, const HyperParams& hyper, long iters, long thin,
                      Rng& rng, const Observer& observer) {
  hyper.validate();
  if (thin < 1 || iters < thin) throw InputError("run_gibbs: require iters >= thin >= 1");
  ModelState state = mle_init(y, r);

  GibbsResult result{{}, Matrix(iters / thin, r), Matrix::Zero(y.rows(), y.cols()), 0, state, state};
  for (long s = 1; s <= iters; ++s) {
    state = update_u(std::move(state), y, rng);
    state = update_v(std::move(state), y, rng);
    state = update_d(std::move(state), y, rng);
    state = update_variances(std::move(state), y, hyper, rng);

    if (s % thin == 0) {
      Vector sorted = state.d.cwiseAbs();
      std::sort(sorted.data(), sorted.data() + sorted.size(), std::greater<>());
      result.d_trace.row(result.saved_count) = sorted.transpose();
      const Matrix m = state.mean_matrix();
      simd::axpy(1.0, flat(m), flat(result.posterior_mean));
      result.saved_iterations.push_back(s);
      ++result.saved_count;
    }
    if (observer) observer(s, state);
  }
  result.posterior_mean /= static_cast<double>(result.saved_count);
  result.final_state = std::move(state);
  return result;
}

Matrix rank_r_approximation(const Matrix& m, Eigen::Index r) {
  check_rank(m.rows(), m.cols(), r, "rank_r_approximation");
  const auto svd = thin_svd(m);
  return svd.matrixU().leftCols(r) * svd.singularValues().head(r).asDiagonal() *
         svd.matrixV().leftCols(r).transpose();
}

Vector posterior_mean_d(const GibbsResult& result) {
  if (result.saved_count == 0) throw InputError("posterior_mean_d: empty trace");
  return result.d_trace.colwise().mean().transpose();
}

}  // namespace stiefel::svd
