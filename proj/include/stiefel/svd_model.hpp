#pragma once

#include <functional>
#include <vector>

#include "stiefel/frame.hpp"
#include "stiefel/linalg.hpp"
#include "stiefel/rng.hpp"

// Bayesian reduced-rank mean estimation for Y = U diag(d) V^T + E with
// i.i.d. normal(0, σ²) noise, uniform priors on U and V, d_j ~ normal(0, τ²),
// 1/τ² ~ gamma(η₀/2, η₀τ₀²/2) and 1/σ² ~ gamma(ν₀/2, ν₀σ₀²/2).

namespace stiefel::svd {

struct HyperParams {
  double nu0 = 1.0;
  double s20 = 1.0;
  double eta0 = 1.0;
  double t20 = 1.0;

  /// Throws InputError unless every value is finite and strictly positive.
  void validate() const;
};

struct ModelState {
  OrthonormalFrame u;  // m x R
  OrthonormalFrame v;  // n x R
  Vector d;
  double sigma2;
  double tau2;

  Eigen::Index rank() const { return d.size(); }
  /// U diag(d) V^T
  Matrix mean_matrix() const;
};

struct SimulatedData {
  Matrix y;
  Matrix m0;
  ModelState truth;  // sigma2 = 1; tau2 is not part of the generator and set to 1
};

/// U0, V0 uniform; d0 = sort(exponential(1) draws, decreasing) * sqrt(mn);
/// Y = U0 diag(d0) V0^T + standard normal noise.
SimulatedData simulate_dataset(Eigen::Index m, Eigen::Index n, Eigen::Index r0, Rng& rng);

/// Top-R singular triplets of Y, σ² = sample variance of the residual
/// entries, τ² = mean(d²).
ModelState mle_init(const Matrix& y, Eigen::Index r);

/// Y V diag(d) / σ²: the parameter of the MF full conditional of U.
Matrix mf_parameter_u(const ModelState& state, const Matrix& y);
/// Y^T U diag(d) / σ²: the parameter of the MF full conditional of V.
Matrix mf_parameter_v(const ModelState& state, const Matrix& y);

struct NormalConditional {
  Vector mean;
  double variance;
};
/// d_j | ... ~ normal(τ² u_j^T Y v_j / (σ² + τ²), τ²σ² / (τ² + σ²)).
NormalConditional d_full_conditional(const ModelState& state, const Matrix& y);

struct GammaConditional {
  double shape;
  double rate;
};
/// 1/σ² | ... ~ gamma((ν₀ + mn)/2, (ν₀σ₀² + ||Y - U D V^T||²)/2).
GammaConditional precision_full_conditional(const ModelState& state, const Matrix& y,
                                            const HyperParams& hyper);
/// 1/τ² | ... ~ gamma((η₀ + R)/2, (η₀τ₀² + Σ d_j²)/2).
GammaConditional d_precision_full_conditional(const ModelState& state, const HyperParams& hyper);

/// One Gibbs sweep of U from MF(Y V D / σ²), starting at the current U.
ModelState update_u(ModelState state, const Matrix& y, Rng& rng);
/// One Gibbs sweep of V from MF(Y^T U D / σ²), starting at the current V.
ModelState update_v(ModelState state, const Matrix& y, Rng& rng);
/// Independent normal draws of every d_j. The result is not re-sorted.
ModelState update_d(ModelState state, const Matrix& y, Rng& rng);
/// σ² then τ², each as the reciprocal of a gamma draw.
ModelState update_variances(ModelState state, const Matrix& y, const HyperParams& hyper, Rng& rng);

struct GibbsResult {
  std::vector<long> saved_iterations;
  Matrix d_trace;  // saved x R, each row sort(|d|) decreasing
  Matrix posterior_mean;
  long saved_count = 0;
  ModelState mle;
  ModelState final_state;
};

/// Called after every iteration with the 1-based iteration number.
using Observer = std::function<void(long iteration, const ModelState&)>;

/// MLE start, then `iters` iterations updating U, V, d, σ², τ² in turn.
/// Every `thin`-th iteration stores sort(|d|) and adds U D V^T to the
/// running sum whose average is the posterior mean.
GibbsResult run_gibbs(const Matrix& y, Eigen::Index r, const HyperParams& hyper, long iters,
                      long thin, Rng& rng, const Observer& observer = {});

/// Best rank-R approximation in Frobenius norm (truncated SVD).
Matrix rank_r_approximation(const Matrix& m, Eigen::Index r);

/// Column means of the saved d trace.
Vector posterior_mean_d(const GibbsResult& result);

}  // namespace stiefel::svd
