#pragma once

#include <functional>
#include <vector>

#include "stiefel/frame.hpp"
#include "stiefel/linalg.hpp"
#include "stiefel/network.hpp"
#include "stiefel/rng.hpp"

// Probit eigenmodel for a symmetric binary network:
//   z_ij = θ + u_i^T Λ u_j + ε_ij,   y_ij = 1(z_ij > 0),
// with ε_ij = ε_ji ~ normal(0, 1), Λ = diag(λ), U uniform on V_{R,n},
// θ ~ normal(0, τ²_θ) and λ_r ~ normal(0, τ²_λ). The unobserved diagonal of Z
// has variance 2 and is integrated over by the sampler.

namespace stiefel::eigen {

struct HyperParams {
  double t2_lambda;
  double t2_theta = 100.0;
  Eigen::Index rank = 2;

  /// Defaults used for an n-node network: τ²_λ = n, τ²_θ = 100, R = 2.
  static HyperParams defaults_for(Eigen::Index n) { return {static_cast<double>(n)}; }
  void validate(Eigen::Index n) const;
};

struct ModelState {
  Matrix z;
  OrthonormalFrame u;
  Vector lambda;
  double theta;
};

/// θ 11^T + U diag(λ) U^T
Matrix latent_mean(double theta, const OrthonormalFrame& u, const Vector& lambda);

/// Z | Y, mean. Off-diagonal z_ij ~ normal(mean_ij, 1), truncated to (0, ∞)
/// for an edge, to (-∞, 0) for a non-edge and untruncated when missing;
/// z_ji = z_ij. Diagonal z_ii ~ normal(mean_ii, 2).
Matrix sample_z(const SymmetricBinaryNetwork& y, const Matrix& mean, Rng& rng);

/// Observed dyads whose latent value has the wrong sign (or is zero).
std::size_t count_sign_violations(const SymmetricBinaryNetwork& y, const Matrix& z);

struct ThetaConditional {
  double mean;
  double variance;
};
/// v = 1 / (1/τ²_θ + n(n-1)/2), e = v Σ_{i<j} (Z - U Λ U^T)_ij.
ThetaConditional theta_full_conditional(const ModelState& state, const HyperParams& hyper);
double update_theta(const ModelState& state, const HyperParams& hyper, Rng& rng);

struct LambdaConditional {
  Vector mean;
  double variance;
};
/// With E = Z - θ 11^T: v = 2τ²_λ / (2 + τ²_λ), e_r = v u_r^T E u_r / 2.
LambdaConditional lambda_full_conditional(const ModelState& state, const HyperParams& hyper);
Vector update_lambda(const ModelState& state, const HyperParams& hyper, Rng& rng);

/// (Z - θ 11^T) / 2, the quadratic parameter of U's Bingham full conditional.
Matrix bingham_parameter(const Matrix& z, double theta);
/// One Gibbs sweep of U from Bingham((Z - θ11^T)/2, Λ) started at the current U.
OrthonormalFrame update_u(const ModelState& state, Rng& rng);

struct GibbsResult {
  std::vector<long> saved_iterations;
  Matrix lambda_trace;  // saved x R, each row sorted non-decreasing
  Vector theta_trace;
  Matrix m_bar;  // posterior mean of U Λ U^T
  long saved_count = 0;
  ModelState final_state;
};

using Observer = std::function<void(long iteration, const ModelState&)>;

/// Starts from θ = Φ^{-1}(observed density), λ = 0 and a uniform U, then
/// for each iteration samples Z, θ, λ and U in that order. After `burn`
/// iterations every `thin`-th one records sort(λ), θ and adds U Λ U^T to the
/// running sum. `observer` sees the state after every iteration.
GibbsResult run_gibbs(const SymmetricBinaryNetwork& y, const HyperParams& hyper, long iters,
                      long burn, long thin, Rng& rng, const Observer& observer = {});

struct LatentPositions {
  Matrix positions;  // n x R unit-norm eigenvectors
  Vector eigenvalues;
  /// positions scaled column-wise by sqrt(|eigenvalue|), for plotting
  Matrix scaled() const;
};

/// The R eigenpairs of a symmetric matrix with the largest |eigenvalue|,
/// ordered by decreasing |eigenvalue|. Each eigenvector's first coordinate
/// that is nonzero (|x| > 1e-12) is made positive.
LatentPositions latent_positions(const Matrix& m_bar, Eigen::Index r);

/// Network drawn from the model with the given parameters.
SymmetricBinaryNetwork simulate_network(double theta, const Vector& lambda, const OrthonormalFrame& u,
                                        Rng& rng);

}  // namespace stiefel::eigen
