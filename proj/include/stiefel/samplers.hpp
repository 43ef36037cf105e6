#pragma once

#include <cstdint>

#include "stiefel/frame.hpp"
#include "stiefel/linalg.hpp"
#include "stiefel/rng.hpp"

namespace stiefel {

/// Default number of Gibbs sweeps used by sample_mf_matrix() to approximate
/// an independent draw.
inline constexpr int kDefaultMfBurnSweeps = 25;

/// Exact draw from the von Mises-Fisher (Langevin) density ∝ exp(c^T u) on
/// the unit sphere in R^m. Uses Wood's rejection sampler for the component
/// along c/||c|| and a uniform tangent direction. c = 0 gives a uniform draw.
Vector sample_mf_vector(const Vector& c, Rng& rng);

/// Exact draw from the Bingham density ∝ exp(u^T A u) on the unit sphere.
///
/// Rejection sampler with an angular central Gaussian envelope: with
/// Λ = λ_max I - A (so Λ ⪰ 0) in its eigenbasis, propose x = y / ||y|| for
/// y ~ N(0, Ω^{-1}), Ω = I + 2Λ/b, where b solves Σ_i 1 / (b + 2λ_i) = 1, and
/// accept with probability exp(-x^T Λ x) (x^T Ω x)^{m/2} / M(b),
/// M(b) = exp(-(m - b)/2) (m/b)^{m/2}.
Vector sample_bingham_vector(const Matrix& a, Rng& rng);

/// One Gibbs sweep over the columns of `current` targeting the matrix
/// von Mises-Fisher density ∝ etr(C^T U). Column j is redrawn from its full
/// conditional, a vector MF on the unit sphere of the null space of the other
/// columns.
OrthonormalFrame sample_mf_matrix_gibbs(const Matrix& c, const OrthonormalFrame& current, Rng& rng);

/// One Gibbs sweep targeting the matrix Bingham density
/// ∝ etr(diag(B) U^T A U). Column j's full conditional is a vector Bingham
/// with parameter B_j N^T A N on the null space N of the other columns.
///
/// A is first shifted by its smallest diagonal entry. Conditionals do not
/// depend on a multiple of the identity added to A, and with this shift the
/// arithmetic does not either whenever the shift is exactly representable.
OrthonormalFrame sample_bingham_matrix_gibbs(const Matrix& a, const Vector& b,
                                             const OrthonormalFrame& current, Rng& rng);

/// Approximately independent matrix MF draw: `sweeps` Gibbs sweeps started
/// from a uniform frame.
OrthonormalFrame sample_mf_matrix(const Matrix& c, Rng& rng, int sweeps = kDefaultMfBurnSweeps);

/// The current value of a Markov chain on V_{R,m} and the number of sweeps
/// applied to it.
struct GibbsKernelState {
  explicit GibbsKernelState(OrthonormalFrame start) : current(std::move(start)) {}
  OrthonormalFrame current;
  std::uint64_t sweep_count = 0;
};

void sweep_mf(GibbsKernelState& state, const Matrix& c, Rng& rng);
void sweep_bingham(GibbsKernelState& state, const Matrix& a, const Vector& b, Rng& rng);

}  // namespace stiefel
