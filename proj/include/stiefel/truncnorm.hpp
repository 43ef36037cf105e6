#pragma once

#include "stiefel/rng.hpp"

namespace stiefel {

/// Standardized truncation point beyond which the exponential-envelope
/// rejection sampler replaces inverse-CDF sampling.
inline constexpr double kTailSwitch = 5.0;

/// Draw from normal(mean, sd^2) restricted to (lower, +inf).
/// The result is always strictly greater than `lower`, even for truncation
/// points many standard deviations into the tail.
double sample_normal_above(double mean, double sd, double lower, Rng& rng);

/// Draw from normal(mean, sd^2) restricted to (-inf, upper); strictly below.
double sample_normal_below(double mean, double sd, double upper, Rng& rng);

}  // namespace stiefel
