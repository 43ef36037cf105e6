#include "stiefel/truncnorm.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>

#include "stiefel/errors.hpp"

namespace stiefel {
namespace {

// Standard normal Z conditioned on Z > a.
double standard_above(double a, Rng& rng) {
  if (a > kTailSwitch) {
    // Exponential proposal shifted to a with the optimal rate (Robert, 1995).
    const double rate = 0.5 * (a + std::sqrt(a * a + 4.0));
    for (;;) {
      const double z = a + rng.exponential() / rate;
      const double diff = z - rate;
      if (std::log(rng.uniform()) <= -0.5 * diff * diff) return z;
    }
  }
  // Invert the upper tail: P(Z > z) = u * P(Z > a).
  const double tail = 0.5 * std::erfc(a / std::sqrt(2.0));
  for (;;) {
    const double twice_q = 2.0 * rng.uniform() * tail;
    if (!(twice_q > 0.0 && twice_q < 2.0)) continue;
    const double z = std::sqrt(2.0) * boost::math::erfc_inv(twice_q);
    if (z > a && std::isfinite(z)) return z;
  }
}

void check_scale(double mean, double sd, double bound) {
  if (!std::isfinite(mean) || !(sd > 0.0) || !std::isfinite(sd) || std::isnan(bound)) {
    throw InputError("truncated normal: mean and sd must be finite with sd > 0");
  }
}

}  // namespace

double sample_normal_above(double mean, double sd, double lower, Rng& rng) {
  check_scale(mean, sd, lower);
  for (;;) {
    const double x = mean + sd * standard_above((lower - mean) / sd, rng);
    if (x > lower) return x;
  }
}

double sample_normal_below(double mean, double sd, double upper, Rng& rng) {
  check_scale(mean, sd, upper);
  for (;;) {
    const double x = mean - sd * standard_above((mean - upper) / sd, rng);
    if (x < upper) return x;
  }
}

}  // namespace stiefel
