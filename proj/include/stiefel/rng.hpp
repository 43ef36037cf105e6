#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace stiefel {

/// Seeded random stream used by every sampler.
///
/// A stream owns its engine and its distribution state, so two streams built
/// from the same seed produce identical sequences. Independent streams for
/// separate chains or modules come from split(), which hashes a label into a
/// fresh seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  /// Derived stream for a labelled purpose ("chain-2", "data", ...).
  Rng split(std::string_view label) const;

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  /// Exponential with rate 1.
  double exponential();
  /// Gamma with the given shape and rate (mean shape / rate).
  double gamma(double shape, double rate);
  double beta(double a, double b);
  /// +1 or -1 with equal probability.
  double sign();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace stiefel
