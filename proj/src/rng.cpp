#include "stiefel/rng.hpp"

#include <cmath>

#include "stiefel/errors.hpp"

namespace stiefel {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

Rng Rng::split(std::string_view label) const {
  return Rng(splitmix64(seed_ ^ splitmix64(fnv1a(label))));
}

double Rng::uniform() {
  // 53 random bits, shifted half a step off zero: never returns 0 or 1.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double Rng::normal() { return normal_(engine_); }

double Rng::exponential() { return -std::log(uniform()); }

double Rng::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
    throw InputError("gamma: shape and rate must be positive and finite");
  }
  std::gamma_distribution<double> dist(shape, 1.0 / rate);
  return dist(engine_);
}

double Rng::beta(double a, double b) {
  const double x = gamma(a, 1.0);
  const double y = gamma(b, 1.0);
  return x / (x + y);
}

double Rng::sign() { return (engine_() >> 63) ? 1.0 : -1.0; }

}  // namespace stiefel
