#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <doctest.h>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "stiefel/errors.hpp"
#include "stiefel/truncnorm.hpp"

using namespace stiefel;

namespace {

// E[X | X > a] for a standard normal: phi(a) / (1 - Phi(a)).
double upper_truncated_mean(double a) {
  const boost::math::normal n;
  return boost::math::pdf(n, a) / boost::math::cdf(boost::math::complement(n, a));
}

}  // namespace

TEST_CASE("draws far beyond the mean still respect the bound") {
  Rng rng(51);
  for (int i = 0; i < 10000; ++i) {
    const double z = sample_normal_above(-10.0, 1.0, 0.0, rng);
    REQUIRE(z > 0.0);
    REQUIRE(std::isfinite(z));
  }
  for (int i = 0; i < 10000; ++i) REQUIRE(sample_normal_below(40.0, 1.0, 0.0, rng) < 0.0);
}

TEST_CASE("half-normal mean") {
  Rng rng(52);
  std::vector<double> x(100000);
  for (auto& v : x) v = sample_normal_below(0.0, 1.0, 0.0, rng);
  const auto mom = oracle::moments(x);
  CHECK(std::abs(mom.mean + std::sqrt(2.0 / std::numbers::pi)) <= 0.01);
}

TEST_CASE("truncated means in the body and in the tail") {
  Rng rng(53);
  for (double a : {-1.0, 2.0, 4.9, 6.0, 12.0}) {
    CAPTURE(a);
    std::vector<double> x(100000);
    for (auto& v : x) v = sample_normal_above(0.0, 1.0, a, rng);
    const auto mom = oracle::moments(x);
    CHECK(std::abs(mom.mean - upper_truncated_mean(a)) <= 4.0 * mom.se);
  }
}

TEST_CASE("location and scale") {
  Rng rng(54);
  std::vector<double> x(100000);
  for (auto& v : x) v = sample_normal_above(3.0, 2.0, 5.0, rng);
  const auto mom = oracle::moments(x);
  CHECK(std::abs(mom.mean - (3.0 + 2.0 * upper_truncated_mean(1.0))) <= 4.0 * mom.se);
  for (double v : x) REQUIRE(v > 5.0);
}

TEST_CASE("invalid scale") {
  Rng rng(55);
  CHECK_THROWS_AS(sample_normal_above(0.0, 0.0, 0.0, rng), InputError);
  CHECK_THROWS_AS(sample_normal_below(0.0, -1.0, 0.0, rng), InputError);
  CHECK_THROWS_AS(sample_normal_above(NAN, 1.0, 0.0, rng), InputError);
}
