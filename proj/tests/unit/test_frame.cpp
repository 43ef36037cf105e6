#include <cmath>
#include <doctest.h>
#include <vector>

#include "oracles.hpp"
#include "stiefel/errors.hpp"
#include "stiefel/frame.hpp"

using namespace stiefel;

TEST_CASE("V_{1,1} draws are +1 and -1 with equal frequency") {
  Rng rng(11);
  int plus = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const auto u = random_uniform_frame(1, 1, rng);
    const double v = u.matrix()(0, 0);
    REQUIRE(std::abs(std::abs(v) - 1.0) < 1e-15);
    plus += v > 0.0;
  }
  CHECK(std::abs(plus / double(draws) - 0.5) <= 0.02);
}

TEST_CASE("uniform frames are orthonormal") {
  Rng rng(12);
  for (auto [m, r] : {std::pair{5, 2}, {7, 7}, {60, 6}, {3, 1}}) {
    const auto u = random_uniform_frame(m, r, rng);
    CHECK(u.rows() == m);
    CHECK(u.cols() == r);
    CHECK(u.error() <= 1e-10);
  }
}

TEST_CASE("uniform unit vectors in R^3 have the sphere's moments") {
  Rng rng(13);
  const int draws = 100000;
  Vector mean = Vector::Zero(3);
  Vector second = Vector::Zero(3);
  for (int i = 0; i < draws; ++i) {
    const Vector u = random_uniform_frame(3, 1, rng).col(0);
    mean += u;
    second += u.cwiseAbs2();
  }
  mean /= draws;
  second /= draws;
  CHECK(mean.norm() <= 0.02);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(second(i) - 1.0 / 3.0) <= 0.02);
}

TEST_CASE("uniform frames are rotation invariant") {
  Rng rng(14);
  const Matrix q = orthonormalize(Matrix::Random(5, 5));
  REQUIRE(orthonormality_error(q) < 1e-12);
  std::vector<double> rotated, plain;
  for (int i = 0; i < 10000; ++i) {
    rotated.push_back((q * random_uniform_frame(5, 2, rng).matrix())(0, 0));
    plain.push_back(random_uniform_frame(5, 2, rng).matrix()(0, 0));
  }
  CHECK(oracle::ks_statistic(rotated, plain) < oracle::ks_critical_1pct(rotated.size(), plain.size()));
}

TEST_CASE("random_uniform_frame validates dimensions") {
  Rng rng(1);
  CHECK_THROWS_AS(random_uniform_frame(2, 3, rng), DimensionError);
  CHECK_THROWS_AS(random_uniform_frame(0, 0, rng), DimensionError);
  CHECK_THROWS_AS(random_uniform_frame(3, 0, rng), DimensionError);
}

TEST_CASE("OrthonormalFrame rejects matrices off the manifold") {
  Matrix x = Matrix::Identity(3, 2);
  x(0, 1) = 1e-6;
  CHECK_THROWS_AS(OrthonormalFrame{x}, ConstraintError);
  CHECK_THROWS_AS(OrthonormalFrame{Matrix::Identity(2, 3)}, DimensionError);
  CHECK_NOTHROW(OrthonormalFrame{Matrix::Identity(3, 2)});
}

TEST_CASE("orthonormalize fixes the QR sign ambiguity") {
  Matrix x(3, 2);
  x << -2, 1, 0, 3, 0, 0;
  const Matrix q = orthonormalize(x);
  // x = Q R with diag(R) > 0, so Q^T x is upper triangular with a positive diagonal.
  const Matrix r = q.transpose() * x;
  CHECK(r(0, 0) > 0.0);
  CHECK(r(1, 1) > 0.0);
  CHECK(std::abs(r(1, 0)) < 1e-14);
  CHECK(q(0, 0) == doctest::Approx(-1.0));
}

TEST_CASE("null space basis is orthonormal and orthogonal to the given columns") {
  Rng rng(15);
  const auto u = random_uniform_frame(6, 3, rng);
  const Matrix n = null_space_basis(u.matrix());
  CHECK(n.rows() == 6);
  CHECK(n.cols() == 3);
  CHECK(orthonormality_error(n) < 1e-12);
  CHECK((u.matrix().transpose() * n).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(null_space_basis(Matrix(4, 0)).isIdentity());
}

TEST_CASE("reorthonormalize leaves good frames untouched and repairs drift") {
  Rng rng(16);
  const Matrix u = random_uniform_frame(8, 3, rng).matrix();
  CHECK(reorthonormalize_if_needed(u) == u);
  Matrix drifted = u;
  drifted(0, 0) += 1e-7;
  const Matrix fixed = reorthonormalize_if_needed(drifted);
  CHECK(orthonormality_error(fixed) < 1e-12);
  CHECK((fixed - u).cwiseAbs().maxCoeff() < 1e-6);
}
