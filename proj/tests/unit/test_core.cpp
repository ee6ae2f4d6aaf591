#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "sparse_triangle/core.hpp"

using namespace sparse_triangle;

TEST_CASE("DenseVector rejects non-finite entries and empty input") {
  CHECK_THROWS_AS(DenseVector({1.0, std::numeric_limits<double>::quiet_NaN()}),
                  std::invalid_argument);
  CHECK_THROWS_AS(DenseVector({std::numeric_limits<double>::infinity()}), std::invalid_argument);
  CHECK_THROWS_AS(DenseVector(Eigen::VectorXd()), std::invalid_argument);
}

TEST_CASE("norm_l0 counts entries above the tolerance") {
  CHECK(norm_l0(DenseVector{0, 0, 0}, 0.0) == 0);
  CHECK(norm_l0(DenseVector{2, 1, 1}, 0.0) == 3);
  CHECK(norm_l0(DenseVector{1e-13, 5, 0}, 1e-12) == 1);
  CHECK_THROWS_AS(norm_l0(DenseVector{1.0}, -1.0), std::invalid_argument);
}

TEST_CASE("norms") {
  auto n = norms(DenseVector{2, 1, 1});
  CHECK(n.l1 == 4.0);
  CHECK(n.l2 == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
  CHECK(n.linf == 2.0);

  n = norms(DenseVector{0, 0, 0, 0});
  CHECK(n.l1 == 0.0);
  CHECK(n.l2 == 0.0);
  CHECK(n.linf == 0.0);

  n = norms(DenseVector{-3});
  CHECK(n.l1 == 3.0);
  CHECK(n.l2 == 3.0);
  CHECK(n.linf == 3.0);
}

TEST_CASE("norm chain linf <= l2 <= l1 <= l0 * linf on random vectors") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng() % 60;
    const DenseVector x(oracle::random_vector(rng, n));
    const auto [l1, l2, linf] = norms(x);
    const double slack = 1e-12 * (1.0 + l1);
    CHECK(linf <= l2 + slack);
    CHECK(l2 <= l1 + slack);
    CHECK(l1 <= static_cast<double>(norm_l0(x, 0.0)) * linf + slack);
  }
}

TEST_CASE("matvec") {
  CHECK(matvec(SensingMatrix::identity(2), DenseVector{3, 4}) == DenseVector{3, 4});

  Eigen::MatrixXd a(2, 2);
  a << 1, 1, 1, -1;
  CHECK(matvec(SensingMatrix(a), DenseVector{1, 1}) == DenseVector{2, 0});

  const SensingMatrix zero(Eigen::MatrixXd::Zero(3, 2));
  CHECK(matvec(zero, DenseVector{7, -2}) == DenseVector::zeros(3));

  CHECK_THROWS_AS(matvec(zero, DenseVector{1, 2, 3}), std::invalid_argument);
}

TEST_CASE("generate_problem at the recovery benchmark shape") {
  const auto p = generate_problem({250, 10, 1}, 100, 99);
  REQUIRE(p.truth.has_value());
  CHECK(norm_l0(*p.truth, 0.0) == 10);
  CHECK(p.b.size() == 100);
  CHECK(p.matrix.rows() == 100);
  CHECK(p.matrix.cols() == 250);
  CHECK(is_consistent(p));
}

TEST_CASE("generate_problem with s = n gives a fully dense truth") {
  const auto p = generate_problem({4, 4, 7}, 4, 3);
  CHECK(norm_l0(*p.truth, 0.0) == 4);
}

TEST_CASE("generate_problem is deterministic per seed pair") {
  const auto p1 = generate_problem({50, 5, 123}, 20, 456);
  const auto p2 = generate_problem({50, 5, 123}, 20, 456);
  CHECK(p1.matrix.values() == p2.matrix.values());
  CHECK(p1.b == p2.b);
  CHECK(*p1.truth == *p2.truth);

  const auto p3 = generate_problem({50, 5, 124}, 20, 456);
  CHECK_FALSE(*p1.truth == *p3.truth);
  CHECK(p1.matrix.values() == p3.matrix.values());
}

TEST_CASE("generate_problem rejects s > n") {
  CHECK_THROWS_AS(generate_problem({5, 6, 1}, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_sparse_signal({5, 0, 1}), std::invalid_argument);
}

TEST_CASE("generated instances are consistent over many seeds") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto p = generate_problem({40, 1 + seed % 40, seed}, 15, mix_seed(seed));
    CHECK(is_consistent(p));
    CHECK(norm_l0(*p.truth, 0.0) == 1 + seed % 40);
  }
}

TEST_CASE("sparse signal support is spread over all indices") {
  // Over many draws of a 1-sparse signal every index should be hit.
  std::vector<int> hits(8, 0);
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const auto y = generate_sparse_signal({8, 1, seed});
    for (std::size_t i = 0; i < 8; ++i) hits[i] += y[i] != 0.0;
  }
  for (int h : hits) CHECK(h > 20);
}
