#include <doctest.h>

#include <cmath>
#include <vector>

#include "gqm/quantile.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using gqm::Dataset;
using gqm::Matrix;
using gqm::QuantileIndex;
using gqm::SolverConfig;
using gqm::Vector;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_SUITE("quantile") {

TEST_CASE("index validation") {
  CHECK_THROWS_AS(QuantileIndex(vec2(1.0, 0.0)), gqm::InvalidDataError);   // norm == 1
  CHECK_THROWS_AS(QuantileIndex(vec2(0.8, 0.8)), gqm::InvalidDataError);   // norm > 1
  CHECK_THROWS_AS(QuantileIndex(vec2(std::nan(""), 0.0)), gqm::InvalidDataError);
  CHECK_THROWS_AS(QuantileIndex(Vector(0)), gqm::InvalidDataError);
  CHECK(QuantileIndex(vec2(0.6, -0.7)).beta() == doctest::Approx(std::hypot(0.6, 0.7)));

  const QuantileIndex median = QuantileIndex::median(3);
  CHECK(median.dim() == 3);
  CHECK(median.u().norm() == 0.0);

  const QuantileIndex polar = QuantileIndex::from_polar(0.5, vec2(0.0, 1.0));
  CHECK(polar.u()(0) == 0.0);
  CHECK(polar.u()(1) == 0.5);
  CHECK_THROWS_AS(QuantileIndex::from_polar(1.0, vec2(1.0, 0.0)), gqm::InvalidDataError);
  CHECK_THROWS_AS(QuantileIndex::from_polar(-0.1, vec2(1.0, 0.0)), gqm::InvalidDataError);
  CHECK_THROWS_AS(QuantileIndex::from_polar(0.5, vec2(1.0, 1.0)), gqm::InvalidDataError);
  CHECK_NOTHROW(QuantileIndex::from_polar(0.0, vec2(0.0, -1.0)));  // median via polar
}

TEST_CASE("univariate quantile is the ceil(N tau)-th order statistic") {
  const std::vector<double> v{3.0, 1.0, 5.0, 2.0, 4.0};  // unsorted on purpose
  CHECK(gqm::univariate_quantile(v, 0.5) == 3.0);        // ceil(2.5) = 3rd
  CHECK(gqm::univariate_quantile(v, 0.4) == 2.0);        // 2.0 integer -> lower
  CHECK(gqm::univariate_quantile(v, 0.1) == 1.0);
  CHECK(gqm::univariate_quantile(v, 0.9) == 5.0);
  CHECK(gqm::univariate_quantile(v, 0.8) == 4.0);   // 4.0 integer -> lower
  CHECK(gqm::univariate_quantile(v, 0.6) == 3.0);   // 5*0.6 = 3 exactly -> lower
  CHECK(gqm::univariate_quantile(v, 0.61) == 4.0);

  const std::vector<double> even{1.0, 2.0, 3.0, 4.0};
  CHECK(gqm::univariate_quantile(even, 0.5) == 2.0);  // lower of the middle pair

  // 100 * 0.07 lands a hair above 7 in floats; the backoff keeps it at the
  // 7th order statistic instead of spilling to the 8th
  std::vector<double> hundred(100);
  for (int i = 0; i < 100; ++i) hundred[static_cast<std::size_t>(i)] = i + 1;
  CHECK(gqm::univariate_quantile(hundred, 0.07) == 7.0);

  CHECK_THROWS_AS(gqm::univariate_quantile(std::vector<double>{}, 0.5),
                  gqm::InvalidDataError);
  CHECK_THROWS_AS(gqm::univariate_quantile(v, 0.0), gqm::InvalidDataError);
  CHECK_THROWS_AS(gqm::univariate_quantile(v, 1.0), gqm::InvalidDataError);
}

TEST_CASE("loss matches direct summation") {
  const Matrix pts = random_matrix(23, 3, 41);
  const Dataset data(pts);
  gqm::Rng rng(7);
  for (int rep = 0; rep < 5; ++rep) {
    Vector u(3), p(3);
    for (int j = 0; j < 3; ++j) {
      u(j) = 0.3 * (2.0 * rng.uniform() - 1.0);
      p(j) = 2.0 * rng.normal();
    }
    const QuantileIndex index(u);
    CHECK(gqm::loss(data, index, p) ==
          doctest::Approx(oracle::loss_direct(pts, u, p)).epsilon(1e-13));
  }
}

TEST_CASE("median of a symmetric cross is the center") {
  Matrix pts(4, 2);
  pts << 1, 0, -1, 0, 0, 1, 0, -1;
  const Dataset data(pts);
  const auto result = gqm::geometric_quantile(data, QuantileIndex::median(2));
  CHECK(result.converged);
  CHECK(result.p.norm() <= 1e-8);
  CHECK(gqm::first_order_residual(data, QuantileIndex::median(2), vec2(0, 0)) == 0.0);
}

TEST_CASE("univariate data routes through the order statistic") {
  Matrix pts(5, 1);
  pts << 4, 2, 1, 5, 3;
  const Dataset data(pts);
  Vector u(1);

  u << 0.0;
  auto r = gqm::geometric_quantile(data, QuantileIndex(u));
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK(r.p(0) == 3.0);

  u << 0.2;  // tau = 0.6 -> 3rd order statistic
  CHECK(gqm::geometric_quantile(data, QuantileIndex(u)).p(0) == 3.0);

  u << -0.9;  // tau = 0.05 -> 1st
  CHECK(gqm::geometric_quantile(data, QuantileIndex(u)).p(0) == 1.0);

  u << 0.9;  // tau = 0.95 -> 5th
  CHECK(gqm::geometric_quantile(data, QuantileIndex(u)).p(0) == 5.0);
}

TEST_CASE("solver agrees with exhaustive grid search") {
  const Matrix pts = 2.0 * random_matrix(8, 2, 1718);
  const Dataset data(pts);
  const struct {
    double beta;
    double angle;
  } cases[] = {{0.0, 0.0}, {0.3, 0.0}, {0.6, 1.0}, {0.9, 2.214297}};
  for (const auto& c : cases) {
    Vector u = vec2(c.beta * std::cos(c.angle), c.beta * std::sin(c.angle));
    const QuantileIndex index(u);
    const auto solved = gqm::geometric_quantile(data, index);
    REQUIRE(solved.converged);
    const Vector reference = oracle::grid_search_quantile(pts, u, 1e-3);
    for (int j = 0; j < 2; ++j) {
      CHECK(std::abs(solved.p(j) - reference(j)) <= 2e-3);
    }
    // the solver's point must be at least as good as the oracle's
    CHECK(gqm::loss(data, index, solved.p) <=
          oracle::loss_direct(pts, u, reference) + 1e-12);
    CHECK(gqm::first_order_residual(data, index, solved.p) <= 1e-6);
  }
}

TEST_CASE("three dimensional solve agrees with the oracle") {
  const Matrix pts = random_matrix(12, 3, 5150);
  const Dataset data(pts);
  Vector u(3);
  u << 0.3, -0.2, 0.4;
  const auto solved = gqm::geometric_quantile(data, QuantileIndex(u));
  REQUIRE(solved.converged);
  const Vector reference = oracle::grid_search_quantile(pts, u, 1e-3);
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(solved.p(j) - reference(j)) <= 2e-3);
  }
}

TEST_CASE("first order residual away from the data") {
  // two points, evaluated from outside their line
  Matrix pts(2, 2);
  pts << 1, 0, -1, 0;
  const Dataset data(pts);
  const double r =
      gqm::first_order_residual(data, QuantileIndex::median(2), vec2(0.0, 1.0));
  CHECK(r == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("first order residual at a multiple observation") {
  // (0,0) twice, plus (3,0) and (0,4): the sum of the two unit vectors
  // toward the far points has norm sqrt(2) <= multiplicity 2, so the
  // doubled point is a spatial median.
  Matrix pts(4, 2);
  pts << 0, 0, 0, 0, 3, 0, 0, 4;
  const Dataset data(pts);
  CHECK(gqm::first_order_residual(data, QuantileIndex::median(2), vec2(0, 0)) == 0.0);

  const auto solved = gqm::geometric_quantile(data, QuantileIndex::median(2));
  CHECK(solved.converged);
  CHECK((solved.p - vec2(0, 0)).norm() <= 1e-7);

  // with multiplicity 1 the same point is not optimal: ||(-1,-1)|| > 1
  Matrix pts1(3, 2);
  pts1 << 0, 0, 3, 0, 0, 4;
  const Dataset single(pts1);
  const double expected = (std::sqrt(2.0) - 1.0) / 3.0;
  CHECK(gqm::first_order_residual(single, QuantileIndex::median(2), vec2(0, 0)) ==
        doctest::Approx(expected));
  const auto moved = gqm::geometric_quantile(single, QuantileIndex::median(2));
  CHECK(moved.converged);
  CHECK(moved.p.norm() > 1e-4);  // pulled off the corner
  CHECK(gqm::first_order_residual(single, QuantileIndex::median(2), moved.p) <= 1e-6);
}

TEST_CASE("single observation minimizes every index") {
  Matrix pts(1, 3);
  pts << 4, 5, 6;
  const Dataset data(pts);
  Vector u(3);
  u << 0.5, 0.5, 0.5;
  const auto r = gqm::geometric_quantile(data, QuantileIndex(u));
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK(bit_equal(r.p, pts.row(0).transpose()));
}

TEST_CASE("collinear multivariate samples are rejected") {
  Matrix pts(4, 2);
  for (int i = 0; i < 4; ++i) {
    pts(i, 0) = i;
    pts(i, 1) = -3.0 * i + 2.0;
  }
  CHECK_THROWS_AS(gqm::geometric_quantile(Dataset(pts), QuantileIndex::median(2)),
                  gqm::CollinearDataError);
}

TEST_CASE("dimension and config validation") {
  const Dataset data(random_matrix(6, 2, 10));
  Vector u(3);
  u << 0.1, 0.1, 0.1;
  CHECK_THROWS_AS(gqm::geometric_quantile(data, QuantileIndex(u)), gqm::DimensionError);

  SolverConfig bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS(gqm::geometric_quantile(data, QuantileIndex::median(2), bad),
                  gqm::InvalidDataError);
  bad.tol = 1e-8;
  bad.max_iter = 0;
  CHECK_THROWS_AS(gqm::geometric_quantile(data, QuantileIndex::median(2), bad),
                  gqm::InvalidDataError);

  CHECK_THROWS_AS(gqm::loss(data, QuantileIndex::median(3), vec2(0, 0)),
                  gqm::DimensionError);
  CHECK_THROWS_AS(gqm::loss(data, QuantileIndex::median(2), Vector::Zero(3)),
                  gqm::DimensionError);
}

TEST_CASE("iteration losses never increase") {
  const Matrix pts = random_matrix(40, 2, 321);
  const Dataset data(pts);
  Vector u = vec2(0.4, -0.3);
  std::vector<double> losses;
  gqm::IterationObserver observer = [&](int, const Vector&, double value) {
    losses.push_back(value);
  };
  const auto r = gqm::geometric_quantile(data, QuantileIndex(u), {}, &observer);
  CHECK(r.converged);
  REQUIRE(losses.size() >= 2);
  for (std::size_t i = 1; i < losses.size(); ++i) {
    CHECK(losses[i] <= losses[i - 1] + 1e-12);
  }
}

TEST_CASE("honest convergence flag under a tiny iteration cap") {
  const Dataset data(random_matrix(50, 2, 8));
  SolverConfig config;
  config.max_iter = 2;
  const auto r = gqm::geometric_quantile(data, QuantileIndex(vec2(0.5, 0.2)), config);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 2);
}

TEST_CASE("equivariance under similarity transforms") {
  const Matrix pts = random_matrix(30, 2, 2024);
  const Dataset data(pts);
  const Matrix rot = random_orthogonal(2, 77);
  const double c = 1.7;
  const Vector shift = vec2(-3.0, 0.5);

  Matrix moved(pts.rows(), 2);
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    moved.row(i) = (c * rot * pts.row(i).transpose() + shift).transpose();
  }
  const Dataset moved_data(moved);

  SolverConfig tight;
  tight.tol = 1e-12;
  tight.max_iter = 200000;
  const Vector u = vec2(0.45, -0.35);
  const Vector q = gqm::geometric_quantile(data, QuantileIndex(u), tight).p;
  const Vector q_moved =
      gqm::geometric_quantile(moved_data, QuantileIndex(Vector(rot * u)), tight).p;
  const Vector expected = c * rot * q + shift;
  CHECK((q_moved - expected).norm() <= 1e-8 * (1.0 + expected.norm()));
}

TEST_CASE("deterministic results") {
  const Dataset data(random_matrix(25, 2, 999));
  const QuantileIndex u(vec2(0.3, 0.6));
  const auto a = gqm::geometric_quantile(data, u);
  const auto b = gqm::geometric_quantile(data, u);
  CHECK(bit_equal(a.p, b.p));
  CHECK(a.iterations == b.iterations);
  CHECK(a.final_step == b.final_step);
}

TEST_CASE("strong pull converges within the default budget") {
  const Dataset data(random_matrix(60, 2, 424242));
  Vector u = vec2(0.99, 0.0);
  const auto r = gqm::geometric_quantile(data, QuantileIndex(u));
  CHECK(r.converged);
  CHECK(gqm::first_order_residual(data, QuantileIndex(u), r.p) <= 1e-6);
}

}  // TEST_SUITE
