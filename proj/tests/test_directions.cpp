#include <doctest.h>

#include <cmath>

#include "gqm/directions.hpp"
#include "test_util.hpp"

using gqm::DirectionSet;

TEST_SUITE("directions") {

TEST_CASE("circle grid hits the expected angles") {
  const DirectionSet g = gqm::circle_grid(4);
  REQUIRE(g.k() == 4);
  REQUIRE(g.dim() == 2);
  // angles 90, 180, 270, 360 degrees
  CHECK(std::abs(g.dirs(0, 0) - 0.0) <= 1e-15);
  CHECK(std::abs(g.dirs(0, 1) - 1.0) <= 1e-15);
  CHECK(std::abs(g.dirs(1, 0) + 1.0) <= 1e-15);
  CHECK(std::abs(g.dirs(1, 1) - 0.0) <= 1e-15);
  CHECK(std::abs(g.dirs(2, 1) + 1.0) <= 1e-15);
  CHECK(std::abs(g.dirs(3, 0) - 1.0) <= 1e-15);

  const DirectionSet one = gqm::circle_grid(1);
  CHECK(one.k() == 1);
  CHECK(std::abs(one.dirs(0, 0) - 1.0) <= 1e-15);

  CHECK_THROWS_AS(gqm::circle_grid(0), gqm::InvalidDataError);
}

TEST_CASE("circle grid rows are unit and equidistributed") {
  for (int k : {4, 24, 72}) {
    const DirectionSet g = gqm::circle_grid(k);
    double c1 = 0, s1 = 0, c2 = 0, s2 = 0;
    for (int l = 0; l < k; ++l) {
      const double x = g.dirs(l, 0), y = g.dirs(l, 1);
      CHECK(std::abs(std::hypot(x, y) - 1.0) <= 1e-15);
      c1 += x;
      s1 += y;
      c2 += x * x - y * y;  // cos(2 theta)
      s2 += 2 * x * y;      // sin(2 theta)
    }
    CHECK(std::abs(c1) <= 1e-10);
    CHECK(std::abs(s1) <= 1e-10);
    CHECK(std::abs(c2) <= 1e-10);
    CHECK(std::abs(s2) <= 1e-10);
  }
}

TEST_CASE("sphere directions are unit, deterministic and spread out") {
  const DirectionSet a = gqm::sphere_uniform(3, 400, 11);
  const DirectionSet b = gqm::sphere_uniform(3, 400, 11);
  const DirectionSet c = gqm::sphere_uniform(3, 400, 12);
  REQUIRE(a.k() == 400);
  REQUIRE(a.dim() == 3);
  CHECK(bit_equal(a.dirs, b.dirs));
  CHECK_FALSE(bit_equal(a.dirs, c.dirs));
  for (int i = 0; i < 400; ++i) {
    CHECK(std::abs(a.dirs.row(i).norm() - 1.0) <= 1e-12);
  }
  // second moment of the uniform sphere distribution is I/3
  const gqm::Matrix second = (a.dirs.transpose() * a.dirs) / 400.0;
  for (int r = 0; r < 3; ++r) {
    for (int s = 0; s < 3; ++s) {
      CHECK(std::abs(second(r, s) - (r == s ? 1.0 / 3.0 : 0.0)) <= 0.06);
    }
  }
  CHECK_THROWS_AS(gqm::sphere_uniform(1, 4, 0), gqm::InvalidDataError);
  CHECK_THROWS_AS(gqm::sphere_uniform(3, 0, 0), gqm::InvalidDataError);
}

TEST_CASE("line pair") {
  const DirectionSet p = gqm::line_pair();
  REQUIRE(p.k() == 2);
  REQUIRE(p.dim() == 1);
  CHECK(p.dirs(0, 0) == 1.0);
  CHECK(p.dirs(1, 0) == -1.0);
}

TEST_CASE("antipode closure of an even circle grid is itself") {
  const DirectionSet g = gqm::circle_grid(4);
  const gqm::AntipodePairing pairing = gqm::antipode_closure(g);
  REQUIRE(pairing.closed.k() == 4);  // antipodes already present
  CHECK(bit_equal(pairing.closed.dirs, g.dirs));
  // rows: 90, 180, 270, 360 -> antipodes 270, 360, 90, 180
  CHECK(pairing.antipode[0] == 2);
  CHECK(pairing.antipode[1] == 3);
  CHECK(pairing.antipode[2] == 0);
  CHECK(pairing.antipode[3] == 1);
  for (int i = 0; i < 4; ++i) CHECK(pairing.original_to_closed[i] == i);
}

TEST_CASE("antipode closure appends missing reflections in order") {
  gqm::Matrix dirs(1, 2);
  dirs << 1, 0;
  const gqm::AntipodePairing pairing =
      gqm::antipode_closure({dirs, gqm::DirectionConstruction::circle_grid, 0});
  REQUIRE(pairing.closed.k() == 2);
  CHECK(pairing.closed.dirs(0, 0) == 1.0);
  CHECK(pairing.closed.dirs(1, 0) == -1.0);
  CHECK(pairing.closed.dirs(1, 1) == 0.0);
  CHECK(pairing.antipode[0] == 1);
  CHECK(pairing.antipode[1] == 0);
  CHECK(pairing.original_to_closed[0] == 0);

  // odd circle grid: no antipode is present, all k get appended
  const gqm::AntipodePairing odd = gqm::antipode_closure(gqm::circle_grid(3));
  REQUIRE(odd.closed.k() == 6);
  for (int i = 0; i < 3; ++i) {
    CHECK(odd.original_to_closed[i] == i);
    CHECK(odd.antipode[i] == 3 + i);     // appended in input order
    CHECK(odd.antipode[3 + i] == i);
    CHECK((odd.closed.dirs.row(3 + i) + odd.closed.dirs.row(i)).norm() <= 1e-15);
  }
}

TEST_CASE("antipode closure tolerates near-duplicates") {
  gqm::Matrix dirs(2, 2);
  dirs << 1, 0, -1, 1e-15;  // second row is the first's antipode up to 1e-15
  const gqm::AntipodePairing pairing =
      gqm::antipode_closure({dirs, gqm::DirectionConstruction::circle_grid, 0});
  CHECK(pairing.closed.k() == 2);
  CHECK(pairing.antipode[0] == 1);
  CHECK(pairing.antipode[1] == 0);
}

TEST_CASE("closure of the line pair is itself") {
  const gqm::AntipodePairing pairing = gqm::antipode_closure(gqm::line_pair());
  CHECK(pairing.closed.k() == 2);
  CHECK(pairing.antipode[0] == 1);
  CHECK(pairing.antipode[1] == 0);
}

}  // TEST_SUITE
