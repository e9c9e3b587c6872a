#pragma once

#include <cstdint>
#include <vector>

#include "gqm/types.hpp"

namespace gqm {

enum class DirectionConstruction { circle_grid, sphere_uniform, line_pair };

// A finite set of unit directions (rows of dirs) on the sphere S^(n-1).
struct DirectionSet {
  Matrix dirs;  // k x n, unit rows
  DirectionConstruction construction = DirectionConstruction::circle_grid;
  std::uint64_t seed = 0;  // only meaningful for sphere_uniform

  Eigen::Index k() const { return dirs.rows(); }
  Eigen::Index dim() const { return dirs.cols(); }
};

// Equally spaced directions on the unit circle (n == 2):
// (cos(2 pi l / k), sin(2 pi l / k)), l = 1..k.
DirectionSet circle_grid(int k);

// k independent uniform directions on S^(n-1), n >= 2: normalized n-variate
// standard normal draws (redrawn in the zero-vector event). Deterministic in
// (n, k, seed).
DirectionSet sphere_uniform(int n, int k, std::uint64_t seed);

// The two-point direction set {+1, -1} for univariate samples (S^0 with
// equal mass, the n == 1 counterpart of the constructions above).
DirectionSet line_pair();

// Antipode closure of a direction set: the union of the set and its
// reflection, with duplicates (within 1e-12) removed. Rows of `closed` keep
// the original directions first, in input order, followed by the new
// antipodes in input order. For each closed row j, antipode[j] is the row
// holding its reflection; original_to_closed maps input rows to closed rows.
struct AntipodePairing {
  DirectionSet closed;
  std::vector<Eigen::Index> antipode;
  std::vector<Eigen::Index> original_to_closed;
};

AntipodePairing antipode_closure(const DirectionSet& dirs);

}  // namespace gqm
