#include "gqm/directions.hpp"

#include <cmath>
#include <numbers>

#include "gqm/rng.hpp"

namespace gqm {

namespace {
constexpr double kDuplicateEps = 1e-12;
}

DirectionSet circle_grid(int k) {
  if (k < 1) throw InvalidDataError("circle grid needs k >= 1");
  Matrix dirs(k, 2);
  for (int l = 1; l <= k; ++l) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(l) / k;
    dirs(l - 1, 0) = std::cos(angle);
    dirs(l - 1, 1) = std::sin(angle);
  }
  return {std::move(dirs), DirectionConstruction::circle_grid, 0};
}

DirectionSet sphere_uniform(int n, int k, std::uint64_t seed) {
  if (n < 2) throw InvalidDataError("uniform sphere directions need n >= 2");
  if (k < 1) throw InvalidDataError("uniform sphere directions need k >= 1");
  Matrix dirs(k, n);
  Rng rng(seed);
  for (int i = 0; i < k; ++i) {
    for (;;) {
      for (int j = 0; j < n; ++j) dirs(i, j) = rng.normal();
      const double norm = dirs.row(i).norm();
      if (norm > 0.0) {
        dirs.row(i) /= norm;
        break;
      }
    }
  }
  return {std::move(dirs), DirectionConstruction::sphere_uniform, seed};
}

DirectionSet line_pair() {
  Matrix dirs(2, 1);
  dirs << 1.0, -1.0;
  return {std::move(dirs), DirectionConstruction::line_pair, 0};
}

AntipodePairing antipode_closure(const DirectionSet& dirs) {
  const Eigen::Index k = dirs.k();
  if (k < 1) throw InvalidDataError("antipode closure of an empty direction set");
  const Eigen::Index n = dirs.dim();

  std::vector<Eigen::Index> rows;          // member rows, as indices into a virtual
  rows.reserve(2 * static_cast<std::size_t>(k));  // stack of [originals; antipodes]
  std::vector<Eigen::Index> original_to_closed(static_cast<std::size_t>(k));

  // originals first (duplicates among the originals stay: they are the
  // caller's set), then every antipode that is not already present
  for (Eigen::Index i = 0; i < k; ++i) {
    rows.push_back(i);
    original_to_closed[static_cast<std::size_t>(i)] = i;
  }
  auto row_of = [&](Eigen::Index virtual_index) -> Vector {
    if (virtual_index < k) return dirs.dirs.row(virtual_index).transpose();
    return -dirs.dirs.row(virtual_index - k).transpose();
  };
  std::vector<Eigen::Index> antipode_slot;  // closed row of -xi_i, per original i
  antipode_slot.resize(static_cast<std::size_t>(k), -1);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Vector anti = -dirs.dirs.row(i).transpose();
    Eigen::Index found = -1;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if ((row_of(rows[j]) - anti).norm() <= kDuplicateEps) {
        found = static_cast<Eigen::Index>(j);
        break;
      }
    }
    if (found < 0) {
      rows.push_back(k + i);
      found = static_cast<Eigen::Index>(rows.size() - 1);
    }
    antipode_slot[static_cast<std::size_t>(i)] = found;
  }

  AntipodePairing out;
  out.closed.dirs.resize(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    out.closed.dirs.row(static_cast<Eigen::Index>(j)) = row_of(rows[j]).transpose();
  }
  out.closed.construction = dirs.construction;
  out.closed.seed = dirs.seed;
  out.original_to_closed = std::move(original_to_closed);

  // antipode[] over all closed rows: for originals use the slots computed
  // above; an appended row k+i is by construction the antipode of row i.
  out.antipode.resize(rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j] < k) {
      out.antipode[j] = antipode_slot[static_cast<std::size_t>(rows[j])];
    } else {
      out.antipode[j] = rows[j] - k;
    }
  }
  return out;
}

}  // namespace gqm
