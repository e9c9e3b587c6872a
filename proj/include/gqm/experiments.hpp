#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gqm/dataset.hpp"
#include "gqm/distributions.hpp"
#include "gqm/measures.hpp"

namespace gqm {

// The seven simulation tables.
//   t1: Frechet variance / Mardia skewness / Mardia kurtosis
//   t2: coordinate-wise delta0, |gamma0|, kappa0     beta 0.5,  ratio (0.2, 0.8)
//   t3: the seven directional measures, k = 24,      beta 0.5,  ratio (0.2, 0.8)
//   t4: t2 at                                        beta 0.98, ratio (0.2, 0.98)
//   t5: t3 at                                        beta 0.98, ratio (0.2, 0.98)
//   t6: t3 with k = 72
//   t7: t5 with k = 72
// Every cell is the mean over `sims` independent datasets of size N from the
// relevant simulation distribution, with the standard error of that mean.
enum class TableId { t1, t2, t3, t4, t5, t6, t7 };

const char* to_string(TableId id);
TableId table_from_string(const std::string& name);

struct ExperimentSpec {
  TableId table = TableId::t3;
  int sims = 100;
  int N = 300;
  int k = 24;               // circle grid size (measure tables)
  double beta = 0.5;        // magnitude for delta/gamma/alpha columns
  double beta_lo = 0.2;     // kurtosis ratio magnitudes
  double beta_hi = 0.8;
  std::uint64_t base_seed = 1;
  int threads = 1;
  SolverConfig solver;
};

// Spec with the canonical defaults of one table filled in (sims/N/seed keep
// the values passed in).
ExperimentSpec default_spec(TableId table, int sims = 100, int N = 300,
                            std::uint64_t base_seed = 1);

struct TableCell {
  int nu = 0;
  double mean = 0.0;
  double se = 0.0;  // sd of the per-simulation values / sqrt(sims)
  int sims = 0;
};

struct TableColumn {
  std::string name;                  // e.g. "delta1", "abs_gamma0_v1"
  Characteristic characteristic;     // simulation family feeding the column
  std::array<TableCell, 3> cells;    // nu = 0, 1, 2
  bool monotone_decreasing = false;  // mean(0) > mean(1) > mean(2)
};

struct TableReport {
  ExperimentSpec spec;
  std::vector<TableColumn> columns;
  long retries = 0;  // simulations redrawn after estimator failures
};

// Runs one table. Simulation i of the block (characteristic, nu) uses data
// seed derive_seed(base_seed, block ordinal) + i; a simulation whose
// estimator fails is retried with the next seed after the block
// (block base + sims + retry ordinal). More than 5% retries over the table
// aborts with ExperimentFailureError. Results do not depend on `threads`.
TableReport run_table(const ExperimentSpec& spec);

// Quantile contours: for each nu = 0, 1, 2 of one simulation family, the
// closed polyline {q(beta xi_l) - median : l = 1..k} over the circle grid,
// in grid order (median-centered, so all three contours share the origin).
// Dataset for variant nu uses seed base_seed + nu.
struct ContourSet {
  Characteristic characteristic;
  double beta = 0.0;
  int k = 0;
  int N = 0;
  std::uint64_t base_seed = 0;
  std::array<Matrix, 3> vertices;  // per nu: k x 2, rows in grid order
  std::array<Vector, 3> medians;
};

ContourSet compute_contours(Characteristic characteristic, double beta, int k, int N,
                            std::uint64_t base_seed, const SolverConfig& solver = {},
                            int threads = 1);

// CSV rows "nu,index,x,y" in grid order (index is 1-based like the grid).
std::string contour_csv(const ContourSet& contours);

// Standalone SVG: one path per variant (nu = 0 orange, 1 green, 2 red), a
// blue marker at the shared median (the origin), equal axis scaling, and a
// caption noting the shared scale. Byte-stable for identical inputs.
std::string contour_svg(const ContourSet& contours);

}  // namespace gqm
