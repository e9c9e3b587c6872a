#pragma once

#include <functional>
#include <span>

#include "gqm/dataset.hpp"
#include "gqm/types.hpp"

namespace gqm {

// Index of a geometric quantile: a vector u with ||u|| < 1. u = 0 addresses
// the spatial median; u = beta * xi (0 < beta < 1, ||xi|| = 1) addresses the
// quantile of magnitude beta in direction xi.
class QuantileIndex {
 public:
  explicit QuantileIndex(Vector u);
  static QuantileIndex median(Eigen::Index n);
  static QuantileIndex from_polar(double beta, const Vector& xi);

  const Vector& u() const { return u_; }
  Eigen::Index dim() const { return u_.size(); }
  double beta() const { return u_.norm(); }

 private:
  Vector u_;
};

struct SolverConfig {
  double tol = 1e-8;       // step tolerance, relative to data_scale
  int max_iter = 10000;    // iteration cap
  double data_scale = 0.0; // <= 0: use Dataset::scale_or_unit()
};

struct QuantilePoint {
  Vector p;          // the quantile
  int iterations;    // fixed-point steps taken
  bool converged;    // step <= tol*scale and first-order residual <= 10*tol
  double final_step; // length of the last step
};

// Average quantile loss (1/N) sum_i (||x_i - p|| + <u, x_i - p>). Convex in
// p and coercive for ||u|| < 1, so the minimizer exists; it is unique unless
// the sample is carried by a single line.
double loss(const Dataset& data, const QuantileIndex& u, const Vector& p);

// Norm of the minimal subgradient of the loss at p: for p away from every
// observation this is ||(1/N) sum_i (p - x_i)/||p - x_i|| - u||. When p
// coincides with an observation (within 1e-12 * data_scale) of multiplicity
// m, the coincident terms contribute a ball of radius m and the residual is
// max(0, ||sum_(x_i != p) (p - x_i)/||p - x_i|| - N u|| - m) / N, i.e. the
// distance from 0 to the subdifferential. A minimizer has residual 0.
double first_order_residual(const Dataset& data, const QuantileIndex& u, const Vector& p);

// Invoked once per fixed-point evaluation with (step index, current point,
// current loss). Test hook; pass nullptr to skip.
using IterationObserver = std::function<void(int, const Vector&, double)>;

// Computes the geometric quantile of the sample at index u.
//
// Fixed point scheme: p <- (sum_i x_i/r_i + N u) / (sum_i 1/r_i) with
// r_i = ||x_i - p||, started from the coordinate-wise median. When an
// iterate lands on an observation (within 1e-12 * data_scale) the update
// switches to the damped step p <- (1 - l) T + l p with T the update over
// the non-coincident points and l = min(1, m/||g||), g the gradient of the
// smooth part and m the multiplicity, and the solve stops immediately when
// ||g|| <= m (the point is then optimal). Iteration ends when the step is
// at most tol * data_scale and the first-order residual is at most 10 * tol.
//
// Special cases: N == 1 returns the single observation (it minimizes the
// loss for every ||u|| < 1); n == 1 returns the univariate tau-quantile
// with tau = (1 + u)/2 (see univariate_quantile); n >= 2 with the sample on
// one line throws CollinearDataError.
QuantilePoint geometric_quantile(const Dataset& data, const QuantileIndex& u,
                                 const SolverConfig& config = {},
                                 const IterationObserver* observer = nullptr);

// Sample tau-quantile, 0 < tau < 1, as the minimizer of the quantile loss:
// the ceil(N tau)-th order statistic, taking the lower order statistic when
// N tau is an integer (ties resolve downward). Every consumer of univariate
// quantiles in the library goes through this one definition.
double univariate_quantile(std::span<const double> values, double tau);

}  // namespace gqm
