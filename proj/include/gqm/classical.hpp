#pragma once

#include <span>
#include <vector>

#include "gqm/dataset.hpp"

namespace gqm {

// Moment-based counterparts of the directional measures.

// (1/N) sum_i ||v_i - vbar||^2, the trace of the (1/N-normalized) scatter.
double frechet_variance(const Dataset& data);

// Mardia's multivariate skewness (1/N^2) sum_i sum_j ((v_i - vbar)' S^-1 (v_j - vbar))^3
// with S the unbiased (1/(N-1)) sample covariance. Always >= 0. Throws
// SingularCovarianceError when S is numerically singular.
double mardia_skewness(const Dataset& data);

// Mardia's multivariate kurtosis (1/N) sum_i ((v_i - vbar)' S^-1 (v_i - vbar))^2.
double mardia_kurtosis(const Dataset& data);

// Univariate quantile measures of one coordinate, built on the shared
// order-statistic quantile convention (see univariate_quantile):
//   delta0 = Q((1+beta)/2) - Q((1-beta)/2)
//   gamma0 = (Q((1+beta)/2) + Q((1-beta)/2) - 2 Q(1/2)) / delta0
//   kappa0 = delta0(beta_hi) / delta0(beta_lo)
struct UnivariateMeasures {
  double delta0 = 0.0;  // at beta
  double gamma0 = 0.0;  // at beta
  double kappa0 = 0.0;  // ratio beta_hi over beta_lo
};

// Requires at least two values, 0 < beta < 1 and 0 < beta_lo < beta_hi < 1.
// Throws DegenerateDispersionError when a needed delta0 vanishes.
UnivariateMeasures univariate_quantile_measures(std::span<const double> values, double beta,
                                                double beta_lo, double beta_hi);

struct ClassicalReport {
  double frechet_variance = 0.0;
  double mardia_skewness = 0.0;
  double mardia_kurtosis = 0.0;
  std::vector<UnivariateMeasures> per_coordinate;
  double beta = 0.0, beta_lo = 0.0, beta_hi = 0.0;
};

ClassicalReport classical_report(const Dataset& data, double beta, double beta_lo,
                                 double beta_hi);

}  // namespace gqm
