#pragma once

#include <optional>
#include <vector>

#include "gqm/dataset.hpp"
#include "gqm/directions.hpp"
#include "gqm/quantile.hpp"

namespace gqm {

// Parameters shared by the directional measures. beta is the quantile
// magnitude used by the dispersion/skewness/asymmetry measures; beta_lo and
// beta_hi are the inner and outer magnitudes of the kurtosis ratio (both
// must be set to request kappa). All solves for one report share `dirs` and
// `solver`, and every distinct quantile index is solved exactly once.
struct MeasureParams {
  double beta = 0.5;
  std::optional<double> beta_lo;  // kurtosis denominator magnitude
  std::optional<double> beta_hi;  // kurtosis numerator magnitude
  DirectionSet dirs;
  SolverConfig solver;
  int threads = 1;  // direction solves may run concurrently; reductions are ordered
};

struct PerDirection {
  Vector xi;      // the direction (row of the original set)
  Vector q_plus;  // quantile at +beta xi
  Vector q_minus; // quantile at -beta xi
};

struct SolveDiagnostics {
  long total_solves = 0;
  int max_iterations = 0;   // largest iteration count among the solves
  bool all_converged = true;
};

// The seven direction-set measures of one sample.
//   delta1 = max_xi ||q(b xi) - q(-b xi)||          (extremal dispersion)
//   delta2 = mean_xi ||q(b xi) - q(-b xi)||         (average dispersion)
//   gamma1 = max_xi ||q(b xi) + q(-b xi) - 2 m|| / delta1
//   gamma2 = mean_xi (q(b xi) - m) / delta2         (vector skewness)
//   kappa1 = delta1(beta_hi) / delta1(beta_lo)
//   kappa2 = delta2(beta_hi) / delta2(beta_lo)
//   alpha  = log(max_xi ||q(b xi) - m|| / min_xi ||q(b xi) - m||)
// with m the sample spatial median, solved once per report. Maxima, minima
// and means run over the direction set exactly as given (the antipode
// closure is used only to obtain q(-b xi) without duplicate solves).
struct MeasureReport {
  double beta = 0.0;
  std::optional<double> beta_lo, beta_hi;
  double delta1 = 0.0, delta2 = 0.0;
  double gamma1 = 0.0;
  Vector gamma2;
  std::optional<double> kappa1, kappa2;
  double alpha = 0.0;
  Vector median;
  std::optional<double> delta1_lo, delta2_lo;  // dispersion at beta_lo
  std::optional<double> delta1_hi, delta2_hi;  // dispersion at beta_hi
  std::vector<PerDirection> per_direction;     // at beta, in direction order
  SolveDiagnostics diagnostics;
};

// Full report. Throws CollinearDataError for a sample on one line,
// NonconvergenceError (with the offending direction identified) when a solve
// exhausts max_iter, DegenerateDispersionError when an antipodal gap
// collapses below 1e-8 * data_scale where a ratio needs it, and
// DegenerateRadiusError when a directional radius does.
MeasureReport measures(const Dataset& data, const MeasureParams& params);

// Individual measures, computed with the same machinery (and the same error
// contract) but solving only what they need.
std::pair<double, double> dispersion(const Dataset& data, const MeasureParams& params);
std::pair<double, Vector> skewness(const Dataset& data, const MeasureParams& params);
std::pair<double, double> kurtosis(const Dataset& data, const MeasureParams& params);
double spherical_asymmetry(const Dataset& data, const MeasureParams& params);

}  // namespace gqm
