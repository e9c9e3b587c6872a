#include "gqm/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gqm/parallel.hpp"

namespace gqm {

namespace {

constexpr double kDegeneracyFactor = 1e-8;  // relative to data_scale

// Euclidean norm with the n == 1 case taken as plain |x| so that univariate
// results agree bit for bit with the order-statistic formulas.
inline double vec_norm(const Vector& v) {
  return v.size() == 1 ? std::abs(v(0)) : v.norm();
}

void validate(const Dataset& data, const MeasureParams& params, bool needs_ratio) {
  if (params.dirs.k() < 1) throw InvalidDataError("direction set is empty");
  if (params.dirs.dim() != data.dim()) {
    throw DimensionError("direction set dimension does not match the dataset");
  }
  if (!(params.beta > 0.0 && params.beta < 1.0)) {
    throw InvalidDataError("beta must lie in (0, 1)");
  }
  if (params.beta_lo.has_value() != params.beta_hi.has_value()) {
    throw InvalidDataError("beta_lo and beta_hi must be given together");
  }
  if (params.beta_lo) {
    if (!(*params.beta_lo > 0.0 && *params.beta_lo < *params.beta_hi && *params.beta_hi < 1.0)) {
      throw InvalidDataError("need 0 < beta_lo < beta_hi < 1");
    }
  } else if (needs_ratio) {
    throw InvalidDataError("kurtosis needs beta_lo and beta_hi");
  }
}

// All quantiles of one magnitude over the closed direction set, solved in
// closed-row order (slot-indexed, so concurrent solves reduce identically).
struct LevelSolves {
  Matrix q;  // closed k x n
};

LevelSolves solve_level(const Dataset& data, double beta, const AntipodePairing& pairing,
                        const SolverConfig& solver, int threads, SolveDiagnostics& diag) {
  const Eigen::Index kc = pairing.closed.k();
  LevelSolves out;
  out.q.resize(kc, data.dim());
  std::vector<int> iters(static_cast<std::size_t>(kc), 0);
  std::vector<signed char> ok(static_cast<std::size_t>(kc), 1);
  parallel_for(kc, threads, [&](std::int64_t j) {
    const QuantileIndex u =
        QuantileIndex(beta * pairing.closed.dirs.row(static_cast<Eigen::Index>(j)).transpose());
    const QuantilePoint point = geometric_quantile(data, u, solver);
    out.q.row(static_cast<Eigen::Index>(j)) = point.p.transpose();
    iters[static_cast<std::size_t>(j)] = point.iterations;
    ok[static_cast<std::size_t>(j)] = point.converged ? 1 : 0;
  });
  for (Eigen::Index j = 0; j < kc; ++j) {
    diag.total_solves += 1;
    diag.max_iterations = std::max(diag.max_iterations, iters[static_cast<std::size_t>(j)]);
    if (!ok[static_cast<std::size_t>(j)]) {
      diag.all_converged = false;
      throw NonconvergenceError("quantile solve did not converge at direction index " +
                                    std::to_string(j) + " (magnitude " + std::to_string(beta) +
                                    ")",
                                j);
    }
  }
  return out;
}

Vector solve_median(const Dataset& data, const SolverConfig& solver, SolveDiagnostics& diag) {
  const QuantilePoint m = geometric_quantile(data, QuantileIndex::median(data.dim()), solver);
  diag.total_solves += 1;
  diag.max_iterations = std::max(diag.max_iterations, m.iterations);
  if (!m.converged) {
    diag.all_converged = false;
    throw NonconvergenceError("median solve did not converge", -1);
  }
  return m.p;
}

// Antipodal gaps ||q(b xi) - q(-b xi)|| per original direction.
std::vector<double> pair_gaps(const LevelSolves& level, const AntipodePairing& pairing) {
  const std::size_t k = pairing.original_to_closed.size();
  std::vector<double> gaps(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Eigen::Index j = pairing.original_to_closed[i];
    const Eigen::Index jb = pairing.antipode[static_cast<std::size_t>(j)];
    gaps[i] = vec_norm(level.q.row(j).transpose() - level.q.row(jb).transpose());
  }
  return gaps;
}

double max_of(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  return m;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double degeneracy_tol(const Dataset& data, const SolverConfig& solver) {
  const double scale = solver.data_scale > 0.0 ? solver.data_scale : data.scale_or_unit();
  return kDegeneracyFactor * scale;
}

}  // namespace

MeasureReport measures(const Dataset& data, const MeasureParams& params) {
  const bool want_ratio = params.beta_lo.has_value();
  validate(data, params, false);

  MeasureReport report;
  report.beta = params.beta;
  report.beta_lo = params.beta_lo;
  report.beta_hi = params.beta_hi;

  const AntipodePairing pairing = antipode_closure(params.dirs);
  report.median = solve_median(data, params.solver, report.diagnostics);
  const LevelSolves at_beta =
      solve_level(data, params.beta, pairing, params.solver, params.threads, report.diagnostics);

  const std::size_t k = pairing.original_to_closed.size();
  const std::vector<double> gaps = pair_gaps(at_beta, pairing);
  report.delta1 = max_of(gaps);
  report.delta2 = mean_of(gaps);

  const double tol = degeneracy_tol(data, params.solver);
  if (report.delta1 <= tol || report.delta2 <= tol) {
    throw DegenerateDispersionError(
        "antipodal quantile gaps collapse at magnitude " + std::to_string(params.beta) +
        "; skewness and kurtosis ratios are undefined");
  }

  double max_pair_skew = 0.0;
  Vector num_sum = Vector::Zero(data.dim());
  double max_radius = -std::numeric_limits<double>::infinity();
  double min_radius = std::numeric_limits<double>::infinity();
  report.per_direction.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Eigen::Index j = pairing.original_to_closed[i];
    const Eigen::Index jb = pairing.antipode[static_cast<std::size_t>(j)];
    const Vector qp = at_beta.q.row(j).transpose();
    const Vector qm = at_beta.q.row(jb).transpose();
    const Vector centered = (qp + qm) - 2.0 * report.median;
    max_pair_skew = std::max(max_pair_skew, vec_norm(centered));
    num_sum += qp - report.median;
    const double radius = vec_norm(qp - report.median);
    max_radius = std::max(max_radius, radius);
    min_radius = std::min(min_radius, radius);
    report.per_direction.push_back(
        {params.dirs.dirs.row(static_cast<Eigen::Index>(i)).transpose(), qp, qm});
  }
  report.gamma1 = max_pair_skew / report.delta1;
  report.gamma2 = (num_sum / static_cast<double>(k)) / report.delta2;
  if (min_radius <= tol) {
    throw DegenerateRadiusError("a directional quantile at magnitude " +
                                std::to_string(params.beta) +
                                " coincides with the median; the radius ratio is undefined");
  }
  report.alpha = std::log(max_radius / min_radius);

  if (want_ratio) {
    const LevelSolves at_lo = solve_level(data, *params.beta_lo, pairing, params.solver,
                                          params.threads, report.diagnostics);
    const LevelSolves at_hi = solve_level(data, *params.beta_hi, pairing, params.solver,
                                          params.threads, report.diagnostics);
    const std::vector<double> gaps_lo = pair_gaps(at_lo, pairing);
    const std::vector<double> gaps_hi = pair_gaps(at_hi, pairing);
    const double d1_lo = max_of(gaps_lo), d2_lo = mean_of(gaps_lo);
    const double d1_hi = max_of(gaps_hi), d2_hi = mean_of(gaps_hi);
    if (d1_lo <= tol || d2_lo <= tol) {
      throw DegenerateDispersionError("antipodal quantile gaps collapse at magnitude " +
                                      std::to_string(*params.beta_lo) +
                                      "; the kurtosis ratio is undefined");
    }
    report.delta1_lo = d1_lo;
    report.delta2_lo = d2_lo;
    report.delta1_hi = d1_hi;
    report.delta2_hi = d2_hi;
    report.kappa1 = d1_hi / d1_lo;
    report.kappa2 = d2_hi / d2_lo;
  }
  return report;
}

std::pair<double, double> dispersion(const Dataset& data, const MeasureParams& params) {
  validate(data, params, false);
  SolveDiagnostics diag;
  const AntipodePairing pairing = antipode_closure(params.dirs);
  const LevelSolves level =
      solve_level(data, params.beta, pairing, params.solver, params.threads, diag);
  const std::vector<double> gaps = pair_gaps(level, pairing);
  return {max_of(gaps), mean_of(gaps)};
}

std::pair<double, Vector> skewness(const Dataset& data, const MeasureParams& params) {
  validate(data, params, false);
  SolveDiagnostics diag;
  const AntipodePairing pairing = antipode_closure(params.dirs);
  const Vector median = solve_median(data, params.solver, diag);
  const LevelSolves level =
      solve_level(data, params.beta, pairing, params.solver, params.threads, diag);
  const std::vector<double> gaps = pair_gaps(level, pairing);
  const double d1 = max_of(gaps), d2 = mean_of(gaps);
  const double tol = degeneracy_tol(data, params.solver);
  if (d1 <= tol || d2 <= tol) {
    throw DegenerateDispersionError("antipodal quantile gaps collapse at magnitude " +
                                    std::to_string(params.beta) +
                                    "; skewness is undefined");
  }
  const std::size_t k = pairing.original_to_closed.size();
  double max_pair_skew = 0.0;
  Vector num_sum = Vector::Zero(data.dim());
  for (std::size_t i = 0; i < k; ++i) {
    const Eigen::Index j = pairing.original_to_closed[i];
    const Eigen::Index jb = pairing.antipode[static_cast<std::size_t>(j)];
    const Vector qp = level.q.row(j).transpose();
    const Vector qm = level.q.row(jb).transpose();
    max_pair_skew = std::max(max_pair_skew, vec_norm((qp + qm) - 2.0 * median));
    num_sum += qp - median;
  }
  return {max_pair_skew / d1, Vector((num_sum / static_cast<double>(k)) / d2)};
}

std::pair<double, double> kurtosis(const Dataset& data, const MeasureParams& params) {
  validate(data, params, true);
  SolveDiagnostics diag;
  const AntipodePairing pairing = antipode_closure(params.dirs);
  const LevelSolves at_lo =
      solve_level(data, *params.beta_lo, pairing, params.solver, params.threads, diag);
  const LevelSolves at_hi =
      solve_level(data, *params.beta_hi, pairing, params.solver, params.threads, diag);
  const std::vector<double> gaps_lo = pair_gaps(at_lo, pairing);
  const std::vector<double> gaps_hi = pair_gaps(at_hi, pairing);
  const double tol = degeneracy_tol(data, params.solver);
  const double d1_lo = max_of(gaps_lo), d2_lo = mean_of(gaps_lo);
  if (d1_lo <= tol || d2_lo <= tol) {
    throw DegenerateDispersionError("antipodal quantile gaps collapse at magnitude " +
                                    std::to_string(*params.beta_lo) +
                                    "; the kurtosis ratio is undefined");
  }
  return {max_of(gaps_hi) / d1_lo, mean_of(gaps_hi) / d2_lo};
}

double spherical_asymmetry(const Dataset& data, const MeasureParams& params) {
  validate(data, params, false);
  SolveDiagnostics diag;
  const AntipodePairing pairing = antipode_closure(params.dirs);
  const Vector median = solve_median(data, params.solver, diag);
  const LevelSolves level =
      solve_level(data, params.beta, pairing, params.solver, params.threads, diag);
  const double tol = degeneracy_tol(data, params.solver);
  double max_radius = -std::numeric_limits<double>::infinity();
  double min_radius = std::numeric_limits<double>::infinity();
  for (const Eigen::Index j : pairing.original_to_closed) {
    const double radius = vec_norm(level.q.row(j).transpose() - median);
    max_radius = std::max(max_radius, radius);
    min_radius = std::min(min_radius, radius);
  }
  if (min_radius <= tol) {
    throw DegenerateRadiusError("a directional quantile at magnitude " +
                                std::to_string(params.beta) +
                                " coincides with the median; the radius ratio is undefined");
  }
  return std::log(max_radius / min_radius);
}

}  // namespace gqm
