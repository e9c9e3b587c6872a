#include "gqm/classical.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "gqm/quantile.hpp"

namespace gqm {

namespace {

Matrix centered_points(const Dataset& data) {
  return data.points().rowwise() - data.centroid().transpose();
}

// Centered sample standardized by the Cholesky factor of the unbiased
// covariance: rows z_i with z_i . z_j = (v_i - vbar)' S^-1 (v_j - vbar).
Matrix standardized(const Dataset& data) {
  if (data.size() < 2) {
    throw InvalidDataError("moment measures need at least two observations");
  }
  const Matrix c = centered_points(data);
  const Matrix s = (c.transpose() * c) / static_cast<double>(data.size() - 1);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
  const auto& ev = eig.eigenvalues();
  if (ev(0) <= ev(ev.size() - 1) * 1e-12 || ev(ev.size() - 1) <= 0.0) {
    throw SingularCovarianceError("sample covariance is numerically singular");
  }
  const Eigen::LLT<Matrix> llt(s);
  // z_i' = L^-1 (v_i - vbar)
  return llt.matrixL().solve(c.transpose()).transpose();
}

}  // namespace

double frechet_variance(const Dataset& data) {
  const Matrix c = centered_points(data);
  return c.squaredNorm() / static_cast<double>(data.size());
}

double mardia_skewness(const Dataset& data) {
  const Matrix z = standardized(data);
  const auto N = static_cast<double>(data.size());
  const Eigen::Index n = data.dim();
  // (1/N^2) sum_ij (z_i . z_j)^3 equals the squared Frobenius norm of the
  // third moment tensor M_abc = (1/N) sum_i z_ia z_ib z_ic, computed in
  // O(N n^3) instead of O(N^2 n).
  double total = 0.0;
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      for (Eigen::Index c = 0; c < n; ++c) {
        const double m =
            (z.col(a).array() * z.col(b).array() * z.col(c).array()).sum() / N;
        total += m * m;
      }
    }
  }
  return total;
}

double mardia_kurtosis(const Dataset& data) {
  const Matrix z = standardized(data);
  const auto N = static_cast<double>(data.size());
  return z.rowwise().squaredNorm().array().square().sum() / N;
}

UnivariateMeasures univariate_quantile_measures(std::span<const double> values, double beta,
                                                double beta_lo, double beta_hi) {
  if (values.size() < 2) throw InvalidDataError("univariate measures need >= 2 values");
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidDataError("beta must lie in (0, 1)");
  if (!(beta_lo > 0.0 && beta_lo < beta_hi && beta_hi < 1.0)) {
    throw InvalidDataError("need 0 < beta_lo < beta_hi < 1");
  }
  auto delta_at = [&](double b) {
    const double upper = univariate_quantile(values, (1.0 + b) / 2.0);
    const double lower = univariate_quantile(values, (1.0 - b) / 2.0);
    return std::pair<double, double>{upper, lower};
  };

  UnivariateMeasures out;
  const auto [upper, lower] = delta_at(beta);
  const double median = univariate_quantile(values, 0.5);
  out.delta0 = upper - lower;
  if (out.delta0 == 0.0) {
    throw DegenerateDispersionError("univariate quantile gap vanishes at beta");
  }
  out.gamma0 = ((upper + lower) - 2.0 * median) / out.delta0;

  const auto [upper_lo, lower_lo] = delta_at(beta_lo);
  const double d_lo = upper_lo - lower_lo;
  if (d_lo == 0.0) {
    throw DegenerateDispersionError("univariate quantile gap vanishes at beta_lo");
  }
  const auto [upper_hi, lower_hi] = delta_at(beta_hi);
  out.kappa0 = (upper_hi - lower_hi) / d_lo;
  return out;
}

ClassicalReport classical_report(const Dataset& data, double beta, double beta_lo,
                                 double beta_hi) {
  ClassicalReport report;
  report.beta = beta;
  report.beta_lo = beta_lo;
  report.beta_hi = beta_hi;
  report.frechet_variance = frechet_variance(data);
  if (data.dim() >= 2) {
    report.mardia_skewness = mardia_skewness(data);
    report.mardia_kurtosis = mardia_kurtosis(data);
  } else {
    if (data.size() < 2 || report.frechet_variance <= 0.0) {
      throw SingularCovarianceError("sample variance is zero");
    }
    const Matrix z = (centered_points(data).array() /
                      std::sqrt(report.frechet_variance * static_cast<double>(data.size()) /
                                static_cast<double>(data.size() - 1)))
                         .matrix();
    report.mardia_skewness = std::pow(z.array().pow(3).mean(), 2);
    report.mardia_kurtosis = z.array().pow(4).mean();
  }
  report.per_coordinate.reserve(static_cast<std::size_t>(data.dim()));
  for (Eigen::Index j = 0; j < data.dim(); ++j) {
    const std::span<const double> col(data.points().col(j).data(),
                                      static_cast<std::size_t>(data.size()));
    report.per_coordinate.push_back(univariate_quantile_measures(col, beta, beta_lo, beta_hi));
  }
  return report;
}

}  // namespace gqm
