#include "gqm/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace gqm {

namespace {

constexpr double kAnchorEps = 1e-12;      // anchor snap, relative to data_scale
constexpr double kResidualFactor = 10.0;  // convergence certificate: residual <= 10 tol

}  // namespace

QuantileIndex::QuantileIndex(Vector u) : u_(std::move(u)) {
  if (u_.size() < 1) throw InvalidDataError("quantile index must have dimension >= 1");
  if (!u_.allFinite()) throw InvalidDataError("quantile index has a non-finite entry");
  if (u_.norm() >= 1.0) {
    throw InvalidDataError("quantile index must satisfy ||u|| < 1");
  }
}

QuantileIndex QuantileIndex::median(Eigen::Index n) {
  return QuantileIndex(Vector::Zero(n));
}

QuantileIndex QuantileIndex::from_polar(double beta, const Vector& xi) {
  if (beta < 0.0 || beta >= 1.0) {
    throw InvalidDataError("quantile magnitude must lie in [0, 1)");
  }
  const double norm = xi.norm();
  if (!(std::abs(norm - 1.0) <= 1e-9)) {
    throw InvalidDataError("direction must be a unit vector");
  }
  return QuantileIndex(beta * xi);
}

double univariate_quantile(std::span<const double> values, double tau) {
  const auto N = static_cast<double>(values.size());
  if (values.empty()) throw InvalidDataError("quantile of an empty sample");
  if (!(tau > 0.0 && tau < 1.0)) throw InvalidDataError("tau must lie in (0, 1)");
  // ceil(N tau)-th order statistic; the 1e-9 backoff keeps an N tau that is
  // mathematically an integer (but rounded up in floating point) at the
  // lower order statistic.
  const double h = N * tau;
  auto k = static_cast<std::ptrdiff_t>(std::ceil(h - 1e-9));
  k = std::clamp<std::ptrdiff_t>(k, 1, static_cast<std::ptrdiff_t>(values.size()));
  std::vector<double> copy(values.begin(), values.end());
  std::nth_element(copy.begin(), copy.begin() + (k - 1), copy.end());
  return copy[static_cast<std::size_t>(k - 1)];
}

namespace {

// Per-evaluation sums of the fixed-point scheme at p:
//   wsum = sum 1/r_i,  xw = sum x_i/r_i,  rsum = sum r_i
// over the observations with r_i > snap; anchors counts the rest.
struct Sums {
  double wsum = 0.0;
  double rsum = 0.0;
  Vector xw;
  long anchors = 0;
};

// Hot path: n == 2 with contiguous column access. -O2/-O3 auto-vectorizes
// the sqrt/div kernel once errno bookkeeping is off.
Sums evaluate_sums_2d(const Matrix& pts, const Vector& p, double snap) {
  const Eigen::Index N = pts.rows();
  const double* x = pts.col(0).data();
  const double* y = pts.col(1).data();
  const double p0 = p(0), p1 = p(1);
  double wsum = 0.0, rsum = 0.0, xw0 = 0.0, xw1 = 0.0;
  long anchors = 0;
  for (Eigen::Index i = 0; i < N; ++i) {
    const double dx = x[i] - p0;
    const double dy = y[i] - p1;
    const double r = std::sqrt(dx * dx + dy * dy);
    if (r <= snap) {
      ++anchors;
      continue;
    }
    const double w = 1.0 / r;
    wsum += w;
    rsum += r;
    xw0 += x[i] * w;
    xw1 += y[i] * w;
  }
  Sums s;
  s.wsum = wsum;
  s.rsum = rsum;
  s.xw = Vector(2);
  s.xw << xw0, xw1;
  s.anchors = anchors;
  return s;
}

Sums evaluate_sums_generic(const Matrix& pts, const Vector& p, double snap) {
  const Eigen::Index N = pts.rows();
  const Eigen::Index n = pts.cols();
  Eigen::ArrayXd r2 = Eigen::ArrayXd::Zero(N);
  for (Eigen::Index j = 0; j < n; ++j) {
    r2 += (pts.col(j).array() - p(j)).square();
  }
  const Eigen::ArrayXd r = r2.sqrt();
  Sums s;
  s.xw = Vector::Zero(n);
  for (Eigen::Index i = 0; i < N; ++i) {
    if (r(i) <= snap) {
      ++s.anchors;
      continue;
    }
    const double w = 1.0 / r(i);
    s.wsum += w;
    s.rsum += r(i);
    s.xw += w * pts.row(i).transpose();
  }
  return s;
}

inline Sums evaluate_sums(const Matrix& pts, const Vector& p, double snap) {
  return pts.cols() == 2 ? evaluate_sums_2d(pts, p, snap) : evaluate_sums_generic(pts, p, snap);
}

Vector columnwise_median(const Matrix& pts) {
  Vector m(pts.cols());
  for (Eigen::Index j = 0; j < pts.cols(); ++j) {
    const std::span<const double> col(pts.col(j).data(), static_cast<std::size_t>(pts.rows()));
    m(j) = univariate_quantile(col, 0.5);
  }
  return m;
}

void check_point_dim(const Dataset& data, const Vector& p) {
  if (p.size() != data.dim()) {
    throw DimensionError("point dimension does not match the dataset");
  }
  if (!p.allFinite()) throw InvalidDataError("point has a non-finite entry");
}

void check_index_dim(const Dataset& data, const QuantileIndex& u) {
  if (u.dim() != data.dim()) {
    throw DimensionError("quantile index dimension does not match the dataset");
  }
}

}  // namespace

double loss(const Dataset& data, const QuantileIndex& u, const Vector& p) {
  check_index_dim(data, u);
  check_point_dim(data, p);
  const Sums s = evaluate_sums(data.points(), p, 0.0);
  const auto N = static_cast<double>(data.size());
  return s.rsum / N + u.u().dot(data.centroid() - p);
}

double first_order_residual(const Dataset& data, const QuantileIndex& u, const Vector& p) {
  check_index_dim(data, u);
  check_point_dim(data, p);
  const auto N = static_cast<double>(data.size());
  const double snap = kAnchorEps * data.scale_or_unit();
  const Sums s = evaluate_sums(data.points(), p, snap);
  // sum over non-coincident observations of (p - x_i)/r_i
  const Vector g = p * s.wsum - s.xw;
  if (s.anchors == 0) {
    return (g / N - u.u()).norm();
  }
  const double excess = (g - N * u.u()).norm() - static_cast<double>(s.anchors);
  return std::max(0.0, excess) / N;
}

QuantilePoint geometric_quantile(const Dataset& data, const QuantileIndex& u,
                                 const SolverConfig& config,
                                 const IterationObserver* observer) {
  check_index_dim(data, u);
  if (config.tol <= 0.0) throw InvalidDataError("solver tolerance must be positive");
  if (config.max_iter < 1) throw InvalidDataError("solver iteration cap must be >= 1");

  const auto N = static_cast<double>(data.size());
  const Matrix& pts = data.points();

  // A single observation minimizes the loss for every ||u|| < 1.
  if (data.size() == 1) {
    return {pts.row(0).transpose(), 0, true, 0.0};
  }

  // Univariate data: the minimizer is the tau-quantile with tau = (1+u)/2.
  if (data.dim() == 1) {
    const std::span<const double> col(pts.col(0).data(), static_cast<std::size_t>(pts.rows()));
    const double tau = (1.0 + u.u()(0)) / 2.0;
    Vector p(1);
    p(0) = univariate_quantile(col, tau);
    return {p, 0, true, 0.0};
  }

  if (data.is_on_single_line()) {
    throw CollinearDataError(
        "sample lies on a single line; directional quantiles are not well posed");
  }

  const double scale = config.data_scale > 0.0 ? config.data_scale : data.scale_or_unit();
  const double snap = kAnchorEps * scale;
  const double step_tol = config.tol * scale;
  const double residual_tol = kResidualFactor * config.tol;
  const Vector& uvec = u.u();

  Vector p = columnwise_median(pts);
  double prev_step = std::numeric_limits<double>::infinity();
  int steps = 0;

  for (;;) {
    const Sums s = evaluate_sums(pts, p, snap);
    if (observer) {
      const double anchored_loss = s.rsum / N + uvec.dot(data.centroid() - p);
      (*observer)(steps, p, anchored_loss);
    }

    Vector p_next;
    double residual;
    if (s.anchors == 0) {
      const Vector g = p * s.wsum - s.xw;  // sum (p - x_i)/r_i
      residual = (g / N - uvec).norm();
      p_next = (s.xw + N * uvec) / s.wsum;
    } else {
      // p sits on an observation of multiplicity `anchors`. Optimal iff the
      // gradient of the smooth part fits inside the subgradient ball.
      const Vector g = (p * s.wsum - s.xw) - N * uvec;
      const double gnorm = g.norm();
      const auto m = static_cast<double>(s.anchors);
      if (gnorm <= m) {
        return {p, steps, true, steps > 0 ? prev_step : 0.0};
      }
      residual = (gnorm - m) / N;
      if (s.wsum == 0.0) {
        // every observation coincides with p yet gnorm > m cannot happen;
        // defensive: treat as optimal
        return {p, steps, true, 0.0};
      }
      const Vector t = (s.xw + N * uvec) / s.wsum;
      const double l = std::min(1.0, m / gnorm);
      p_next = (1.0 - l) * t + l * p;
    }

    if (steps > 0 && prev_step <= step_tol && residual <= residual_tol) {
      return {p, steps, true, prev_step};
    }
    if (steps >= config.max_iter) {
      return {p, steps, false, prev_step};
    }
    prev_step = (p_next - p).norm();
    p = std::move(p_next);
    ++steps;
  }
}

}  // namespace gqm
