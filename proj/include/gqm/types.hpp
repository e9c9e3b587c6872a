#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <utility>

namespace gqm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// All library errors derive from Error and carry a stable machine-readable
// code (used verbatim by the CLI when emitting error JSON).
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Mismatched dimensions between arguments (point vs. data, index vs. data, ...).
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error("dimension_mismatch", what) {}
};

// Empty input, non-finite entries, malformed parameters.
class InvalidDataError : public Error {
 public:
  explicit InvalidDataError(const std::string& what) : Error("invalid_data", what) {}
};

// Sample carried by a single line (n >= 2): directional quantiles are not
// well posed, the caller has to fall back to univariate handling.
class CollinearDataError : public Error {
 public:
  explicit CollinearDataError(const std::string& what) : Error("collinear_data", what) {}
};

// All antipodal quantile gaps collapse: ratio measures are undefined.
class DegenerateDispersionError : public Error {
 public:
  explicit DegenerateDispersionError(const std::string& what)
      : Error("degenerate_dispersion", what) {}
};

// A directional quantile coincides with the median: the log radius ratio is undefined.
class DegenerateRadiusError : public Error {
 public:
  explicit DegenerateRadiusError(const std::string& what) : Error("degenerate_radius", what) {}
};

// Fixed-point solve ran out of iterations. direction_index() identifies the
// offending entry of the direction set when raised from a sweep (-1: median,
// -2: standalone solve).
class NonconvergenceError : public Error {
 public:
  NonconvergenceError(const std::string& what, long direction_index)
      : Error("nonconvergence", what), direction_index_(direction_index) {}
  long direction_index() const noexcept { return direction_index_; }

 private:
  long direction_index_;
};

// Sample covariance is numerically singular.
class SingularCovarianceError : public Error {
 public:
  explicit SingularCovarianceError(const std::string& what)
      : Error("singular_covariance", what) {}
};

// Too many resamples had to be redrawn for the requested replicate count.
class BootstrapFailureError : public Error {
 public:
  explicit BootstrapFailureError(const std::string& what) : Error("bootstrap_failure", what) {}
};

// Too many simulations had to be retried inside an experiment run.
class ExperimentFailureError : public Error {
 public:
  explicit ExperimentFailureError(const std::string& what)
      : Error("experiment_failure", what) {}
};

// Malformed CSV input.
class CsvError : public Error {
 public:
  explicit CsvError(const std::string& what) : Error("csv_parse", what) {}
};

// File could not be opened/written.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace gqm
