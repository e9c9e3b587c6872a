#pragma once

#include <filesystem>
#include <iosfwd>

#include "gqm/types.hpp"

namespace gqm {

// An immutable multivariate sample. Rows are observations, columns are
// coordinates. Centroid, scale and the collinearity flag are computed once
// at construction so that const access is cheap and thread-safe.
class Dataset {
 public:
  // Throws InvalidDataError on an empty matrix or non-finite entries.
  explicit Dataset(Matrix points);

  Eigen::Index size() const { return points_.rows(); }  // N
  Eigen::Index dim() const { return points_.cols(); }   // n
  const Matrix& points() const { return points_; }
  const Vector& centroid() const { return centroid_; }

  // Mean Euclidean distance of the observations to their centroid.
  // Used as the default data_scale of solver tolerances. Zero when all
  // observations coincide.
  double scale() const { return scale_; }

  // scale(), replaced by 1.0 when the sample is a single repeated point,
  // so tolerance products stay meaningful.
  double scale_or_unit() const { return scale_ > 0.0 ? scale_ : 1.0; }

  // True when every observation lies on one straight line (always true for
  // n == 1 and for N == 1). Decided by the numerical rank of the centered
  // sample: second singular value <= max(N, n) * machine eps * first.
  bool is_on_single_line() const { return collinear_; }

  // Selects rows (with repetition allowed), e.g. for bootstrap resampling.
  Dataset subset(const std::vector<Eigen::Index>& rows) const;

 private:
  Matrix points_;
  Vector centroid_;
  double scale_ = 0.0;
  bool collinear_ = false;
};

inline bool is_on_single_line(const Dataset& data) { return data.is_on_single_line(); }

// CSV ingestion/emission: one observation per row, comma separated, decimal
// point '.', UTF-8 (a leading BOM is skipped). When has_header is true the
// first line is skipped on read and a v1,...,vn header is written.
Dataset read_csv(std::istream& in, bool has_header);
Dataset read_csv(const std::filesystem::path& file, bool has_header);
void write_csv(std::ostream& out, const Dataset& data, bool has_header);
void write_csv(const std::filesystem::path& file, const Dataset& data, bool has_header);

}  // namespace gqm
