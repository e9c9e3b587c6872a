#include "gqm/dataset.hpp"

#include <Eigen/SVD>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include "gqm/types.hpp"

namespace gqm {

Dataset::Dataset(Matrix points) : points_(std::move(points)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw InvalidDataError("dataset must have at least one row and one column");
  }
  if (!points_.allFinite()) {
    throw InvalidDataError("dataset contains a non-finite entry");
  }
  centroid_ = points_.colwise().mean();
  const Matrix centered = points_.rowwise() - centroid_.transpose();
  scale_ = centered.rowwise().norm().mean();

  if (points_.cols() == 1 || points_.rows() == 1) {
    collinear_ = true;
  } else {
    // Numerical rank of the centered sample: all observations lie on one
    // line exactly when at most one singular value is nonzero.
    Eigen::JacobiSVD<Matrix> svd(centered);
    const auto& sv = svd.singularValues();
    const double cutoff = sv(0) * std::numeric_limits<double>::epsilon() *
                          static_cast<double>(std::max(points_.rows(), points_.cols()));
    collinear_ = sv.size() < 2 || sv(1) <= cutoff;
  }
}

Dataset Dataset::subset(const std::vector<Eigen::Index>& rows) const {
  if (rows.empty()) throw InvalidDataError("subset needs at least one row index");
  Matrix out(static_cast<Eigen::Index>(rows.size()), points_.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= points_.rows()) {
      throw InvalidDataError("subset row index out of range");
    }
    out.row(static_cast<Eigen::Index>(i)) = points_.row(rows[i]);
  }
  return Dataset(std::move(out));
}

namespace {

// One CSV line -> doubles. Field count mismatches and parse failures throw.
void parse_csv_line(const std::string& line, long line_no, std::vector<double>& out) {
  out.clear();
  std::size_t start = 0;
  for (;;) {
    std::size_t end = line.find(',', start);
    std::size_t len = (end == std::string::npos ? line.size() : end) - start;
    // trim surrounding blanks and a trailing CR
    std::size_t a = start, b = start + len;
    while (a < b && (line[a] == ' ' || line[a] == '\t')) ++a;
    while (b > a && (line[b - 1] == ' ' || line[b - 1] == '\t' || line[b - 1] == '\r')) --b;
    double value = 0.0;
    const auto result = std::from_chars(line.data() + a, line.data() + b, value);
    if (result.ec != std::errc() || result.ptr != line.data() + b) {
      throw CsvError("line " + std::to_string(line_no) + ": cannot parse field '" +
                     line.substr(start, len) + "' as a number");
    }
    out.push_back(value);
    if (end == std::string::npos) break;
    start = end + 1;
  }
}

bool blank(const std::string& line) {
  for (char c : line) {
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

}  // namespace

Dataset read_csv(std::istream& in, bool has_header) {
  std::vector<std::vector<double>> rows;
  std::string line;
  long line_no = 0;
  bool first_content_line = true;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (first_content_line && line.size() >= 3 &&
        static_cast<unsigned char>(line[0]) == 0xEF &&
        static_cast<unsigned char>(line[1]) == 0xBB &&
        static_cast<unsigned char>(line[2]) == 0xBF) {
      line.erase(0, 3);  // UTF-8 BOM
    }
    if (blank(line)) continue;
    if (first_content_line && has_header) {
      first_content_line = false;
      continue;
    }
    first_content_line = false;
    rows.emplace_back();
    parse_csv_line(line, line_no, rows.back());
    if (rows.size() == 1) {
      width = rows.back().size();
    } else if (rows.back().size() != width) {
      throw CsvError("line " + std::to_string(line_no) + ": expected " +
                     std::to_string(width) + " fields, got " +
                     std::to_string(rows.back().size()));
    }
  }
  if (rows.empty()) throw CsvError("no data rows");
  Matrix points(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return Dataset(std::move(points));
}

Dataset read_csv(const std::filesystem::path& file, bool has_header) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open '" + file.string() + "' for reading");
  return read_csv(in, has_header);
}

namespace {

// Locale-independent shortest round-trip formatting.
std::string format_double(double value) {
  char buf[40];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

}  // namespace

void write_csv(std::ostream& out, const Dataset& data, bool has_header) {
  if (has_header) {
    for (Eigen::Index j = 0; j < data.dim(); ++j) {
      if (j) out << ',';
      out << 'v' << (j + 1);
    }
    out << '\n';
  }
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    for (Eigen::Index j = 0; j < data.dim(); ++j) {
      if (j) out << ',';
      out << format_double(data.points()(i, j));
    }
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& file, const Dataset& data, bool has_header) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot open '" + file.string() + "' for writing");
  write_csv(out, data, has_header);
  if (!out) throw IoError("write to '" + file.string() + "' failed");
}

}  // namespace gqm
