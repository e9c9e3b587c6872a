#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gqm/dataset.hpp"
#include "test_util.hpp"

using gqm::Dataset;
using gqm::Matrix;

TEST_SUITE("dataset") {

TEST_CASE("construction validates the matrix") {
  CHECK_THROWS_AS(Dataset(Matrix(0, 2)), gqm::InvalidDataError);
  CHECK_THROWS_AS(Dataset(Matrix(3, 0)), gqm::InvalidDataError);

  Matrix bad(2, 2);
  bad << 1.0, 2.0, std::nan(""), 0.0;
  CHECK_THROWS_AS(Dataset{bad}, gqm::InvalidDataError);
  bad(1, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(Dataset{bad}, gqm::InvalidDataError);
}

TEST_CASE("centroid and scale of a simple square") {
  Matrix pts(4, 2);
  pts << 0, 0, 2, 0, 0, 2, 2, 2;
  Dataset data(pts);
  CHECK(data.centroid()(0) == doctest::Approx(1.0));
  CHECK(data.centroid()(1) == doctest::Approx(1.0));
  // every corner is sqrt(2) from the center
  CHECK(data.scale() == doctest::Approx(std::sqrt(2.0)));
  CHECK(data.scale_or_unit() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("scale_or_unit falls back to 1 for a repeated point") {
  Matrix pts(3, 2);
  pts << 5, -1, 5, -1, 5, -1;
  Dataset data(pts);
  CHECK(data.scale() == 0.0);
  CHECK(data.scale_or_unit() == 1.0);
}

TEST_CASE("collinearity detection") {
  Matrix line(5, 2);
  for (int i = 0; i < 5; ++i) {
    line(i, 0) = i;
    line(i, 1) = 2.0 * i + 1.0;  // y = 2x + 1
  }
  CHECK(Dataset(line).is_on_single_line());

  Matrix bent = line;
  bent(4, 1) += 0.5;
  CHECK_FALSE(Dataset(bent).is_on_single_line());

  // univariate and single-observation samples are degenerate by definition
  CHECK(Dataset(Matrix::Random(6, 1)).is_on_single_line());
  CHECK(Dataset(Matrix::Random(1, 3)).is_on_single_line());

  // a vertical line (zero variance in x) must also be caught
  Matrix vertical(4, 2);
  vertical << 3, 0, 3, 1, 3, 2, 3, 9;
  CHECK(Dataset(vertical).is_on_single_line());

  CHECK_FALSE(Dataset(random_matrix(20, 3, 7)).is_on_single_line());
}

TEST_CASE("subset selects rows with repetition") {
  Matrix pts(3, 2);
  pts << 1, 2, 3, 4, 5, 6;
  Dataset data(pts);
  Dataset sub = data.subset({2, 0, 2});
  REQUIRE(sub.size() == 3);
  CHECK(sub.points()(0, 0) == 5);
  CHECK(sub.points()(1, 0) == 1);
  CHECK(sub.points()(2, 1) == 6);
  CHECK_THROWS_AS(data.subset({}), gqm::InvalidDataError);
  CHECK_THROWS_AS(data.subset({3}), gqm::InvalidDataError);
  CHECK_THROWS_AS(data.subset({-1}), gqm::InvalidDataError);
}

TEST_CASE("csv round trip preserves doubles exactly") {
  const Matrix pts = random_matrix(17, 3, 99);
  Dataset data(pts);
  std::stringstream buffer;
  gqm::write_csv(buffer, data, /*has_header=*/false);
  Dataset back = gqm::read_csv(buffer, /*has_header=*/false);
  REQUIRE(back.size() == data.size());
  REQUIRE(back.dim() == data.dim());
  CHECK(bit_equal(back.points(), data.points()));  // exact via shortest round trip
}

TEST_CASE("csv header handling") {
  std::stringstream buffer;
  Matrix pts(2, 2);
  pts << 1.5, -2, 0.25, 3;
  gqm::write_csv(buffer, Dataset(pts), /*has_header=*/true);
  const std::string text = buffer.str();
  CHECK(text.substr(0, 6) == "v1,v2\n");
  std::stringstream again(text);
  Dataset back = gqm::read_csv(again, /*has_header=*/true);
  CHECK(bit_equal(back.points(), pts));
}

TEST_CASE("csv tolerates BOM, blank lines and CRLF") {
  std::stringstream in("\xEF\xBB\xBF 1.5 , 2\r\n\n3,4\r\n   \n");
  Dataset data = gqm::read_csv(in, false);
  REQUIRE(data.size() == 2);
  CHECK(data.points()(0, 0) == 1.5);
  CHECK(data.points()(0, 1) == 2.0);
  CHECK(data.points()(1, 1) == 4.0);
}

TEST_CASE("csv rejects malformed input") {
  {
    std::stringstream in("1,abc\n");
    CHECK_THROWS_AS(gqm::read_csv(in, false), gqm::CsvError);
  }
  {
    std::stringstream in("1,2\n3\n");
    CHECK_THROWS_AS(gqm::read_csv(in, false), gqm::CsvError);  // ragged row
  }
  {
    std::stringstream in("");
    CHECK_THROWS_AS(gqm::read_csv(in, false), gqm::CsvError);  // no data
  }
  {
    std::stringstream in("v1,v2\n");
    CHECK_THROWS_AS(gqm::read_csv(in, true), gqm::CsvError);  // header only
  }
}

TEST_CASE("csv file io") {
  namespace fs = std::filesystem;
  const fs::path file = fs::temp_directory_path() / "gqm_dataset_io_test.csv";
  const Matrix pts = random_matrix(5, 2, 1234);
  gqm::write_csv(file, Dataset(pts), true);
  Dataset back = gqm::read_csv(file, true);
  CHECK(bit_equal(back.points(), pts));
  fs::remove(file);
  CHECK_THROWS_AS(gqm::read_csv(file, true), gqm::IoError);
}

}  // TEST_SUITE
