#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "glmcorr/fit.hpp"

namespace glmcorr {

// Input file cannot be opened.
class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numeric table read from CSV: a header row of column names followed by
// rows of numbers. Blank lines and lines starting with '#' are skipped.
struct DataFrame {
  std::vector<std::string> names;
  Eigen::MatrixXd values;

  int rows() const noexcept { return static_cast<int>(values.rows()); }
  int cols() const noexcept { return static_cast<int>(values.cols()); }
  // Index of a column given by name or by 1-based position; throws DataError.
  int column(std::string_view key) const;
  Eigen::VectorXd get(std::string_view key) const;
};

// Throws DataError naming the source and line on malformed content.
DataFrame parse_csv(std::istream& in, std::string_view source = "<input>");
// Throws FileError when the file cannot be opened.
DataFrame read_csv(const std::string& path);

// Design from the listed columns, with a leading "(Intercept)" column of
// ones when requested.
DesignMatrix build_design(const DataFrame& df, const std::vector<std::string>& covariates, bool intercept);

}  // namespace glmcorr
