#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dpforest/core/matrix.hpp"

namespace dpforest {

struct Dataset {
  Matrix x;
  std::vector<double> y;
  std::vector<std::string> feature_names;

  std::size_t num_rows() const noexcept { return x.rows(); }
  std::size_t num_features() const noexcept { return x.cols(); }

  // Throws DataError when N < 2, P < 1, sizes disagree or a value is not finite.
  void validate() const;
  std::string feature_name(std::size_t j) const;
};

// CSV with a header row. `response` names the response column; every other
// column is a predictor. Cells must parse completely as finite numbers.
Dataset read_csv(std::istream& in, const std::string& response);
Dataset read_csv_file(const std::string& path, const std::string& response);

// Predictor-only CSV (header row, columns matched by name to `feature_names`;
// extra columns are ignored).
Matrix read_predictors_csv(std::istream& in, const std::vector<std::string>& feature_names);

void write_csv(std::ostream& out, const Dataset& data, const std::string& response = "y");

}  // namespace dpforest
