#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dpforest {

// Malformed input data. Row and column are 1-based file coordinates when known
// (0 means "not applicable").
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what, std::size_t row = 0,
                     std::size_t column = 0)
      : std::runtime_error(what), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dpforest
