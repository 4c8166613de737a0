#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace dpforest {

// Dense column-major matrix of doubles. Columns are contiguous because the
// sampler scans one predictor across all rows at a time.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return data_[c * rows_ + r];
  }
  double& operator()(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    return data_[c * rows_ + r];
  }

  std::span<const double> col(std::size_t c) const {
    return {data_.data() + c * rows_, rows_};
  }
  std::span<double> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }

  std::vector<double> row(std::size_t r) const {
    std::vector<double> out(cols_);
    for (std::size_t c = 0; c < cols_; ++c) out[c] = (*this)(r, c);
    return out;
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace dpforest
