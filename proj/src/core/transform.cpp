#include "dpforest/core/transform.hpp"

#include <algorithm>

#include "dpforest/core/error.hpp"

namespace dpforest {

Matrix TransformSpec::forward(const Matrix& raw_x) const {
  Matrix out(raw_x.rows(), raw_x.cols());
  for (std::size_t j = 0; j < raw_x.cols(); ++j) {
    for (std::size_t i = 0; i < raw_x.rows(); ++i) out(i, j) = forward_x(j, raw_x(i, j));
  }
  return out;
}

std::vector<double> TransformSpec::forward_point(std::span<const double> raw) const {
  std::vector<double> out(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j) out[j] = forward_x(j, raw[j]);
  return out;
}

std::pair<Dataset, TransformSpec> standardize(const Dataset& data) {
  data.validate();
  TransformSpec spec;
  spec.features.resize(data.num_features());
  for (std::size_t j = 0; j < data.num_features(); ++j) {
    const auto col = data.x.col(j);
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    if (!(*hi > *lo)) {
      throw DataError("constant predictor column '" + data.feature_name(j) + "'", 0, j + 1);
    }
    spec.features[j] = {*lo, *hi};
  }
  const auto [ylo, yhi] = std::minmax_element(data.y.begin(), data.y.end());
  if (!(*yhi > *ylo)) throw DataError("constant response");
  spec.center = 0.5 * (*ylo + *yhi);
  spec.half_range = 0.5 * (*yhi - *ylo);

  Dataset out;
  out.x = spec.forward(data.x);
  out.y.resize(data.y.size());
  // Rounding in the affine map can overshoot the interval ends by an ulp.
  for (std::size_t i = 0; i < data.y.size(); ++i) out.y[i] = std::clamp(spec.forward_y(data.y[i]), -0.5, 0.5);
  out.feature_names = data.feature_names;
  return {std::move(out), std::move(spec)};
}

}  // namespace dpforest
