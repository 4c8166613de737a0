#pragma once

#include <span>
#include <utility>
#include <vector>

#include "dpforest/core/dataset.hpp"

namespace dpforest {

struct FeatureRange {
  double min = 0.0;
  double max = 1.0;

  bool operator==(const FeatureRange&) const = default;
};

// Min-max maps for predictors onto [0, 1] and an affine map of the response
// onto [-0.5, 0.5].
struct TransformSpec {
  std::vector<FeatureRange> features;
  double center = 0.0;
  double half_range = 0.5;

  double forward_x(std::size_t j, double v) const {
    return (v - features[j].min) / (features[j].max - features[j].min);
  }
  double inverse_x(std::size_t j, double v) const {
    return features[j].min + v * (features[j].max - features[j].min);
  }
  double forward_y(double v) const { return (v - center) / (2.0 * half_range); }
  double inverse_y(double v) const { return center + v * (2.0 * half_range); }
  // Scale factor from transformed-response units to raw units.
  double y_scale() const { return 2.0 * half_range; }

  Matrix forward(const Matrix& raw_x) const;
  std::vector<double> forward_point(std::span<const double> raw) const;

  bool operator==(const TransformSpec&) const = default;
};

// Throws DataError naming the column for a constant predictor, and for a
// constant response.
std::pair<Dataset, TransformSpec> standardize(const Dataset& data);

}  // namespace dpforest
