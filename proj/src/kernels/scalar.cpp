#include "dpforest/kernels/kernels.hpp"

namespace dpforest::kernels {

namespace {

SplitStats split_stats_scalar(const NodeId* ids, NodeId a, NodeId b, const double* x, double cut,
                              const double* r, std::size_t n) {
  double left[4] = {0.0, 0.0, 0.0, 0.0};
  double right[4] = {0.0, 0.0, 0.0, 0.0};
  SplitStats out;
  const std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    for (std::size_t k = 0; k < 4; ++k) {
      const bool in = ids[i + k] == a || ids[i + k] == b;
      const bool le = x[i + k] <= cut;
      left[k] += (in && le) ? r[i + k] : 0.0;
      right[k] += (in && !le) ? r[i + k] : 0.0;
      out.n_left += (in && le) ? 1 : 0;
      out.n_right += (in && !le) ? 1 : 0;
    }
  }
  out.sum_left = (left[0] + left[1]) + (left[2] + left[3]);
  out.sum_right = (right[0] + right[1]) + (right[2] + right[3]);
  for (std::size_t i = n4; i < n; ++i) {
    if (ids[i] != a && ids[i] != b) continue;
    if (x[i] <= cut) {
      out.sum_left += r[i];
      ++out.n_left;
    } else {
      out.sum_right += r[i];
      ++out.n_right;
    }
  }
  return out;
}

LeafStats leaf_stats_scalar(const NodeId* ids, NodeId leaf, const double* r, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  LeafStats out;
  const std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    for (std::size_t k = 0; k < 4; ++k) {
      const bool in = ids[i + k] == leaf;
      acc[k] += in ? r[i + k] : 0.0;
      out.n += in ? 1 : 0;
    }
  }
  out.sum = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (std::size_t i = n4; i < n; ++i) {
    if (ids[i] == leaf) {
      out.sum += r[i];
      ++out.n;
    }
  }
  return out;
}

void partial_residual_scalar(const double* y, const double* total, const double* fit, double* out,
                             std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (y[i] - total[i]) + fit[i];
}

void apply_delta_scalar(double* total, const double* old_fit, const double* new_fit, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) total[i] = (total[i] - old_fit[i]) + new_fit[i];
}

double sum_squared_diff_scalar(const double* a, const double* b, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    for (std::size_t k = 0; k < 4; ++k) {
      const double d = a[i + k] - b[i + k];
      acc[k] += d * d;
    }
  }
  double total = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (std::size_t i = n4; i < n; ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

void gather_scalar(const double* values, const NodeId* idx, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = values[idx[i]];
}

constexpr KernelTable kScalar{
    "scalar",         split_stats_scalar,      leaf_stats_scalar, partial_residual_scalar,
    apply_delta_scalar, sum_squared_diff_scalar, gather_scalar,
};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace dpforest::kernels
