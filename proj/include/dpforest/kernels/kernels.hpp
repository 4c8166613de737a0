#pragma once

#include <cstddef>
#include <string_view>

#include "dpforest/core/tree.hpp"

/// Row-wise inner loops of the sampler.
///
/// Each kernel has a scalar reference and an AVX2 variant. Reductions use a
/// fixed four-lane accumulation order (lane k takes rows i with i % 4 == k,
/// lanes are combined as (l0 + l1) + (l2 + l3), tail rows are added last in
/// order), so both variants return bit-identical results and a chain's
/// trajectory does not depend on which one the CPU selected.
namespace dpforest::kernels {

struct SplitStats {
  std::size_t n_left = 0;
  std::size_t n_right = 0;
  double sum_left = 0.0;
  double sum_right = 0.0;
};

struct LeafStats {
  std::size_t n = 0;
  double sum = 0.0;
};

struct KernelTable {
  const char* name;
  // Rows with leaf_of_row[i] in {a, b}, split by xcol[i] <= cut.
  SplitStats (*split_stats)(const NodeId* leaf_of_row, NodeId a, NodeId b, const double* xcol,
                            double cut, const double* r, std::size_t n);
  LeafStats (*leaf_stats)(const NodeId* leaf_of_row, NodeId leaf, const double* r, std::size_t n);
  // out = (y - total) + tree_fit
  void (*partial_residual)(const double* y, const double* total, const double* tree_fit,
                           double* out, std::size_t n);
  // total = (total - old_fit) + new_fit
  void (*apply_delta)(double* total, const double* old_fit, const double* new_fit, std::size_t n);
  // sum of (a - b)^2
  double (*sum_squared_diff)(const double* a, const double* b, std::size_t n);
  // out[i] = values[idx[i]]
  void (*gather)(const double* values, const NodeId* idx, double* out, std::size_t n);
};

const KernelTable& scalar_table();
// nullptr when the build or the running CPU lacks AVX2.
const KernelTable* avx2_table();

// Table used by the sampler. Chosen once: AVX2 when available, unless the
// DPFOREST_SIMD environment variable says "scalar".
const KernelTable& active();
// Overrides the selection ("scalar", "avx2" or "auto"); returns false when
// the requested variant is unavailable.
bool select(std::string_view name);

}  // namespace dpforest::kernels
