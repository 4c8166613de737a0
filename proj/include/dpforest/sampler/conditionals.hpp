#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dpforest/core/chain_state.hpp"
#include "dpforest/core/matrix.hpp"
#include "dpforest/core/rng.hpp"

namespace dpforest {

// Branch counts per tree and per cluster. Matrices are row-major with P
// columns.
struct SplitCounts {
  std::size_t num_features = 0;
  std::vector<int> per_tree;     // T x P
  std::vector<int> per_cluster;  // K x P
  std::vector<int> occupancy;    // K

  static SplitCounts compute(const ChainState& state);

  std::span<const int> tree(std::size_t t) const {
    return {per_tree.data() + t * num_features, num_features};
  }
  std::span<const int> cluster(std::size_t k) const {
    return {per_cluster.data() + k * num_features, num_features};
  }
};

void count_splits(const Tree& tree, std::span<int> out);

// Row -> leaf map of a hard tree over the training rows.
struct RowAssignment {
  std::vector<NodeId> leaf_of_row;
  void rebuild(const Tree& tree, const Matrix& x);
};

// Conjugate leaf update. Leaves are drawn in depth-first order. With `rows`
// given (hard mode) the per-leaf sums come from the assignment.
void draw_leaf_values(Tree& tree, const Matrix& x, std::span<const double> residuals, double sigma,
                      double sigma_mu, std::size_t num_trees, GateMode mode, RngStream& rng,
                      const RowAssignment* rows = nullptr);

// Normalized log p(k) for a tree's label given its split counts.
std::vector<double> cluster_label_log_probs(std::span<const int> tree_counts,
                                            std::span<const double> log_pi,
                                            const std::vector<std::vector<double>>& log_s);
std::int32_t draw_cluster_label(std::span<const int> tree_counts, std::span<const double> log_pi,
                                const std::vector<std::vector<double>>& log_s, RngStream& rng);

// log of a Dirichlet(alpha * w + counts) draw; zero-weight coordinates stay -inf.
std::vector<double> draw_split_proportions(std::span<const int> cluster_counts, double alpha,
                                           std::span<const double> w, RngStream& rng);

// log of a Dirichlet(omega / K + m_k) draw.
std::vector<double> draw_mixture_weights(std::span<const int> occupancy, double omega, RngStream& rng);

// Log Dirichlet density of exp(log_x) under the given parameters, over the
// coordinates with a positive parameter.
double log_dirichlet_density(std::span<const double> log_x, std::span<const double> params);

}  // namespace dpforest
