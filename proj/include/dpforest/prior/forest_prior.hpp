#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dpforest/core/rng.hpp"
#include "dpforest/core/tree.hpp"
#include "dpforest/prior/tree_prior.hpp"

namespace dpforest {

// Truncated Dirichlet-process prior over the per-cluster splitting
// proportions. Base measure Dirichlet(alpha * w), weights Dirichlet(omega / K).
struct ClusterPrior {
  double alpha = 0.1;
  double omega = 1.0;
  std::size_t k_max = 1;
  std::vector<double> w;

  void validate() const;
  // Dirichlet parameters alpha * w_j (zero where w_j is zero).
  std::vector<double> base_params() const;
};

std::vector<double> uniform_weights(std::size_t p);

struct ForestDraw {
  std::vector<Tree> trees;
  std::vector<std::int32_t> z;             // 0-based
  std::vector<std::vector<double>> log_s;  // per cluster
  std::vector<double> log_pi;
};

ForestDraw sample_forest_prior(const ClusterPrior& cluster, const TopologyPrior& topology,
                               std::size_t num_trees, RngStream& rng);

}  // namespace dpforest
