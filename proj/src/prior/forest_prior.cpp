#include "dpforest/prior/forest_prior.hpp"

#include "dpforest/core/error.hpp"

namespace dpforest {

void ClusterPrior::validate() const {
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (!(omega > 0.0)) throw ConfigError("omega must be positive");
  if (k_max < 1) throw ConfigError("truncation level K must be at least 1");
  bool any = false;
  double total = 0.0;
  for (double v : w) {
    if (!(v >= 0.0)) throw ConfigError("base weights must be nonnegative");
    any = any || v > 0.0;
    total += v;
  }
  if (!any) throw ConfigError("base weights need at least one positive entry");
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("base weights must sum to 1");
}

std::vector<double> ClusterPrior::base_params() const {
  std::vector<double> out(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) out[j] = alpha * w[j];
  return out;
}

std::vector<double> uniform_weights(std::size_t p) {
  return std::vector<double>(p, 1.0 / static_cast<double>(p));
}

ForestDraw sample_forest_prior(const ClusterPrior& cluster, const TopologyPrior& topology,
                               std::size_t num_trees, RngStream& rng) {
  cluster.validate();
  if (num_trees < 1) throw ConfigError("forest needs at least one tree");
  ForestDraw draw;
  const std::size_t k = cluster.k_max;
  if (k == 1) {
    draw.log_pi = {0.0};
  } else {
    draw.log_pi = log_dirichlet(std::vector<double>(k, cluster.omega / static_cast<double>(k)), rng);
  }
  draw.z.resize(num_trees);
  for (auto& label : draw.z) {
    label = k == 1 ? 0 : static_cast<std::int32_t>(rng.categorical_log(draw.log_pi));
  }
  const auto params = cluster.base_params();
  draw.log_s.reserve(k);
  for (std::size_t c = 0; c < k; ++c) draw.log_s.push_back(log_dirichlet(params, rng));
  draw.trees.reserve(num_trees);
  for (std::size_t t = 0; t < num_trees; ++t) {
    draw.trees.push_back(sample_tree(topology, draw.log_s[static_cast<std::size_t>(draw.z[t])], rng));
  }
  return draw;
}

}  // namespace dpforest
