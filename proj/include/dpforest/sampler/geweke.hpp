#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dpforest/sampler/config.hpp"

namespace dpforest {

// Joint-distribution check of the sampler: iid draws of (parameters, y) from
// the prior are compared with a chain alternating one Gibbs sweep and a fresh
// y given the parameters.
struct GewekeConfig {
  std::size_t num_rows = 20;
  std::size_t num_features = 3;
  std::size_t num_trees = 5;
  std::size_t num_clusters = 3;
  std::size_t iterations = 50000;
  std::size_t batches = 50;
  std::uint64_t seed = 1;
  SamplerConfig sampler = default_sampler();

  // Half-normal noise and signal scales: under half-Cauchy sigma the
  // statistic sigma^2 has no finite mean.
  static SamplerConfig default_sampler();
};

struct GewekeStatistic {
  std::string name;
  double mean_mc = 0.0;  // marginal-conditional (iid prior) simulator
  double se_mc = 0.0;
  double mean_sc = 0.0;  // successive-conditional (Gibbs) simulator
  double se_sc = 0.0;    // batch means
  double z = 0.0;
};

std::vector<GewekeStatistic> run_geweke(const GewekeConfig& config);

}  // namespace dpforest
