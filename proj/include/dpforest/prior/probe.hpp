#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "dpforest/prior/forest_prior.hpp"

namespace dpforest {

// Monte Carlo ratio estimate. `value` is empty when the conditioning event
// never occurred (count 0).
struct ProbeEstimate {
  std::optional<double> value;
  double se = 0.0;
  std::size_t conditioning_events = 0;
};

struct PairsVsVars {
  std::size_t included = 0;   // number of included variables
  std::size_t draws = 0;      // prior draws in this bin
  double mean_pairs = 0.0;    // mean number of interacting pairs
};

struct PriorProbeReport {
  double alpha = 0.0;
  double omega = 0.0;  // 0 encodes the single-cluster limit
  ProbeEstimate lambda;
  ProbeEstimate xi;
  std::vector<PairsVsVars> pairs_vs_vars;
  std::size_t n_draws = 0;
};

struct ProbeSettings {
  std::size_t num_trees = 50;
  std::size_t num_features = 5;
  std::size_t n_draws = 20000;
};

// Inclusion (some branch splits on i) and interaction (one tree has branches
// on both i and j) frequencies under the forest prior. Lambda conditions on
// the pair being included; Xi on (i,j) and (k,j) interacting, for fixed j.
PriorProbeReport probe_prior(const ClusterPrior& cluster, const TopologyPrior& topology,
                             const ProbeSettings& settings, RngStream& rng);

void write_probe_csv_header(std::ostream& out);
void write_probe_csv_row(std::ostream& out, const PriorProbeReport& report);

}  // namespace dpforest
