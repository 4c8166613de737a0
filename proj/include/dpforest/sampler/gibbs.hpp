#pragma once

#include <array>
#include <vector>

#include "dpforest/core/chain_state.hpp"
#include "dpforest/core/dataset.hpp"
#include "dpforest/core/rng.hpp"
#include "dpforest/sampler/conditionals.hpp"
#include "dpforest/sampler/config.hpp"
#include "dpforest/sampler/moves.hpp"

namespace dpforest {

struct MoveTally {
  std::array<std::size_t, 3> proposed{};
  std::array<std::size_t, 3> accepted{};
};

/// Backfitting Gibbs sampler over a fixed design.
///
/// The sampler owns per-tree fitted values (and row assignments in hard mode)
/// for the state it is attached to, so step() must always receive that same
/// state. Call attach() again after changing a state from outside.
class GibbsSampler {
 public:
  GibbsSampler(Matrix x, std::vector<double> y, std::vector<double> w, SamplerConfig config);

  // Deterministic starting point: single-leaf trees with mu = 0, labels
  // assigned round-robin, s = w, uniform pi, sigma = sd(y), sigma_mu = 0.25,
  // alpha = 0.1, omega = 1.
  ChainState initial_state(std::size_t num_trees, std::size_t num_clusters) const;

  void attach(const ChainState& state);
  void step(ChainState& state, RngStream& rng);

  void set_response(std::vector<double> y);
  const std::vector<double>& response() const { return y_; }
  const Matrix& design() const { return x_; }
  const std::vector<double>& weights() const { return w_; }
  const SamplerConfig& config() const { return config_; }

  // Incrementally maintained sum of tree fits at the training rows.
  const std::vector<double>& fitted() const { return total_fit_; }
  std::vector<double> fitted_from_scratch(const ChainState& state) const;
  void refresh(const ChainState& state);

  std::size_t iterations_done() const { return iterations_; }
  const MoveTally& tally() const { return tally_; }

 private:
  void update_tree(ChainState& state, std::size_t t, RngStream& rng);
  void update_tau(Tree& tree, RngStream& rng, double sigma, double sigma_mu, std::size_t num_trees);
  void update_scalars(ChainState& state, RngStream& rng);

  Matrix x_;
  std::vector<double> y_;
  std::vector<double> w_;
  SamplerConfig config_;

  std::vector<std::vector<double>> tree_fit_;
  std::vector<RowAssignment> rows_;
  std::vector<double> total_fit_;
  std::vector<double> resid_;
  std::vector<double> new_fit_;
  std::vector<double> mu_by_node_;
  std::vector<int> counts_;
  std::size_t iterations_ = 0;
  MoveTally tally_;
};

// One Gibbs sweep from scratch (attaches a fresh sampler to the state).
ChainState gibbs_step(const ChainState& state, const Dataset& data, const std::vector<double>& w,
                      const SamplerConfig& config, RngStream& rng);

}  // namespace dpforest
