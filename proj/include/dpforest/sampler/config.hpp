#pragma once

#include <cstddef>
#include <string>

#include "dpforest/core/rng.hpp"
#include "dpforest/core/tree.hpp"
#include "dpforest/prior/tree_prior.hpp"

namespace dpforest {

struct MoveProbabilities {
  double grow = 0.4;
  double prune = 0.4;
  double change = 0.2;
};

// Prior for a positive scalar. Log densities are unnormalized.
struct ScalePrior {
  enum class Kind { HalfCauchy, HalfNormal, Exponential };
  Kind kind = Kind::HalfCauchy;
  double scale = 1.0;  // mean for Exponential

  double log_density(double v) const;
  double draw(RngStream& rng) const;
};

std::string to_string(ScalePrior::Kind kind);
ScalePrior::Kind parse_scale_prior_kind(const std::string& name);
std::string to_string(GateMode mode);
GateMode parse_gate_mode(const std::string& name);

struct HyperPriors {
  ScalePrior sigma{ScalePrior::Kind::HalfCauchy, 1.0};
  ScalePrior sigma_mu{ScalePrior::Kind::HalfCauchy, 0.25};
  ScalePrior alpha{ScalePrior::Kind::Exponential, 0.1};
  ScalePrior omega{ScalePrior::Kind::Exponential, 1.0};
  // Soft-gate bandwidth of each tree.
  ScalePrior tau{ScalePrior::Kind::Exponential, 0.1};
};

struct SamplerConfig {
  std::size_t n_iterations = 10000;
  std::size_t n_burnin = 5000;
  std::size_t thin = 1;
  MoveProbabilities moves;
  double slice_width = 1.0;
  GateMode mode = GateMode::Hard;
  TopologyPrior topology;
  HyperPriors priors;
  // Disabling an update holds that scalar at its current value.
  bool update_sigma = true;
  bool update_sigma_mu = true;
  bool update_alpha = true;
  bool update_omega = true;
  std::size_t refresh_every = 100;

  std::size_t retained_draws() const { return (n_iterations - n_burnin) / thin; }
  void validate() const;
};

}  // namespace dpforest
