#include "dpforest/sampler/config.hpp"

#include <cmath>
#include <numbers>

#include "dpforest/core/error.hpp"

namespace dpforest {

double ScalePrior::log_density(double v) const {
  if (!(v > 0.0)) return kLogZero;
  switch (kind) {
    case Kind::HalfCauchy:
      return -std::log1p((v / scale) * (v / scale));
    case Kind::HalfNormal:
      return -0.5 * (v / scale) * (v / scale);
    case Kind::Exponential:
      return -v / scale;
  }
  return kLogZero;
}

double ScalePrior::draw(RngStream& rng) const {
  switch (kind) {
    case Kind::HalfCauchy:
      return scale * std::abs(std::tan(std::numbers::pi * (rng.uniform() - 0.5)));
    case Kind::HalfNormal:
      return scale * std::abs(rng.normal());
    case Kind::Exponential:
      return scale * rng.exponential();
  }
  return scale;
}

std::string to_string(ScalePrior::Kind kind) {
  switch (kind) {
    case ScalePrior::Kind::HalfCauchy:
      return "half_cauchy";
    case ScalePrior::Kind::HalfNormal:
      return "half_normal";
    case ScalePrior::Kind::Exponential:
      return "exponential";
  }
  return "unknown";
}

ScalePrior::Kind parse_scale_prior_kind(const std::string& name) {
  if (name == "half_cauchy") return ScalePrior::Kind::HalfCauchy;
  if (name == "half_normal") return ScalePrior::Kind::HalfNormal;
  if (name == "exponential") return ScalePrior::Kind::Exponential;
  throw ConfigError("unknown prior family '" + name + "'");
}

std::string to_string(GateMode mode) { return mode == GateMode::Hard ? "hard" : "soft"; }

GateMode parse_gate_mode(const std::string& name) {
  if (name == "hard") return GateMode::Hard;
  if (name == "soft") return GateMode::Soft;
  throw ConfigError("mode must be 'hard' or 'soft', got '" + name + "'");
}

void SamplerConfig::validate() const {
  if (n_iterations < 1) throw ConfigError("iterations must be positive");
  if (thin < 1) throw ConfigError("thin must be at least 1");
  if (n_burnin >= n_iterations) throw ConfigError("burn-in must be smaller than the iteration count");
  if (moves.grow < 0 || moves.prune < 0 || moves.change < 0) {
    throw ConfigError("move probabilities must be nonnegative");
  }
  if (std::abs(moves.grow + moves.prune + moves.change - 1.0) > 1e-9) {
    throw ConfigError("move probabilities must sum to 1");
  }
  if (!(slice_width > 0.0)) throw ConfigError("slice width must be positive");
  if (refresh_every < 1) throw ConfigError("refresh interval must be positive");
  topology.validate();
  for (const ScalePrior* p : {&priors.sigma, &priors.sigma_mu, &priors.alpha, &priors.omega, &priors.tau}) {
    if (!(p->scale > 0.0)) throw ConfigError("prior scales must be positive");
  }
}

}  // namespace dpforest
