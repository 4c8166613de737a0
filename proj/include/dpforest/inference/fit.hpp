#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dpforest/core/chain_state.hpp"
#include "dpforest/core/dataset.hpp"
#include "dpforest/core/rng.hpp"
#include "dpforest/core/transform.hpp"
#include "dpforest/sampler/config.hpp"
#include "dpforest/sampler/persistence.hpp"

namespace dpforest {

// How a single posterior draw decides that variables i and j interact.
enum class InteractionEvent {
  WithinTree,  // some tree has branches on both
  WithinPath,  // some root-to-leaf path has branches on both
};

std::string to_string(InteractionEvent event);
InteractionEvent parse_interaction_event(const std::string& name);

struct FitConfig {
  SamplerConfig sampler;
  std::size_t num_trees = 50;
  std::size_t num_clusters = 0;  // 0 means one per tree
  bool screen = true;
  // Screening chain length; 0 reuses the main chain's settings.
  std::size_t screen_iterations = 0;
  std::size_t screen_burnin = 0;
  double screen_threshold = 0.5;
  double threshold = 0.5;
  InteractionEvent event = InteractionEvent::WithinTree;

  std::size_t clusters() const { return num_clusters == 0 ? num_trees : num_clusters; }
  SamplerConfig screening_sampler() const;
  void validate() const;
};

Json to_json(const FitConfig& config);
FitConfig fit_config_from_json(const Json& j);

struct ScreeningReport {
  bool performed = false;
  double threshold = 0.5;
  std::vector<double> pip;  // empty when not performed
  std::vector<bool> kept;
  bool fallback = false;  // nothing survived; w reset to uniform
  std::string warning;
};

Json to_json(const ScreeningReport& report, const std::vector<std::string>& names);

struct PosteriorDraws {
  std::vector<ChainState> states;
  std::vector<std::size_t> iterations;  // 1-based sweep index of each draw

  std::size_t size() const noexcept { return states.size(); }
};

struct FitResult {
  PosteriorDraws draws;
  TransformSpec transform;
  std::vector<double> w;
  ScreeningReport screening;
  FitConfig config;
  std::uint64_t seed = 0;
  std::vector<std::string> feature_names;
  Matrix train_x;  // transformed training predictors
  double wall_seconds = 0.0;

  std::size_t num_features() const noexcept { return w.size(); }
};

// Retained draws of one chain on transformed data. `on_draw` (optional) sees
// each retained state; with `keep` false the draws are not stored.
PosteriorDraws run_chain(const Matrix& x, const std::vector<double>& y, const std::vector<double>& w,
                         const SamplerConfig& config, std::size_t num_trees, std::size_t num_clusters,
                         RngStream& rng,
                         const std::function<void(const ChainState&, std::size_t)>& on_draw = {},
                         bool keep = true);

// Single-cluster fit with uniform base weights on transformed data; variables
// whose inclusion probability reaches the threshold keep positive weight.
std::pair<std::vector<double>, ScreeningReport> screen(const Dataset& transformed, const FitConfig& config,
                                                       RngStream& rng);

// Standardize, screen, then run the DP-Forest chain with the screened weights.
FitResult fit(const Dataset& data, const FitConfig& config, RngStream& rng);

// Posterior-file round trip. `extra_config` entries are merged into the echoed
// configuration.
PosteriorHeader make_header(const FitResult& fit, const Json& extra_config = Json::object());
void write_posterior(std::ostream& out, const FitResult& fit, const Json& extra_config = Json::object());
FitResult fit_from_posterior(PosteriorFile file);

}  // namespace dpforest
