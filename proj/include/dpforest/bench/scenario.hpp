#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dpforest/core/dataset.hpp"
#include "dpforest/core/rng.hpp"
#include "dpforest/inference/report.hpp"

namespace dpforest {

enum class ScenarioId { S1, S2, S3, S4, S2Intro };
enum class Preset { Desk, Paper };

std::string to_string(ScenarioId id);
ScenarioId parse_scenario(const std::string& name);
std::string to_string(Preset preset);
Preset parse_preset(const std::string& name);

struct ScenarioSize {
  std::size_t n = 0;
  std::size_t p = 0;
};
ScenarioSize preset_size(ScenarioId id, Preset preset);

struct ScenarioOptions {
  std::size_t n = 0;  // 0 keeps the preset value
  std::size_t p = 0;
  Preset preset = Preset::Desk;
  bool friedman_pi = false;  // S4 with sin(pi x1 x2)
};

// Centering and scaling constants of the five S1 components under
// Uniform(0, 1).
struct S1Constants {
  std::array<double, 5> mean{};
  std::array<double, 5> sd{};
};
const S1Constants& s1_constants();

struct ScenarioTruth {
  enum class Law { UniformCube, Normal };

  ScenarioId id = ScenarioId::S1;
  double sigma_noise = 1.0;
  Law law = Law::UniformCube;
  double law_sd = 1.0;  // coordinate SD of the normal law
  bool friedman_pi = false;
  S1Constants s1;
  std::vector<int> true_mains;        // 0-based
  std::vector<VarPair> true_pairs;    // 0-based, first < second

  double f0(std::span<const double> x) const;
  // Points drawn iid from the predictor law, one row each.
  Matrix draw_points(std::size_t m, std::size_t p, RngStream& rng) const;
};

ScenarioTruth scenario_truth(ScenarioId id, bool friedman_pi = false);

std::pair<Dataset, ScenarioTruth> generate_scenario(ScenarioId id, const ScenarioOptions& options,
                                                    RngStream& rng);

}  // namespace dpforest
