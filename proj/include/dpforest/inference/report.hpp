#pragma once

#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "dpforest/inference/fit.hpp"

namespace dpforest {

struct PredictionSummary {
  std::vector<double> mean;
  std::vector<double> sd;
  std::vector<double> lower;  // 2.5% posterior quantile
  std::vector<double> upper;  // 97.5%
};

// Rows of `raw_x` are points in raw predictor units; outputs are raw response
// units.
PredictionSummary predict(const FitResult& fit, const Matrix& raw_x);
std::vector<double> posterior_mean(const FitResult& fit, const Matrix& raw_x);

// Per-draw predictions (draws x points, row-major) in raw units.
std::vector<double> draw_predictions(const FitResult& fit, const Matrix& raw_x);

using VarPair = std::pair<int, int>;  // 0-based, first < second

struct InteractionReport {
  std::vector<double> main_effect_prob;
  std::map<VarPair, double> pair_prob;  // pairs never observed are absent
  std::vector<int> detected_mains;
  std::vector<VarPair> detected_pairs;
  double threshold = 0.5;
  InteractionEvent event = InteractionEvent::WithinTree;
  std::size_t n_draws = 0;

  double pair(int i, int j) const;
};

// Per-draw split sets of one state: included variables and interacting pairs.
struct DrawStructure {
  std::vector<int> included;
  std::vector<VarPair> pairs;
};
DrawStructure draw_structure(const ChainState& state, InteractionEvent event);

InteractionReport detect_interactions(const PosteriorDraws& draws, std::size_t num_features,
                                      double threshold, InteractionEvent event);
InteractionReport detect_interactions(const FitResult& fit, double threshold);
InteractionReport detect_interactions(const FitResult& fit);

Json to_json(const InteractionReport& report, const std::vector<std::string>& names);

struct PartialDependence {
  int vi = 0;
  int vj = 1;
  std::vector<double> grid_i;  // raw units
  std::vector<double> grid_j;
  std::vector<double> mean;    // grid_i.size() x grid_j.size(), row-major
  std::vector<double> sd;

  double at(std::size_t a, std::size_t b) const { return mean[a * grid_j.size() + b]; }
};

// Uniform grids over the training range of each variable (a single-point grid
// sits at the midpoint). At each grid point, the other coordinates range over
// the training rows. `max_draws` > 0 uses that many evenly spaced draws.
PartialDependence partial_dependence(const FitResult& fit, int vi, int vj, std::size_t n_i,
                                     std::size_t n_j, std::size_t max_draws = 0);

// Root-mean-square double-centered residual of the surface; zero for an
// additive surface.
double interaction_contrast(const PartialDependence& pd);

void write_pd_csv(std::ostream& out, const PartialDependence& pd);

}  // namespace dpforest
