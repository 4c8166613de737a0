#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "dpforest/bench/scenario.hpp"
#include "dpforest/inference/fit.hpp"
#include "dpforest/inference/report.hpp"

namespace dpforest {

struct SetScore {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double f1() const;
};

SetScore score_mains(std::span<const int> detected, std::span<const int> truth);
// Pair orientation is ignored.
SetScore score_pairs(std::span<const VarPair> detected, std::span<const VarPair> truth);

struct MetricsRecord {
  SetScore mains;
  SetScore pairs;
  double rmse = 0.0;
};

// Monte Carlo integrated RMSE of `fhat` (raw units) against the truth over the
// predictor law.
double integrated_rmse(const ScenarioTruth& truth, std::size_t p,
                       const std::function<std::vector<double>(const Matrix&)>& fhat,
                       std::size_t n_points, RngStream& rng);

MetricsRecord score(const InteractionReport& report, const ScenarioTruth& truth, const FitResult& fit,
                    std::size_t n_mc_points, RngStream& rng);

enum class Method {
  DpForest,       // clustered model, K = T by default
  SingleCluster,  // same pipeline with K = 1
};
std::string to_string(Method method);
Method parse_method(const std::string& name);

// Chain lengths and model settings shared by both methods; the method only
// switches screening and the number of clusters.
FitConfig method_config(const FitConfig& base, Method method);

struct ExperimentConfig {
  ScenarioId scenario = ScenarioId::S3;
  std::size_t reps = 1;
  ScenarioOptions options;
  FitConfig fit;
  Method method = Method::DpForest;
  std::uint64_t base_seed = 1;
  std::size_t n_mc_points = 10000;
  std::size_t workers = 1;
};

struct RepRecord {
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  MetricsRecord metrics;
  double wall_seconds = 0.0;
};

struct ExperimentSummary {
  ExperimentConfig config;
  std::vector<RepRecord> records;
};

// Replicate r runs generate → fit → detect → score on RngStream(base_seed, r).
RepRecord run_replicate(const ExperimentConfig& config, std::size_t rep);
ExperimentSummary run_experiment(const ExperimentConfig& config);

void write_experiment_csv(std::ostream& out, const ExperimentSummary& summary);
// Means and SDs of every metric plus the resolved configuration. Wall time is
// reported separately so the rest stays reproducible.
Json summary_json(const ExperimentSummary& summary);

}  // namespace dpforest
