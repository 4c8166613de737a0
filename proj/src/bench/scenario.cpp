#include "dpforest/bench/scenario.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "dpforest/core/error.hpp"

namespace dpforest {

namespace {

double s1_component(std::size_t v, double x) {
  switch (v) {
    case 0:
      return x;
    case 1:
      return 1.0 / (1.0 + x);
    case 2:
      return std::sin(x);
    case 3:
      return std::exp(x);
    default:
      return x * x;
  }
}

// Composite Simpson rule on [0, 1].
double simpson01(const std::function<double(double)>& f, std::size_t intervals = 4000) {
  const double h = 1.0 / static_cast<double>(intervals);
  double s = f(0.0) + f(1.0);
  for (std::size_t i = 1; i < intervals; ++i) {
    s += (i % 2 == 1 ? 4.0 : 2.0) * f(static_cast<double>(i) * h);
  }
  return s * h / 3.0;
}

}  // namespace

std::string to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::S1:
      return "S1";
    case ScenarioId::S2:
      return "S2";
    case ScenarioId::S3:
      return "S3";
    case ScenarioId::S4:
      return "S4";
    case ScenarioId::S2Intro:
      return "S2-intro";
  }
  return "?";
}

ScenarioId parse_scenario(const std::string& name) {
  for (ScenarioId id : {ScenarioId::S1, ScenarioId::S2, ScenarioId::S3, ScenarioId::S4, ScenarioId::S2Intro}) {
    if (to_string(id) == name) return id;
  }
  throw ConfigError("unknown scenario '" + name + "' (expected S1, S2, S3, S4 or S2-intro)");
}

std::string to_string(Preset preset) { return preset == Preset::Desk ? "desk" : "paper"; }

Preset parse_preset(const std::string& name) {
  if (name == "desk") return Preset::Desk;
  if (name == "paper") return Preset::Paper;
  throw ConfigError("preset must be 'desk' or 'paper', got '" + name + "'");
}

ScenarioSize preset_size(ScenarioId id, Preset preset) {
  const bool desk = preset == Preset::Desk;
  switch (id) {
    case ScenarioId::S1:
      return {300, desk ? 20u : 50u};
    case ScenarioId::S2:
    case ScenarioId::S3:
    case ScenarioId::S2Intro:
      return {100, desk ? 20u : 100u};
    case ScenarioId::S4:
      return {250, desk ? 50u : 250u};
  }
  return {100, 20};
}

const S1Constants& s1_constants() {
  static const S1Constants constants = [] {
    S1Constants c;
    for (std::size_t v = 0; v < 5; ++v) {
      const double m = simpson01([v](double x) { return s1_component(v, x); });
      const double m2 = simpson01([v](double x) { return s1_component(v, x) * s1_component(v, x); });
      c.mean[v] = m;
      c.sd[v] = std::sqrt(m2 - m * m);
    }
    return c;
  }();
  return constants;
}

double ScenarioTruth::f0(std::span<const double> x) const {
  switch (id) {
    case ScenarioId::S1: {
      std::array<double, 5> f{};
      double sum = 0.0;
      for (std::size_t v = 0; v < 5; ++v) {
        f[v] = (s1_component(v, x[v]) - s1.mean[v]) / s1.sd[v];
        sum += f[v];
      }
      return std::sqrt(0.5) * (sum + f[0] * f[1] + f[0] * f[2]);
    }
    case ScenarioId::S2:
    case ScenarioId::S2Intro:
      return x[0] + x[1] * x[1] + x[2] + x[3] * x[3] + x[4] + x[0] * x[1] + x[1] * x[2] + x[2] * x[3];
    case ScenarioId::S3:
      return x[0] + x[1] * x[1] + x[2] + x[3] * x[3] + x[4];
    case ScenarioId::S4: {
      const double arg = friedman_pi ? std::numbers::pi * x[0] * x[1] : x[0] * x[1];
      return 10.0 * std::sin(arg) + 20.0 * (x[2] - 0.5) * (x[2] - 0.5) + 10.0 * x[3] + 5.0 * x[4];
    }
  }
  return 0.0;
}

Matrix ScenarioTruth::draw_points(std::size_t m, std::size_t p, RngStream& rng) const {
  Matrix x(m, p);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      x(i, j) = law == Law::UniformCube ? rng.uniform() : law_sd * rng.normal();
    }
  }
  return x;
}

ScenarioTruth scenario_truth(ScenarioId id, bool friedman_pi) {
  ScenarioTruth t;
  t.id = id;
  t.friedman_pi = friedman_pi;
  t.true_mains = {0, 1, 2, 3, 4};
  switch (id) {
    case ScenarioId::S1:
      t.sigma_noise = 1.0;
      t.law = ScenarioTruth::Law::UniformCube;
      t.s1 = s1_constants();
      t.true_pairs = {{0, 1}, {0, 2}};
      break;
    case ScenarioId::S2:
    case ScenarioId::S2Intro:
      t.sigma_noise = 0.14;
      t.law = ScenarioTruth::Law::Normal;
      t.law_sd = id == ScenarioId::S2 ? 1.0 : std::sqrt(0.02);
      t.true_pairs = {{0, 1}, {1, 2}, {2, 3}};
      break;
    case ScenarioId::S3:
      t.sigma_noise = 0.14;
      t.law = ScenarioTruth::Law::Normal;
      break;
    case ScenarioId::S4:
      t.sigma_noise = 1.0;
      t.law = ScenarioTruth::Law::UniformCube;
      t.true_pairs = {{0, 1}};
      break;
  }
  return t;
}

std::pair<Dataset, ScenarioTruth> generate_scenario(ScenarioId id, const ScenarioOptions& options,
                                                    RngStream& rng) {
  const ScenarioSize size = preset_size(id, options.preset);
  const std::size_t n = options.n > 0 ? options.n : size.n;
  const std::size_t p = options.p > 0 ? options.p : size.p;
  if (n < 10) throw ConfigError("scenario N must be at least 10");
  if (p < 5) throw ConfigError("scenario P must be at least 5 (the number of active variables)");
  ScenarioTruth truth = scenario_truth(id, options.friedman_pi);
  Dataset data;
  data.x = truth.draw_points(n, p, rng);
  data.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    data.y[i] = truth.f0(data.x.row(i)) + truth.sigma_noise * rng.normal();
  }
  for (std::size_t j = 0; j < p; ++j) data.feature_names.push_back("x" + std::to_string(j + 1));
  return {std::move(data), std::move(truth)};
}

}  // namespace dpforest
