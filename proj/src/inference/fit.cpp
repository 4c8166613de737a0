#include "dpforest/inference/fit.hpp"

#include <chrono>
#include <ostream>

#include "dpforest/core/error.hpp"
#include "dpforest/prior/forest_prior.hpp"
#include "dpforest/sampler/gibbs.hpp"

namespace dpforest {

std::string to_string(InteractionEvent event) {
  return event == InteractionEvent::WithinTree ? "within_tree" : "within_path";
}

InteractionEvent parse_interaction_event(const std::string& name) {
  if (name == "within_tree" || name == "tree") return InteractionEvent::WithinTree;
  if (name == "within_path" || name == "path") return InteractionEvent::WithinPath;
  throw ConfigError("interaction event must be 'within_tree' or 'within_path', got '" + name + "'");
}

SamplerConfig FitConfig::screening_sampler() const {
  SamplerConfig s = sampler;
  if (screen_iterations > 0) {
    s.n_iterations = screen_iterations;
    s.n_burnin = screen_burnin;
  }
  return s;
}

void FitConfig::validate() const {
  sampler.validate();
  if (screen) screening_sampler().validate();
  if (num_trees < 1) throw ConfigError("number of trees must be positive");
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must lie in (0, 1)");
  if (!(screen_threshold > 0.0 && screen_threshold <= 1.0)) {
    throw ConfigError("screening threshold must lie in (0, 1]");
  }
}

Json to_json(const FitConfig& c) {
  return Json{{"sampler", to_json(c.sampler)},
              {"num_trees", c.num_trees},
              {"num_clusters", c.clusters()},
              {"screen", c.screen},
              {"screen_iterations", c.screening_sampler().n_iterations},
              {"screen_burnin", c.screening_sampler().n_burnin},
              {"screen_threshold", c.screen_threshold},
              {"threshold", c.threshold},
              {"interaction_event", to_string(c.event)}};
}

FitConfig fit_config_from_json(const Json& j) {
  FitConfig c;
  c.sampler = sampler_config_from_json(j.at("sampler"));
  c.num_trees = j.at("num_trees").get<std::size_t>();
  c.num_clusters = j.at("num_clusters").get<std::size_t>();
  c.screen = j.at("screen").get<bool>();
  c.screen_iterations = j.at("screen_iterations").get<std::size_t>();
  c.screen_burnin = j.at("screen_burnin").get<std::size_t>();
  c.screen_threshold = j.at("screen_threshold").get<double>();
  c.threshold = j.at("threshold").get<double>();
  c.event = parse_interaction_event(j.at("interaction_event").get<std::string>());
  return c;
}

Json to_json(const ScreeningReport& r, const std::vector<std::string>& names) {
  Json vars = Json::array();
  for (std::size_t j = 0; j < r.pip.size(); ++j) {
    vars.push_back({{"name", j < names.size() ? names[j] : "x" + std::to_string(j + 1)},
                    {"index", j + 1},
                    {"pip", r.pip[j]},
                    {"kept", static_cast<bool>(r.kept[j])}});
  }
  Json out{{"performed", r.performed}, {"threshold", r.threshold}, {"variables", std::move(vars)},
           {"fallback", r.fallback}};
  if (!r.warning.empty()) out["warning"] = r.warning;
  return out;
}

PosteriorDraws run_chain(const Matrix& x, const std::vector<double>& y, const std::vector<double>& w,
                         const SamplerConfig& config, std::size_t num_trees, std::size_t num_clusters,
                         RngStream& rng,
                         const std::function<void(const ChainState&, std::size_t)>& on_draw, bool keep) {
  GibbsSampler sampler(x, y, w, config);
  ChainState state = sampler.initial_state(num_trees, num_clusters);
  sampler.attach(state);
  PosteriorDraws draws;
  if (keep) {
    draws.states.reserve(config.retained_draws());
    draws.iterations.reserve(config.retained_draws());
  }
  for (std::size_t it = 1; it <= config.n_iterations; ++it) {
    sampler.step(state, rng);
    if (it <= config.n_burnin || (it - config.n_burnin) % config.thin != 0) continue;
    if (on_draw) on_draw(state, it);
    if (keep) {
      draws.states.push_back(state);
      draws.iterations.push_back(it);
    }
  }
  return draws;
}

std::pair<std::vector<double>, ScreeningReport> screen(const Dataset& transformed, const FitConfig& config,
                                                       RngStream& rng) {
  const std::size_t p = transformed.num_features();
  ScreeningReport report;
  report.threshold = config.screen_threshold;
  if (p == 1) {
    report.pip = {1.0};
    report.kept = {true};
    return {{1.0}, report};
  }
  report.performed = true;
  const SamplerConfig sc = config.screening_sampler();
  std::vector<std::size_t> hits(p, 0);
  std::vector<int> counts(p);
  std::size_t n_draws = 0;
  run_chain(
      transformed.x, transformed.y, uniform_weights(p), sc, config.num_trees, 1, rng,
      [&](const ChainState& s, std::size_t) {
        std::fill(counts.begin(), counts.end(), 0);
        for (const Tree& t : s.trees) {
          for (std::int32_t v : t.split_vars()) counts[static_cast<std::size_t>(v)] = 1;
        }
        for (std::size_t j = 0; j < p; ++j) hits[j] += static_cast<std::size_t>(counts[j]);
        ++n_draws;
      },
      false);

  std::vector<double> w(p, 0.0);
  report.pip.resize(p);
  report.kept.resize(p);
  std::size_t kept = 0;
  for (std::size_t j = 0; j < p; ++j) {
    report.pip[j] = static_cast<double>(hits[j]) / static_cast<double>(n_draws);
    report.kept[j] = report.pip[j] >= config.screen_threshold;
    kept += report.kept[j] ? 1 : 0;
  }
  if (kept == 0) {
    report.fallback = true;
    report.warning = "screening removed every predictor; using uniform weights";
    return {uniform_weights(p), report};
  }
  for (std::size_t j = 0; j < p; ++j) w[j] = report.kept[j] ? 1.0 / static_cast<double>(kept) : 0.0;
  return {w, report};
}

FitResult fit(const Dataset& data, const FitConfig& config, RngStream& rng) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  data.validate();
  auto [transformed, spec] = standardize(data);

  FitResult result;
  result.config = config;
  result.seed = rng.seed();
  result.transform = spec;
  result.feature_names.reserve(data.num_features());
  for (std::size_t j = 0; j < data.num_features(); ++j) result.feature_names.push_back(data.feature_name(j));

  RngStream screen_rng = rng.child(1);
  RngStream chain_rng = rng.child(2);
  if (config.screen) {
    auto [w, report] = screen(transformed, config, screen_rng);
    result.w = std::move(w);
    result.screening = std::move(report);
  } else {
    result.w = uniform_weights(data.num_features());
    result.screening.threshold = config.screen_threshold;
  }
  result.draws = run_chain(transformed.x, transformed.y, result.w, config.sampler, config.num_trees,
                           config.clusters(), chain_rng);
  result.train_x = std::move(transformed.x);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

PosteriorHeader make_header(const FitResult& fit, const Json& extra_config) {
  PosteriorHeader h;
  h.config = Json{{"fit", to_json(fit.config)}};
  for (const auto& [key, value] : extra_config.items()) h.config[key] = value;
  h.transform = fit.transform;
  h.seed = fit.seed;
  h.feature_names = fit.feature_names;
  h.w = fit.w;
  h.screening = to_json(fit.screening, fit.feature_names);
  return h;
}

void write_posterior(std::ostream& out, const FitResult& fit, const Json& extra_config) {
  write_header(out, make_header(fit, extra_config));
  for (std::size_t d = 0; d < fit.draws.size(); ++d) write_draw(out, fit.draws.states[d], fit.draws.iterations[d]);
}

FitResult fit_from_posterior(PosteriorFile file) {
  FitResult fit;
  const PosteriorHeader& h = file.header;
  fit.config = fit_config_from_json(h.config.at("fit"));
  fit.transform = h.transform;
  fit.seed = h.seed;
  fit.feature_names = h.feature_names;
  fit.w = h.w;
  const Json& s = h.screening;
  fit.screening.performed = s.value("performed", false);
  fit.screening.threshold = s.value("threshold", 0.5);
  fit.screening.fallback = s.value("fallback", false);
  fit.screening.warning = s.value("warning", std::string());
  if (s.contains("variables")) {
    for (const Json& v : s.at("variables")) {
      fit.screening.pip.push_back(v.at("pip").get<double>());
      fit.screening.kept.push_back(v.at("kept").get<bool>());
    }
  }
  fit.draws.states = std::move(file.draws);
  fit.draws.iterations = std::move(file.iterations);
  return fit;
}

}  // namespace dpforest
