#include "dpforest/cli/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "dpforest/bench/experiment.hpp"
#include "dpforest/core/error.hpp"
#include "dpforest/inference/fit.hpp"
#include "dpforest/inference/report.hpp"
#include "dpforest/prior/probe.hpp"
#include "dpforest/sampler/geweke.hpp"
#include "dpforest/sampler/persistence.hpp"

namespace dpforest::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

struct RunOptions {
  std::string data;
  std::string response = "y";
  std::string out;
  std::uint64_t seed = kDefaultSeed;
  CLI::Option* seed_opt = nullptr;

  std::size_t iters = 10000;
  std::size_t burnin = 5000;
  std::size_t thin = 1;
  std::size_t trees = 50;
  std::size_t clusters = 0;
  std::string mode = "hard";
  double threshold = 0.5;
  std::string event = "within_tree";
  double alpha_mean = 0.1;
  double omega_mean = 1.0;
  bool screen = true;
  std::size_t screen_iters = 0;
  std::size_t screen_burnin = 0;
  double gamma = 0.95;
  double beta = 2.0;
};

void add_seed(CLI::App* app, RunOptions& o) {
  o.seed_opt = app->add_option("--seed", o.seed, "Random seed (falls back to DPFOREST_SEED, then 1)");
}

void add_model_options(CLI::App* app, RunOptions& o) {
  add_seed(app, o);
  app->add_option("--iters", o.iters, "Total sweeps per chain")->capture_default_str();
  app->add_option("--burnin", o.burnin, "Sweeps discarded before retaining draws")->capture_default_str();
  app->add_option("--thin", o.thin, "Keep every thin-th draw after burn-in")->capture_default_str();
  app->add_option("--trees", o.trees, "Number of trees")->capture_default_str();
  app->add_option("--clusters", o.clusters, "Truncation level K (0 means one per tree)")->capture_default_str();
  app->add_option("--mode", o.mode, "Gating: hard or soft")->capture_default_str();
  app->add_option("--threshold", o.threshold, "Detection threshold")->capture_default_str();
  app->add_option("--event", o.event, "Interaction event: within_tree or within_path")->capture_default_str();
  app->add_option("--alpha-mean", o.alpha_mean, "Mean of the exponential prior on alpha")->capture_default_str();
  app->add_option("--omega-mean", o.omega_mean, "Mean of the exponential prior on omega")->capture_default_str();
  app->add_option("--screen", o.screen, "Run the screening stage")->capture_default_str();
  app->add_option("--screen-iters", o.screen_iters, "Screening sweeps (0 reuses --iters)")->capture_default_str();
  app->add_option("--screen-burnin", o.screen_burnin, "Screening burn-in (with --screen-iters)")->capture_default_str();
  app->add_option("--gamma", o.gamma, "Tree prior base split probability")->capture_default_str();
  app->add_option("--beta", o.beta, "Tree prior depth penalty")->capture_default_str();
}

std::uint64_t resolve_seed(const RunOptions& o) {
  if (o.seed_opt != nullptr && o.seed_opt->count() > 0) return o.seed;
  if (const char* env = std::getenv("DPFOREST_SEED"); env != nullptr && *env != '\0') {
    std::uint64_t v = 0;
    std::istringstream in(env);
    if (!(in >> v) || !in.eof()) throw ConfigError(std::string("DPFOREST_SEED is not an integer: '") + env + "'");
    return v;
  }
  return kDefaultSeed;
}

FitConfig resolve_fit_config(const RunOptions& o) {
  FitConfig c;
  c.sampler.n_iterations = o.iters;
  c.sampler.n_burnin = o.burnin;
  c.sampler.thin = o.thin;
  c.sampler.mode = parse_gate_mode(o.mode);
  c.sampler.topology.gamma = o.gamma;
  c.sampler.topology.beta = o.beta;
  c.sampler.priors.alpha.scale = o.alpha_mean;
  c.sampler.priors.omega.scale = o.omega_mean;
  c.num_trees = o.trees;
  c.num_clusters = o.clusters;
  c.threshold = o.threshold;
  c.event = parse_interaction_event(o.event);
  c.screen = o.screen;
  c.screen_iterations = o.screen_iters;
  c.screen_burnin = o.screen_burnin;
  c.validate();
  return c;
}

// Writes to `path`, or to `fallback` when the path is empty or "-".
void with_output(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& fn) {
  if (path.empty() || path == "-") {
    fn(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot open output file '" + path + "'");
  fn(file);
  if (!file) throw ConfigError("failed writing '" + path + "'");
}

// CSV artifacts carry their provenance in a JSON sidecar next to the file.
void write_sidecar(const std::string& path, const Json& meta) {
  if (path.empty() || path == "-") return;
  with_output(path + ".meta.json", std::cout, [&](std::ostream& o) { o << meta.dump(2) << '\n'; });
}

Json provenance(const std::string& command, std::uint64_t seed, Json config) {
  return Json{{"schema_version", kSchemaVersion}, {"command", command}, {"seed", seed}, {"config", std::move(config)}};
}

FitResult load_posterior(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open posterior file '" + path + "'");
  return fit_from_posterior(read_posterior(in));
}

int parse_var(const std::string& token, const std::vector<std::string>& names) {
  const auto it = std::find(names.begin(), names.end(), token);
  if (it != names.end()) return static_cast<int>(it - names.begin());
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(token, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != token.size() || v < 1 || static_cast<std::size_t>(v) > names.size()) {
    throw ConfigError("unknown variable '" + token + "' (use a column name or a 1-based index)");
  }
  return v - 1;
}

// Flat config file: "key = value" per line, '#' starts a comment. Each entry
// becomes "--key value" ahead of the explicit flags, which therefore win.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::vector<std::string> tokens;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string v) {
    const auto b = v.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = v.find_last_not_of(" \t\r");
    return v.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config file '" + path + "' line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key.empty()) throw ConfigError("config file '" + path + "' line " + std::to_string(line_no) + ": empty key");
    tokens.push_back("--" + key);
    tokens.push_back(value);
  }
  return tokens;
}

// Moves "--config FILE" out of the argument list and splices the file's
// entries in right after the subcommand name.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("--config needs a file name");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty() || rest.empty()) return rest;
  std::vector<std::string> out{rest.front()};
  for (std::string& t : config_tokens(path)) out.push_back(std::move(t));
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

void last_value_wins(CLI::App* app) {
  for (CLI::Option* opt : app->get_options()) {
    if (opt->get_items_expected_max() == 1) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  }
}

void print_error(std::ostream& err, const std::string& kind, const std::string& message,
                 std::size_t row = 0, std::size_t column = 0) {
  Json j{{"error", kind}, {"message", message}};
  if (row > 0) j["row"] = row;
  if (column > 0) j["column"] = column;
  err << j.dump() << '\n';
}

int cmd_fit(const RunOptions& o, const std::string& screening_out, std::ostream& out, std::ostream& err) {
  const std::uint64_t seed = resolve_seed(o);
  const FitConfig config = resolve_fit_config(o);
  if (o.data.empty()) throw ConfigError("--data is required");
  if (o.out.empty()) throw ConfigError("--out is required");
  const Dataset data = read_csv_file(o.data, o.response);
  RngStream rng(seed, 0);
  const FitResult result = fit(data, config, rng);
  if (!result.screening.warning.empty()) {
    err << Json{{"warning", result.screening.warning}}.dump() << '\n';
  }
  const Json cli{{"command", "fit"}, {"data", o.data}, {"response", o.response}};
  with_output(o.out, out, [&](std::ostream& s) { write_posterior(s, result, Json{{"cli", cli}}); });
  const std::string screen_path = screening_out.empty() ? o.out + ".screening.json" : screening_out;
  Json report = provenance("fit", seed, make_header(result, Json{{"cli", cli}}).config);
  report["screening"] = to_json(result.screening, result.feature_names);
  with_output(screen_path, out, [&](std::ostream& s) { s << report.dump(2) << '\n'; });
  err << Json{{"info", "fit complete"}, {"draws", result.draws.size()}, {"wall_seconds", result.wall_seconds}}.dump()
      << '\n';
  return kExitOk;
}

int cmd_interactions(const std::string& posterior, std::optional<double> threshold, const std::string& event,
                     const std::string& path, std::ostream& out) {
  FitResult f = load_posterior(posterior);
  if (!event.empty()) f.config.event = parse_interaction_event(event);
  const double t = threshold.value_or(f.config.threshold);
  if (!(t > 0.0 && t < 1.0)) throw ConfigError("threshold must lie in (0, 1)");
  const InteractionReport rep = detect_interactions(f, t);
  Json j = provenance("interactions", f.seed, Json{{"posterior", posterior}, {"fit", to_json(f.config)}});
  j["report"] = to_json(rep, f.feature_names);
  with_output(path, out, [&](std::ostream& s) { s << j.dump(2) << '\n'; });
  return kExitOk;
}

int cmd_predict(const std::string& posterior, const std::string& data_path, const std::string& path,
                std::ostream& out) {
  const FitResult f = load_posterior(posterior);
  std::ifstream in(data_path);
  if (!in) throw ConfigError("cannot open data file '" + data_path + "'");
  const Matrix x = read_predictors_csv(in, f.feature_names);
  const PredictionSummary p = predict(f, x);
  with_output(path, out, [&](std::ostream& s) {
    s << std::setprecision(std::numeric_limits<double>::max_digits10) << "mean,sd,lower,upper\n";
    for (std::size_t i = 0; i < p.mean.size(); ++i) {
      s << p.mean[i] << ',' << p.sd[i] << ',' << p.lower[i] << ',' << p.upper[i] << '\n';
    }
  });
  write_sidecar(path, provenance("predict", f.seed, Json{{"posterior", posterior}, {"data", data_path}}));
  return kExitOk;
}

int cmd_pd(const std::string& posterior, const std::string& data_path, const std::vector<std::string>& vars,
           const std::vector<std::size_t>& grid, std::size_t max_draws, const std::string& path, std::ostream& out) {
  FitResult f = load_posterior(posterior);
  if (vars.size() != 2) throw ConfigError("--vars takes exactly two variables");
  if (grid.empty() || grid.size() > 2) throw ConfigError("--grid takes one or two sizes");
  std::ifstream in(data_path);
  if (!in) throw ConfigError("cannot open data file '" + data_path + "'");
  f.train_x = f.transform.forward(read_predictors_csv(in, f.feature_names));
  const int vi = parse_var(vars[0], f.feature_names);
  const int vj = parse_var(vars[1], f.feature_names);
  const std::size_t ni = grid[0];
  const std::size_t nj = grid.size() == 2 ? grid[1] : grid[0];
  const PartialDependence pd = partial_dependence(f, vi, vj, ni, nj, max_draws);
  with_output(path, out, [&](std::ostream& s) { write_pd_csv(s, pd); });
  write_sidecar(path, provenance("pd", f.seed,
                                 Json{{"posterior", posterior},
                                      {"data", data_path},
                                      {"vars", {f.feature_names[static_cast<std::size_t>(vi)],
                                                f.feature_names[static_cast<std::size_t>(vj)]}},
                                      {"grid", {ni, nj}},
                                      {"max_draws", max_draws}}));
  return kExitOk;
}

int cmd_simulate(const RunOptions& o, const std::string& scenario, std::size_t reps, const std::string& preset,
                 std::size_t n, std::size_t p, const std::string& method, std::size_t workers, std::size_t n_mc,
                 bool friedman_pi, std::ostream& out) {
  ExperimentConfig c;
  c.scenario = parse_scenario(scenario);
  c.reps = reps;
  c.options.preset = parse_preset(preset);
  c.options.n = n;
  c.options.p = p;
  c.options.friedman_pi = friedman_pi;
  c.fit = resolve_fit_config(o);
  c.method = parse_method(method);
  c.base_seed = resolve_seed(o);
  c.n_mc_points = n_mc;
  c.workers = workers;
  const ExperimentSummary s = run_experiment(c);
  with_output(o.out, out, [&](std::ostream& st) { write_experiment_csv(st, s); });
  if (!o.out.empty() && o.out != "-") {
    Json meta = provenance("simulate", c.base_seed, summary_json(s));
    with_output(o.out + ".json", out, [&](std::ostream& st) { st << meta.dump(2) << '\n'; });
  }
  return kExitOk;
}

int cmd_probe(const RunOptions& o, const std::vector<double>& alphas, const std::vector<double>& omegas,
              std::size_t p, std::size_t t, std::size_t k, std::size_t draws, std::ostream& out) {
  const std::uint64_t seed = resolve_seed(o);
  if (p < 1 || t < 1) throw ConfigError("--P and --T must be positive");
  if (draws < 1000) throw ConfigError("--draws must be at least 1000");
  TopologyPrior topo{o.gamma, o.beta};
  topo.validate();
  ProbeSettings settings{t, p, draws};
  std::vector<PriorProbeReport> reports;
  std::size_t stream = 0;
  for (double omega : omegas) {
    for (double alpha : alphas) {
      if (!(alpha > 0.0) || omega < 0.0) throw ConfigError("alpha must be positive and omega nonnegative");
      ClusterPrior cp{alpha, omega > 0.0 ? omega : 1.0, omega > 0.0 ? (k == 0 ? t : k) : 1, uniform_weights(p)};
      RngStream rng(seed, stream++);
      reports.push_back(probe_prior(cp, topo, settings, rng));
    }
  }
  with_output(o.out, out, [&](std::ostream& s) {
    write_probe_csv_header(s);
    for (const auto& r : reports) write_probe_csv_row(s, r);
  });
  write_sidecar(o.out, provenance("probe-prior", seed,
                                  Json{{"alpha", alphas},
                                       {"omega", omegas},
                                       {"P", p},
                                       {"T", t},
                                       {"K", k == 0 ? t : k},
                                       {"draws", draws},
                                       {"gamma", o.gamma},
                                       {"beta", o.beta}}));
  return kExitOk;
}

int cmd_geweke(const RunOptions& o, GewekeConfig g, std::ostream& out) {
  g.seed = resolve_seed(o);
  g.sampler.mode = parse_gate_mode(o.mode);
  g.sampler.validate();
  const std::vector<GewekeStatistic> stats = run_geweke(g);
  with_output(o.out, out, [&](std::ostream& s) {
    s << std::setprecision(10) << "statistic,mean_mc,se_mc,mean_sc,se_sc,z\n";
    for (const auto& st : stats) {
      s << st.name << ',' << st.mean_mc << ',' << st.se_mc << ',' << st.mean_sc << ',' << st.se_sc << ',' << st.z
        << '\n';
    }
  });
  write_sidecar(o.out, provenance("geweke", g.seed,
                                  Json{{"N", g.num_rows},
                                       {"P", g.num_features},
                                       {"T", g.num_trees},
                                       {"K", g.num_clusters},
                                       {"iterations", g.iterations},
                                       {"batches", g.batches},
                                       {"sampler", to_json(g.sampler)}}));
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"DP-Forest: Bayesian additive trees with clustered splitting proportions", "dpforest"};
  app.require_subcommand(1);

  RunOptions fit_o;
  std::string screening_out;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Screen and fit; writes a JSON-lines posterior");
  fit_cmd->add_option("--config", "Flat key = value file of flag defaults");
  fit_cmd->add_option("--data", fit_o.data, "Training CSV with a header row");
  fit_cmd->add_option("--response", fit_o.response, "Response column name")->capture_default_str();
  fit_cmd->add_option("--out", fit_o.out, "Posterior output path (JSON lines)");
  fit_cmd->add_option("--screening-out", screening_out, "Screening report path (default <out>.screening.json)");
  add_model_options(fit_cmd, fit_o);

  std::string posterior, inter_out, inter_event;
  std::optional<double> inter_threshold;
  CLI::App* inter_cmd = app.add_subcommand("interactions", "Inclusion and interaction probabilities");
  inter_cmd->add_option("--posterior", posterior, "Posterior file from fit")->required();
  inter_cmd->add_option("--threshold", inter_threshold, "Detection threshold (default: the fit's)");
  inter_cmd->add_option("--event", inter_event, "within_tree or within_path (default: the fit's)");
  inter_cmd->add_option("--out", inter_out, "Output path (default stdout)");

  std::string pred_posterior, pred_data, pred_out;
  CLI::App* pred_cmd = app.add_subcommand("predict", "Posterior mean, SD and 95% interval per row");
  pred_cmd->add_option("--posterior", pred_posterior, "Posterior file from fit")->required();
  pred_cmd->add_option("--data", pred_data, "CSV of points (columns matched by name)")->required();
  pred_cmd->add_option("--out", pred_out, "Output CSV (default stdout)");

  std::string pd_posterior, pd_data, pd_out;
  std::vector<std::string> pd_vars;
  std::vector<std::size_t> pd_grid{10};
  std::size_t pd_max_draws = 0;
  CLI::App* pd_cmd = app.add_subcommand("pd", "Two-variable partial-dependence grid");
  pd_cmd->add_option("--posterior", pd_posterior, "Posterior file from fit")->required();
  pd_cmd->add_option("--data", pd_data, "Training CSV (predictor columns matched by name)")->required();
  pd_cmd->add_option("--vars", pd_vars, "Two variables, by name or 1-based index")->required()->delimiter(',');
  pd_cmd->add_option("--grid", pd_grid, "Grid size, or two sizes")->delimiter(',')->capture_default_str();
  pd_cmd->add_option("--max-draws", pd_max_draws, "Use at most this many draws (0 = all)");
  pd_cmd->add_option("--out", pd_out, "Output CSV (default stdout)");

  RunOptions sim_o;
  std::string sim_scenario = "S3", sim_preset = "desk", sim_method = "dp";
  std::size_t sim_reps = 1, sim_n = 0, sim_p = 0, sim_workers = 1, sim_mc = 10000;
  bool sim_pi = false;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Replicated scenario benchmark");
  sim_cmd->add_option("--config", "Flat key = value file of flag defaults");
  sim_cmd->add_option("--scenario", sim_scenario, "S1, S2, S3, S4 or S2-intro")->capture_default_str();
  sim_cmd->add_option("--reps", sim_reps, "Replicates")->capture_default_str();
  sim_cmd->add_option("--preset", sim_preset, "desk or paper sizes")->capture_default_str();
  sim_cmd->add_option("--n", sim_n, "Override N");
  sim_cmd->add_option("--p", sim_p, "Override P");
  sim_cmd->add_option("--method", sim_method, "dp or single (K = 1); --screen applies to both")->capture_default_str();
  sim_cmd->add_option("--workers", sim_workers, "Parallel replicates")->capture_default_str();
  sim_cmd->add_option("--mc-points", sim_mc, "Monte Carlo points for integrated RMSE")->capture_default_str();
  sim_cmd->add_flag("--friedman-pi", sim_pi, "Use sin(pi x1 x2) in S4");
  sim_cmd->add_option("--out", sim_o.out, "Per-rep CSV path (summary JSON goes to <out>.json)");
  add_model_options(sim_cmd, sim_o);

  RunOptions probe_o;
  std::vector<double> probe_alpha{0.1, 1.0, 10.0};
  std::vector<double> probe_omega{1.0};
  std::size_t probe_p = 5, probe_t = 50, probe_k = 0, probe_draws = 20000;
  CLI::App* probe_cmd = app.add_subcommand("probe-prior", "Monte Carlo interaction-structure prior probe");
  probe_cmd->add_option("--alpha", probe_alpha, "Concentrations")->delimiter(',')->capture_default_str();
  probe_cmd->add_option("--omega", probe_omega, "DP precisions (0 = single cluster)")->delimiter(',')->capture_default_str();
  probe_cmd->add_option("--P", probe_p, "Predictors")->capture_default_str();
  probe_cmd->add_option("--T", probe_t, "Trees")->capture_default_str();
  probe_cmd->add_option("--K", probe_k, "Truncation level (0 = T)")->capture_default_str();
  probe_cmd->add_option("--draws", probe_draws, "Prior draws per setting")->capture_default_str();
  probe_cmd->add_option("--gamma", probe_o.gamma, "Tree prior base split probability")->capture_default_str();
  probe_cmd->add_option("--beta", probe_o.beta, "Tree prior depth penalty")->capture_default_str();
  probe_cmd->add_option("--out", probe_o.out, "Output CSV (default stdout)");
  add_seed(probe_cmd, probe_o);

  RunOptions gw_o;
  GewekeConfig gw;
  CLI::App* gw_cmd = app.add_subcommand("geweke", "Joint-distribution test of the sampler");
  gw_cmd->add_option("--iters", gw.iterations, "Draws per simulator")->capture_default_str();
  gw_cmd->add_option("--batches", gw.batches, "Batches for the chain's standard error")->capture_default_str();
  gw_cmd->add_option("--N", gw.num_rows, "Rows")->capture_default_str();
  gw_cmd->add_option("--P", gw.num_features, "Predictors")->capture_default_str();
  gw_cmd->add_option("--T", gw.num_trees, "Trees")->capture_default_str();
  gw_cmd->add_option("--K", gw.num_clusters, "Clusters")->capture_default_str();
  gw_cmd->add_option("--mode", gw_o.mode, "hard or soft")->capture_default_str();
  gw_cmd->add_option("--out", gw_o.out, "Output CSV (default stdout)");
  add_seed(gw_cmd, gw_o);

  for (CLI::App* sub : app.get_subcommands({})) last_value_wins(sub);
  try {
    std::vector<std::string> expanded;
    try {
      expanded = expand_config(args);
    } catch (const ConfigError& e) {
      print_error(err, "config", e.what());
      return kExitConfigError;
    }
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // Subcommand help requests surface as ParseError with exit code 0.
    if (e.get_exit_code() == 0) {
      for (CLI::App* sub : app.get_subcommands()) out << sub->help();
      return kExitOk;
    }
    print_error(err, "config", e.what());
    return kExitConfigError;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(fit_o, screening_out, out, err);
    if (inter_cmd->parsed()) return cmd_interactions(posterior, inter_threshold, inter_event, inter_out, out);
    if (pred_cmd->parsed()) return cmd_predict(pred_posterior, pred_data, pred_out, out);
    if (pd_cmd->parsed()) return cmd_pd(pd_posterior, pd_data, pd_vars, pd_grid, pd_max_draws, pd_out, out);
    if (sim_cmd->parsed()) {
      return cmd_simulate(sim_o, sim_scenario, sim_reps, sim_preset, sim_n, sim_p, sim_method, sim_workers, sim_mc,
                          sim_pi, out);
    }
    if (probe_cmd->parsed()) {
      return cmd_probe(probe_o, probe_alpha, probe_omega, probe_p, probe_t, probe_k, probe_draws, out);
    }
    if (gw_cmd->parsed()) return cmd_geweke(gw_o, gw, out);
  } catch (const DataError& e) {
    print_error(err, "data", e.what(), e.row(), e.column());
    return kExitDataError;
  } catch (const ConfigError& e) {
    print_error(err, "config", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    print_error(err, "internal", e.what());
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace dpforest::cli
