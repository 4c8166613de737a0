#include "dpforest/bench/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

#include "dpforest/core/error.hpp"

namespace dpforest {

namespace {

VarPair ordered(VarPair p) { return p.first <= p.second ? p : VarPair{p.second, p.first}; }

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

MeanSd mean_sd(const std::vector<double>& v) {
  MeanSd out;
  if (v.empty()) return out;
  for (double x : v) out.mean += x;
  out.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return out;
}

}  // namespace

double SetScore::f1() const {
  const std::size_t denom = 2 * tp + fp + fn;
  if (denom == 0) return 1.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

SetScore score_mains(std::span<const int> detected, std::span<const int> truth) {
  const std::set<int> d(detected.begin(), detected.end());
  const std::set<int> t(truth.begin(), truth.end());
  SetScore s;
  for (int v : d) (t.count(v) ? s.tp : s.fp) += 1;
  for (int v : t) s.fn += d.count(v) ? 0 : 1;
  return s;
}

SetScore score_pairs(std::span<const VarPair> detected, std::span<const VarPair> truth) {
  std::set<VarPair> d, t;
  for (VarPair p : detected) d.insert(ordered(p));
  for (VarPair p : truth) t.insert(ordered(p));
  SetScore s;
  for (const VarPair& p : d) (t.count(p) ? s.tp : s.fp) += 1;
  for (const VarPair& p : t) s.fn += d.count(p) ? 0 : 1;
  return s;
}

double integrated_rmse(const ScenarioTruth& truth, std::size_t p,
                       const std::function<std::vector<double>(const Matrix&)>& fhat,
                       std::size_t n_points, RngStream& rng) {
  const Matrix pts = truth.draw_points(n_points, p, rng);
  const std::vector<double> est = fhat(pts);
  double ss = 0.0;
  for (std::size_t i = 0; i < n_points; ++i) {
    const double d = truth.f0(pts.row(i)) - est[i];
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(n_points));
}

MetricsRecord score(const InteractionReport& report, const ScenarioTruth& truth, const FitResult& fit,
                    std::size_t n_mc_points, RngStream& rng) {
  MetricsRecord m;
  m.mains = score_mains(report.detected_mains, truth.true_mains);
  m.pairs = score_pairs(report.detected_pairs, truth.true_pairs);
  m.rmse = integrated_rmse(
      truth, fit.num_features(), [&fit](const Matrix& x) { return posterior_mean(fit, x); }, n_mc_points, rng);
  return m;
}

std::string to_string(Method method) { return method == Method::DpForest ? "dp" : "single"; }

Method parse_method(const std::string& name) {
  if (name == "dp") return Method::DpForest;
  if (name == "single" || name == "k1") return Method::SingleCluster;
  throw ConfigError("method must be 'dp' or 'single', got '" + name + "'");
}

FitConfig method_config(const FitConfig& base, Method method) {
  FitConfig c = base;
  if (method == Method::SingleCluster) {
    c.num_clusters = 1;
  }
  return c;
}

RepRecord run_replicate(const ExperimentConfig& config, std::size_t rep) {
  const auto start = std::chrono::steady_clock::now();
  RngStream rng(config.base_seed, rep);
  RngStream data_rng = rng.child(1);
  RngStream fit_rng = rng.child(2);
  RngStream mc_rng = rng.child(3);
  auto [data, truth] = generate_scenario(config.scenario, config.options, data_rng);
  const FitConfig fc = method_config(config.fit, config.method);
  const FitResult result = fit(data, fc, fit_rng);
  const InteractionReport report = detect_interactions(result);
  RepRecord rec;
  rec.rep = rep;
  rec.seed = config.base_seed;
  rec.metrics = score(report, truth, result, config.n_mc_points, mc_rng);
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

ExperimentSummary run_experiment(const ExperimentConfig& config) {
  if (config.reps < 1) throw ConfigError("reps must be at least 1");
  ExperimentSummary summary;
  summary.config = config;
  summary.records.resize(config.reps);
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::size_t failed_rep = 0;
  auto worker = [&] {
    for (std::size_t r = next++; r < config.reps; r = next++) {
      try {
        summary.records[r] = run_replicate(config, r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error || r < failed_rep) {
          first_error = std::current_exception();
          failed_rep = r;
        }
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(config.workers, config.reps));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) {
    try {
      std::rethrow_exception(first_error);
    } catch (const std::exception& e) {
      throw std::runtime_error("replicate " + std::to_string(failed_rep) + " failed: " + e.what());
    }
  }
  return summary;
}

void write_experiment_csv(std::ostream& out, const ExperimentSummary& s) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "scenario,rep,seed,main_tp,main_fp,main_fn,pair_tp,pair_fp,pair_fn,f1_pairs,f1_mains,rmse,wall_seconds\n";
  for (const RepRecord& r : s.records) {
    const MetricsRecord& m = r.metrics;
    out << to_string(s.config.scenario) << ',' << r.rep << ',' << r.seed << ',' << m.mains.tp << ','
        << m.mains.fp << ',' << m.mains.fn << ',' << m.pairs.tp << ',' << m.pairs.fp << ',' << m.pairs.fn << ','
        << m.pairs.f1() << ',' << m.mains.f1() << ',' << m.rmse << ',' << r.wall_seconds << '\n';
  }
  out.precision(old);
}

Json summary_json(const ExperimentSummary& s) {
  std::vector<double> f1p, f1m, rmse, pfp, pfn, mfp, mfn, wall;
  for (const RepRecord& r : s.records) {
    f1p.push_back(r.metrics.pairs.f1());
    f1m.push_back(r.metrics.mains.f1());
    rmse.push_back(r.metrics.rmse);
    pfp.push_back(static_cast<double>(r.metrics.pairs.fp));
    pfn.push_back(static_cast<double>(r.metrics.pairs.fn));
    mfp.push_back(static_cast<double>(r.metrics.mains.fp));
    mfn.push_back(static_cast<double>(r.metrics.mains.fn));
    wall.push_back(r.wall_seconds);
  }
  auto ms = [](const std::vector<double>& v) {
    const MeanSd m = mean_sd(v);
    return Json{{"mean", m.mean}, {"sd", m.sd}};
  };
  const ExperimentConfig& c = s.config;
  return Json{{"schema_version", kSchemaVersion},
              {"scenario", to_string(c.scenario)},
              {"method", to_string(c.method)},
              {"reps", c.reps},
              {"base_seed", c.base_seed},
              {"n", c.options.n > 0 ? c.options.n : preset_size(c.scenario, c.options.preset).n},
              {"p", c.options.p > 0 ? c.options.p : preset_size(c.scenario, c.options.preset).p},
              {"preset", to_string(c.options.preset)},
              {"friedman_pi", c.options.friedman_pi},
              {"n_mc_points", c.n_mc_points},
              {"fit", to_json(method_config(c.fit, c.method))},
              {"metrics",
               {{"f1_pairs", ms(f1p)},
                {"f1_mains", ms(f1m)},
                {"pair_fp", ms(pfp)},
                {"pair_fn", ms(pfn)},
                {"main_fp", ms(mfp)},
                {"main_fn", ms(mfn)},
                {"rmse", ms(rmse)}}},
              {"wall_seconds", ms(wall)}};
}

}  // namespace dpforest
