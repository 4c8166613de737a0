#include "dpforest/sampler/geweke.hpp"

#include <array>
#include <cmath>

#include "dpforest/core/ensemble.hpp"
#include "dpforest/core/error.hpp"
#include "dpforest/prior/forest_prior.hpp"
#include "dpforest/sampler/gibbs.hpp"

namespace dpforest {

namespace {

constexpr std::size_t kNumStats = 4;
using Stats = std::array<double, kNumStats>;

Stats statistics(const ChainState& s) {
  double branches = 0.0;
  for (const Tree& t : s.trees) branches += static_cast<double>(t.num_branches());
  return {s.sigma * s.sigma, branches, std::exp(s.log_s[0][0]),
          static_cast<double>(s.occupied_clusters())};
}

ChainState draw_prior_state(const GewekeConfig& cfg, RngStream& rng) {
  const HyperPriors& hp = cfg.sampler.priors;
  ChainState s;
  s.sigma = hp.sigma.draw(rng);
  s.sigma_mu = hp.sigma_mu.draw(rng);
  s.alpha = hp.alpha.draw(rng);
  s.omega = hp.omega.draw(rng);
  ClusterPrior cluster{s.alpha, s.omega, cfg.num_clusters, uniform_weights(cfg.num_features)};
  ForestDraw f = sample_forest_prior(cluster, cfg.sampler.topology, cfg.num_trees, rng);
  const double leaf_sd = s.sigma_mu / std::sqrt(static_cast<double>(cfg.num_trees));
  for (Tree& t : f.trees) {
    if (cfg.sampler.mode == GateMode::Soft) t.set_tau(hp.tau.draw(rng));
    for (NodeId leaf : t.leaves()) t.set_mu(leaf, rng.normal(0.0, leaf_sd));
  }
  s.trees = std::move(f.trees);
  s.z = std::move(f.z);
  s.log_s = std::move(f.log_s);
  s.log_pi = std::move(f.log_pi);
  return s;
}

std::vector<double> draw_response(const std::vector<double>& fit, double sigma, RngStream& rng) {
  std::vector<double> y(fit.size());
  for (std::size_t i = 0; i < fit.size(); ++i) y[i] = fit[i] + sigma * rng.normal();
  return y;
}

}  // namespace

SamplerConfig GewekeConfig::default_sampler() {
  SamplerConfig c;
  c.n_iterations = 2;
  c.n_burnin = 0;
  c.priors.sigma = {ScalePrior::Kind::HalfNormal, 1.0};
  c.priors.sigma_mu = {ScalePrior::Kind::HalfNormal, 1.0};
  return c;
}

std::vector<GewekeStatistic> run_geweke(const GewekeConfig& cfg) {
  if (cfg.iterations < cfg.batches || cfg.batches < 2) throw ConfigError("geweke needs at least 2 batches");
  RngStream root(cfg.seed, 0);
  RngStream design_rng = root.child(1);
  RngStream mc_rng = root.child(2);
  RngStream sc_rng = root.child(3);

  Matrix x(cfg.num_rows, cfg.num_features);
  for (std::size_t j = 0; j < cfg.num_features; ++j) {
    for (std::size_t i = 0; i < cfg.num_rows; ++i) x(i, j) = design_rng.uniform();
  }
  const std::vector<double> w = uniform_weights(cfg.num_features);

  // Marginal-conditional: iid prior draws.
  Stats sum_mc{}, sq_mc{};
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    const Stats s = statistics(draw_prior_state(cfg, mc_rng));
    for (std::size_t k = 0; k < kNumStats; ++k) {
      sum_mc[k] += s[k];
      sq_mc[k] += s[k] * s[k];
    }
  }

  // Successive-conditional: Gibbs sweep, then y | parameters.
  ChainState state = draw_prior_state(cfg, sc_rng);
  std::vector<double> y = draw_response(ensemble_fit(state, x, cfg.sampler.mode), state.sigma, sc_rng);
  GibbsSampler sampler(x, y, w, cfg.sampler);
  sampler.attach(state);
  const std::size_t batch_len = cfg.iterations / cfg.batches;
  std::vector<Stats> batch_sums(cfg.batches, Stats{});
  for (std::size_t it = 0; it < batch_len * cfg.batches; ++it) {
    sampler.step(state, sc_rng);
    sampler.set_response(draw_response(sampler.fitted(), state.sigma, sc_rng));
    const Stats s = statistics(state);
    for (std::size_t k = 0; k < kNumStats; ++k) batch_sums[it / batch_len][k] += s[k];
  }

  static const std::array<const char*, kNumStats> names{"sigma2", "total_branches", "s1_cluster1",
                                                        "occupied_clusters"};
  std::vector<GewekeStatistic> out;
  const double n_mc = static_cast<double>(cfg.iterations);
  const double nb = static_cast<double>(cfg.batches);
  for (std::size_t k = 0; k < kNumStats; ++k) {
    GewekeStatistic g;
    g.name = names[k];
    g.mean_mc = sum_mc[k] / n_mc;
    const double var_mc = std::max(0.0, sq_mc[k] / n_mc - g.mean_mc * g.mean_mc);
    g.se_mc = std::sqrt(var_mc / n_mc);
    double mean = 0.0;
    for (const Stats& b : batch_sums) mean += b[k] / static_cast<double>(batch_len);
    mean /= nb;
    double var = 0.0;
    for (const Stats& b : batch_sums) {
      const double d = b[k] / static_cast<double>(batch_len) - mean;
      var += d * d;
    }
    g.mean_sc = mean;
    g.se_sc = std::sqrt(var / (nb - 1.0) / nb);
    const double se = std::sqrt(g.se_mc * g.se_mc + g.se_sc * g.se_sc);
    g.z = se > 0.0 ? (g.mean_sc - g.mean_mc) / se : 0.0;
    out.push_back(g);
  }
  return out;
}

}  // namespace dpforest
