#include "dpforest/sampler/gibbs.hpp"

#include <cmath>
#include <stdexcept>

#include "dpforest/core/ensemble.hpp"
#include "dpforest/core/error.hpp"
#include "dpforest/kernels/kernels.hpp"
#include "dpforest/sampler/marginal.hpp"
#include "dpforest/sampler/slice.hpp"

namespace dpforest {

GibbsSampler::GibbsSampler(Matrix x, std::vector<double> y, std::vector<double> w,
                           SamplerConfig config)
    : x_(std::move(x)), y_(std::move(y)), w_(std::move(w)), config_(config) {
  config_.validate();
  if (y_.size() != x_.rows()) throw ConfigError("response length does not match design rows");
  if (w_.size() != x_.cols()) throw ConfigError("weight vector length does not match predictors");
  bool any = false;
  for (double v : w_) any = any || v > 0.0;
  if (!any) throw ConfigError("weight vector has no positive entry");
}

ChainState GibbsSampler::initial_state(std::size_t num_trees, std::size_t num_clusters) const {
  if (num_trees < 1 || num_clusters < 1) throw ConfigError("need at least one tree and one cluster");
  ChainState s;
  s.trees.assign(num_trees, Tree{});
  s.z.resize(num_trees);
  for (std::size_t t = 0; t < num_trees; ++t) s.z[t] = static_cast<std::int32_t>(t % num_clusters);
  std::vector<double> log_w(w_.size());
  for (std::size_t j = 0; j < w_.size(); ++j) log_w[j] = w_[j] > 0.0 ? std::log(w_[j]) : kLogZero;
  s.log_s.assign(num_clusters, log_w);
  s.log_pi.assign(num_clusters, -std::log(static_cast<double>(num_clusters)));
  double mean = 0.0;
  for (double v : y_) mean += v;
  mean /= static_cast<double>(y_.size());
  double ss = 0.0;
  for (double v : y_) ss += (v - mean) * (v - mean);
  const double sd = y_.size() > 1 ? std::sqrt(ss / static_cast<double>(y_.size() - 1)) : 0.0;
  s.sigma = sd > 0.0 ? sd : 1.0;
  s.sigma_mu = 0.25;
  s.alpha = 0.1;
  s.omega = 1.0;
  return s;
}

void GibbsSampler::set_response(std::vector<double> y) {
  if (y.size() != x_.rows()) throw ConfigError("response length does not match design rows");
  y_ = std::move(y);
}

std::vector<double> GibbsSampler::fitted_from_scratch(const ChainState& state) const {
  return ensemble_fit(state, x_, config_.mode);
}

void GibbsSampler::refresh(const ChainState& state) {
  const std::size_t n = x_.rows();
  const std::size_t t_count = state.num_trees();
  tree_fit_.assign(t_count, std::vector<double>(n, 0.0));
  total_fit_.assign(n, 0.0);
  for (std::size_t t = 0; t < t_count; ++t) {
    tree_fit(state.trees[t], x_, config_.mode, tree_fit_[t]);
    for (std::size_t i = 0; i < n; ++i) total_fit_[i] += tree_fit_[t][i];
  }
}

void GibbsSampler::attach(const ChainState& state) {
  if (state.num_features() != x_.cols()) throw ConfigError("state and design disagree on P");
  const std::size_t n = x_.rows();
  rows_.clear();
  if (config_.mode == GateMode::Hard) {
    rows_.resize(state.num_trees());
    for (std::size_t t = 0; t < state.num_trees(); ++t) rows_[t].rebuild(state.trees[t], x_);
  }
  refresh(state);
  resid_.assign(n, 0.0);
  new_fit_.assign(n, 0.0);
  counts_.assign(x_.cols(), 0);
}

void GibbsSampler::update_tau(Tree& tree, RngStream& rng, double sigma, double sigma_mu,
                              std::size_t num_trees) {
  Tree probe = tree;
  auto target = [&](double u) {
    const double tau = std::exp(u);
    const double lp = config_.priors.tau.log_density(tau);
    if (lp == kLogZero) return kLogZero;
    probe.set_tau(tau);
    return lp + u + tree_log_marginal(probe, x_, resid_, sigma, sigma_mu, num_trees, GateMode::Soft);
  };
  tree.set_tau(std::exp(slice_sample(target, std::log(tree.tau()), config_.slice_width, rng)));
}

void GibbsSampler::update_tree(ChainState& state, std::size_t t, RngStream& rng) {
  const auto& k = kernels::active();
  const std::size_t n = x_.rows();
  const std::size_t num_trees = state.num_trees();
  Tree& tree = state.trees[t];
  std::vector<double>& fit = tree_fit_[t];
  const bool hard = config_.mode == GateMode::Hard;
  RowAssignment* rows = hard ? &rows_[t] : nullptr;

  k.partial_residual(y_.data(), total_fit_.data(), fit.data(), resid_.data(), n);

  const MoveContext ctx{x_,
                        resid_,
                        state.log_s[static_cast<std::size_t>(state.z[t])],
                        config_.topology,
                        config_.moves,
                        state.sigma,
                        state.sigma_mu,
                        num_trees,
                        config_.mode};
  const MoveOutcome outcome = mh_tree_move(tree, ctx, rng, rows);
  const auto kind = static_cast<std::size_t>(outcome.kind);
  tally_.proposed[kind] += outcome.proposed ? 1 : 0;
  tally_.accepted[kind] += outcome.accepted ? 1 : 0;

  if (!hard) update_tau(tree, rng, state.sigma, state.sigma_mu, num_trees);
  draw_leaf_values(tree, x_, resid_, state.sigma, state.sigma_mu, num_trees, config_.mode, rng, rows);

  if (hard) {
    mu_by_node_.assign(tree.capacity(), 0.0);
    for (NodeId leaf : tree.leaves()) mu_by_node_[static_cast<std::size_t>(leaf)] = tree.node(leaf).mu;
    k.gather(mu_by_node_.data(), rows->leaf_of_row.data(), new_fit_.data(), n);
  } else {
    tree_fit(tree, x_, config_.mode, new_fit_);
  }
  k.apply_delta(total_fit_.data(), fit.data(), new_fit_.data(), n);
  fit.swap(new_fit_);

  count_splits(tree, counts_);
  state.z[t] = draw_cluster_label(counts_, state.log_pi, state.log_s, rng);
}

void GibbsSampler::update_scalars(ChainState& state, RngStream& rng) {
  const double width = config_.slice_width;
  const auto& priors = config_.priors;

  if (config_.update_sigma) {
    const double n = static_cast<double>(y_.size());
    const double ss = kernels::active().sum_squared_diff(y_.data(), total_fit_.data(), y_.size());
    auto target = [&](double u) {
      const double lp = priors.sigma.log_density(std::exp(u));
      if (lp == kLogZero) return kLogZero;
      return lp + u - n * u - ss / (2.0 * std::exp(2.0 * u));
    };
    state.sigma = std::exp(slice_sample(target, std::log(state.sigma), width, rng));
  }

  if (config_.update_sigma_mu) {
    double leaves = 0.0;
    double ss_mu = 0.0;
    for (const Tree& tree : state.trees) {
      for (NodeId leaf : tree.leaves()) {
        leaves += 1.0;
        ss_mu += tree.node(leaf).mu * tree.node(leaf).mu;
      }
    }
    const double t_count = static_cast<double>(state.num_trees());
    auto target = [&](double u) {
      const double lp = priors.sigma_mu.log_density(std::exp(u));
      if (lp == kLogZero) return kLogZero;
      return lp + u - leaves * u - t_count * ss_mu / (2.0 * std::exp(2.0 * u));
    };
    state.sigma_mu = std::exp(slice_sample(target, std::log(state.sigma_mu), width, rng));
  }

  if (config_.update_alpha) {
    const double k = static_cast<double>(state.num_clusters());
    std::vector<std::size_t> active;
    std::vector<double> sum_log;
    double w_total = 0.0;
    for (std::size_t j = 0; j < w_.size(); ++j) {
      if (w_[j] <= 0.0) continue;
      active.push_back(j);
      w_total += w_[j];
      double acc = 0.0;
      for (const auto& ls : state.log_s) acc += ls[j];
      sum_log.push_back(acc);
    }
    auto target = [&](double u) {
      const double a = std::exp(u);
      const double lp = priors.alpha.log_density(a);
      if (lp == kLogZero) return kLogZero;
      double out = lp + u;
      if (active.size() < 2) return out;
      out += k * std::lgamma(a * w_total);
      for (std::size_t idx = 0; idx < active.size(); ++idx) {
        const double param = a * w_[active[idx]];
        out += (param - 1.0) * sum_log[idx] - k * std::lgamma(param);
      }
      return out;
    };
    state.alpha = std::exp(slice_sample(target, std::log(state.alpha), width, rng));
  }

  if (config_.update_omega) {
    const std::size_t k_count = state.num_clusters();
    const double k = static_cast<double>(k_count);
    double sum_log_pi = 0.0;
    for (double v : state.log_pi) sum_log_pi += v;
    auto target = [&](double u) {
      const double om = std::exp(u);
      const double lp = priors.omega.log_density(om);
      if (lp == kLogZero) return kLogZero;
      if (k_count < 2) return lp + u;
      return lp + u + std::lgamma(om) - k * std::lgamma(om / k) + (om / k - 1.0) * sum_log_pi;
    };
    state.omega = std::exp(slice_sample(target, std::log(state.omega), width, rng));
  }
}

void GibbsSampler::step(ChainState& state, RngStream& rng) {
  if (tree_fit_.size() != state.num_trees()) throw std::logic_error("sampler is not attached to this state");
  for (std::size_t t = 0; t < state.num_trees(); ++t) update_tree(state, t, rng);

  const SplitCounts counts = SplitCounts::compute(state);
  for (std::size_t k = 0; k < state.num_clusters(); ++k) {
    state.log_s[k] = draw_split_proportions(counts.cluster(k), state.alpha, w_, rng);
  }
  state.log_pi = draw_mixture_weights(counts.occupancy, state.omega, rng);
  update_scalars(state, rng);

  ++iterations_;
  if (iterations_ % config_.refresh_every == 0) refresh(state);
}

ChainState gibbs_step(const ChainState& state, const Dataset& data, const std::vector<double>& w,
                      const SamplerConfig& config, RngStream& rng) {
  GibbsSampler sampler(data.x, data.y, w, config);
  ChainState next = state;
  sampler.attach(next);
  sampler.step(next, rng);
  return next;
}

}  // namespace dpforest
