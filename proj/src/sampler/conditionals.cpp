#include "dpforest/sampler/conditionals.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

#include "dpforest/prior/tree_prior.hpp"
#include "dpforest/sampler/marginal.hpp"

namespace dpforest {

void count_splits(const Tree& tree, std::span<int> out) {
  std::fill(out.begin(), out.end(), 0);
  for (auto v : tree.split_vars()) ++out[static_cast<std::size_t>(v)];
}

SplitCounts SplitCounts::compute(const ChainState& state) {
  SplitCounts c;
  const std::size_t p = state.num_features();
  const std::size_t k = state.num_clusters();
  c.num_features = p;
  c.per_tree.assign(state.num_trees() * p, 0);
  c.per_cluster.assign(k * p, 0);
  c.occupancy.assign(k, 0);
  for (std::size_t t = 0; t < state.num_trees(); ++t) {
    const auto label = static_cast<std::size_t>(state.z[t]);
    ++c.occupancy[label];
    for (auto v : state.trees[t].split_vars()) {
      ++c.per_tree[t * p + static_cast<std::size_t>(v)];
      ++c.per_cluster[label * p + static_cast<std::size_t>(v)];
    }
  }
  return c;
}

void RowAssignment::rebuild(const Tree& tree, const Matrix& x) {
  leaf_of_row.resize(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    leaf_of_row[i] = tree.route([&](std::int32_t j) { return x(i, static_cast<std::size_t>(j)); });
  }
}

void draw_leaf_values(Tree& tree, const Matrix& x, std::span<const double> residuals, double sigma,
                      double sigma_mu, std::size_t num_trees, GateMode mode, RngStream& rng,
                      const RowAssignment* rows) {
  const double sigma2 = sigma * sigma;
  const double leaf_var = sigma_mu * sigma_mu / static_cast<double>(num_trees);
  const auto leaves = tree.leaves();
  if (mode == GateMode::Hard) {
    std::vector<std::size_t> count(tree.capacity(), 0);
    std::vector<double> sum(tree.capacity(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const auto leaf = static_cast<std::size_t>(
          rows != nullptr
              ? rows->leaf_of_row[i]
              : tree.route([&](std::int32_t j) { return x(i, static_cast<std::size_t>(j)); }));
      ++count[leaf];
      sum[leaf] += residuals[i];
    }
    for (NodeId leaf : leaves) {
      const auto id = static_cast<std::size_t>(leaf);
      const double v = 1.0 / (static_cast<double>(count[id]) / sigma2 + 1.0 / leaf_var);
      tree.set_mu(leaf, rng.normal(v * sum[id] / sigma2, std::sqrt(v)));
    }
    return;
  }
  const auto weights = leaf_weight_matrix(tree, x, mode);
  const LeafPosterior post = leaf_posterior(weights, leaves.size(), residuals, sigma, leaf_var);
  const auto l = static_cast<Eigen::Index>(leaves.size());
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> cov(
      post.cov.data(), l, l);
  const Eigen::MatrixXd chol = Eigen::LLT<Eigen::MatrixXd>(cov).matrixL();
  Eigen::VectorXd z(l);
  for (Eigen::Index k = 0; k < l; ++k) z(k) = rng.normal();
  const Eigen::VectorXd noise = chol * z;
  for (Eigen::Index k = 0; k < l; ++k) {
    tree.set_mu(leaves[static_cast<std::size_t>(k)], post.mean[static_cast<std::size_t>(k)] + noise(k));
  }
}

std::vector<double> cluster_label_log_probs(std::span<const int> tree_counts,
                                            std::span<const double> log_pi,
                                            const std::vector<std::vector<double>>& log_s) {
  std::vector<double> lp(log_pi.begin(), log_pi.end());
  for (std::size_t k = 0; k < lp.size(); ++k) {
    if (lp[k] == kLogZero) continue;
    for (std::size_t j = 0; j < tree_counts.size(); ++j) {
      if (tree_counts[j] == 0) continue;
      if (log_s[k][j] == kLogZero) {
        lp[k] = kLogZero;
        break;
      }
      lp[k] += tree_counts[j] * log_s[k][j];
    }
  }
  const double norm = log_sum_exp(lp);
  if (norm == kLogZero) throw std::domain_error("every cluster assigns zero mass to this tree");
  for (double& v : lp) {
    if (v != kLogZero) v -= norm;
  }
  return lp;
}

std::int32_t draw_cluster_label(std::span<const int> tree_counts, std::span<const double> log_pi,
                                const std::vector<std::vector<double>>& log_s, RngStream& rng) {
  if (log_pi.size() == 1) return 0;
  const auto lp = cluster_label_log_probs(tree_counts, log_pi, log_s);
  return static_cast<std::int32_t>(rng.categorical_log(lp));
}

std::vector<double> draw_split_proportions(std::span<const int> cluster_counts, double alpha,
                                           std::span<const double> w, RngStream& rng) {
  std::vector<double> params(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] == 0.0 && cluster_counts[j] != 0) {
      throw std::logic_error("a tree splits on screened-out variable " + std::to_string(j + 1));
    }
    params[j] = w[j] > 0.0 ? alpha * w[j] + cluster_counts[j] : 0.0;
  }
  return log_dirichlet(params, rng);
}

std::vector<double> draw_mixture_weights(std::span<const int> occupancy, double omega, RngStream& rng) {
  const std::size_t k = occupancy.size();
  if (k == 1) return {0.0};
  std::vector<double> params(k);
  for (std::size_t c = 0; c < k; ++c) params[c] = omega / static_cast<double>(k) + occupancy[c];
  return log_dirichlet(params, rng);
}

double log_dirichlet_density(std::span<const double> log_x, std::span<const double> params) {
  double total_param = 0.0;
  double out = 0.0;
  for (std::size_t j = 0; j < params.size(); ++j) {
    if (!(params[j] > 0.0)) continue;
    total_param += params[j];
    out += (params[j] - 1.0) * log_x[j] - std::lgamma(params[j]);
  }
  return out + std::lgamma(total_param);
}

}  // namespace dpforest
