#include "dpforest/sampler/marginal.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <numbers>

#include "dpforest/core/ensemble.hpp"

namespace dpforest {

double leaf_log_marginal(std::size_t n, double sum, double sigma2, double leaf_var) {
  const double nv = static_cast<double>(n) * leaf_var;
  return -0.5 * std::log1p(nv / sigma2) + leaf_var * sum * sum / (2.0 * sigma2 * (sigma2 + nv));
}

std::vector<double> leaf_weight_matrix(const Tree& tree, const Matrix& x, GateMode mode) {
  const auto leaves = tree.leaves();
  const std::size_t n = x.rows();
  const std::size_t l = leaves.size();
  std::vector<double> w(n * l, 0.0);
  std::vector<double> by_node;
  for (std::size_t i = 0; i < n; ++i) {
    if (mode == GateMode::Hard) {
      const NodeId hit = tree.route([&](std::int32_t j) { return x(i, static_cast<std::size_t>(j)); });
      for (std::size_t k = 0; k < l; ++k) w[i * l + k] = leaves[k] == hit ? 1.0 : 0.0;
    } else {
      leaf_weights_by_node(tree, x, i, by_node);
      for (std::size_t k = 0; k < l; ++k) w[i * l + k] = by_node[static_cast<std::size_t>(leaves[k])];
    }
  }
  return w;
}

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Precision {
  Eigen::MatrixXd lambda;
  Eigen::VectorXd b;
};

Precision build_precision(std::span<const double> weights, std::size_t num_leaves,
                          std::span<const double> residuals, double sigma2, double leaf_var) {
  const auto n = static_cast<Eigen::Index>(residuals.size());
  const auto l = static_cast<Eigen::Index>(num_leaves);
  Eigen::Map<const RowMajor> w(weights.data(), n, l);
  Eigen::Map<const Eigen::VectorXd> r(residuals.data(), n);
  Precision out;
  out.lambda = (w.transpose() * w) / sigma2;
  out.lambda.diagonal().array() += 1.0 / leaf_var;
  out.b = (w.transpose() * r) / sigma2;
  return out;
}

}  // namespace

LeafPosterior leaf_posterior(std::span<const double> weights, std::size_t num_leaves,
                             std::span<const double> residuals, double sigma, double leaf_var) {
  const Precision p = build_precision(weights, num_leaves, residuals, sigma * sigma, leaf_var);
  const Eigen::LLT<Eigen::MatrixXd> llt(p.lambda);
  const Eigen::VectorXd mean = llt.solve(p.b);
  const Eigen::MatrixXd cov =
      llt.solve(Eigen::MatrixXd::Identity(p.lambda.rows(), p.lambda.cols()));
  LeafPosterior out;
  out.mean.assign(mean.data(), mean.data() + mean.size());
  out.cov.resize(num_leaves * num_leaves);
  for (std::size_t a = 0; a < num_leaves; ++a) {
    for (std::size_t c = 0; c < num_leaves; ++c) {
      out.cov[a * num_leaves + c] = cov(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

double weighted_log_marginal(std::span<const double> weights, std::size_t num_leaves,
                             std::span<const double> residuals, double sigma, double leaf_var) {
  const double sigma2 = sigma * sigma;
  const Precision p = build_precision(weights, num_leaves, residuals, sigma2, leaf_var);
  const Eigen::LLT<Eigen::MatrixXd> llt(p.lambda);
  const Eigen::MatrixXd& chol = llt.matrixLLT();
  double log_det = 0.0;
  for (Eigen::Index k = 0; k < chol.rows(); ++k) log_det += 2.0 * std::log(chol(k, k));
  const double quad = p.b.dot(llt.solve(p.b));
  double rr = 0.0;
  for (double v : residuals) rr += v * v;
  const double n = static_cast<double>(residuals.size());
  return -0.5 * n * std::log(2.0 * std::numbers::pi * sigma2) - rr / (2.0 * sigma2) -
         0.5 * static_cast<double>(num_leaves) * std::log(leaf_var) - 0.5 * log_det + 0.5 * quad;
}

double tree_log_marginal(const Tree& tree, const Matrix& x, std::span<const double> residuals,
                         double sigma, double sigma_mu, std::size_t num_trees, GateMode mode) {
  const double sigma2 = sigma * sigma;
  const double leaf_var = sigma_mu * sigma_mu / static_cast<double>(num_trees);
  if (mode == GateMode::Soft) {
    const auto weights = leaf_weight_matrix(tree, x, mode);
    return weighted_log_marginal(weights, tree.num_leaves(), residuals, sigma, leaf_var);
  }
  // Hard mode factorizes over leaves.
  std::vector<std::size_t> count(tree.capacity(), 0);
  std::vector<double> sum(tree.capacity(), 0.0);
  double rr = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto leaf = static_cast<std::size_t>(
        tree.route([&](std::int32_t j) { return x(i, static_cast<std::size_t>(j)); }));
    ++count[leaf];
    sum[leaf] += residuals[i];
    rr += residuals[i] * residuals[i];
  }
  const double n = static_cast<double>(x.rows());
  double total = -0.5 * n * std::log(2.0 * std::numbers::pi * sigma2) - rr / (2.0 * sigma2);
  for (NodeId leaf : tree.leaves()) {
    const auto id = static_cast<std::size_t>(leaf);
    total += leaf_log_marginal(count[id], sum[id], sigma2, leaf_var);
  }
  return total;
}

}  // namespace dpforest
