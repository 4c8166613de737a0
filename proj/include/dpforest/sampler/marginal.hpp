#pragma once

#include <span>
#include <vector>

#include "dpforest/core/matrix.hpp"
#include "dpforest/core/tree.hpp"

namespace dpforest {

// Leaf-only part of the hard-mode log marginal for one leaf with n rows and
// residual sum `sum`: the Normal(0, leaf_var) leaf value integrated against
// Normal(., sigma^2) residuals, dropping the factor common to every tree that
// covers the same rows.
double leaf_log_marginal(std::size_t n, double sum, double sigma2, double leaf_var);

// log of the integral over leaf values of prod_i Normal(r_i; sum_l w_l(x_i) mu_l, sigma^2)
// times prod_l Normal(mu_l; 0, sigma_mu^2 / T).
double tree_log_marginal(const Tree& tree, const Matrix& x, std::span<const double> residuals,
                         double sigma, double sigma_mu, std::size_t num_trees, GateMode mode);

// Row-major n x L weight matrix over tree.leaves().
std::vector<double> leaf_weight_matrix(const Tree& tree, const Matrix& x, GateMode mode);

// Gaussian posterior of the leaf values, mean length L and covariance L x L
// row-major, for a given n x L weight matrix.
struct LeafPosterior {
  std::vector<double> mean;
  std::vector<double> cov;
};

LeafPosterior leaf_posterior(std::span<const double> weights, std::size_t num_leaves,
                             std::span<const double> residuals, double sigma, double leaf_var);

// Log marginal from a weight matrix (any mode).
double weighted_log_marginal(std::span<const double> weights, std::size_t num_leaves,
                             std::span<const double> residuals, double sigma, double leaf_var);

}  // namespace dpforest
