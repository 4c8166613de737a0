#pragma once

#include <cstdint>
#include <vector>

#include "dpforest/core/tree.hpp"

namespace dpforest {

/// Full MCMC state of a DP-Forest.
///
/// Splitting proportions and mixture weights are held as logarithms: with a
/// small Dirichlet concentration most coordinates underflow to zero in linear
/// space, yet their logs keep entering the full conditionals of the labels and
/// of alpha/omega. Coordinates with zero base weight hold -inf.
struct ChainState {
  std::vector<Tree> trees;
  std::vector<std::int32_t> z;             // cluster label per tree, 0-based
  std::vector<std::vector<double>> log_s;  // K vectors of length P
  std::vector<double> log_pi;              // length K
  double sigma = 1.0;
  double sigma_mu = 0.25;
  double alpha = 0.1;
  double omega = 1.0;

  std::size_t num_trees() const noexcept { return trees.size(); }
  std::size_t num_clusters() const noexcept { return log_pi.size(); }
  std::size_t num_features() const noexcept { return log_s.empty() ? 0 : log_s.front().size(); }

  std::vector<double> s(std::size_t k) const;
  std::vector<double> pi() const;
  std::size_t occupied_clusters() const;

  bool operator==(const ChainState&) const = default;
};

}  // namespace dpforest
