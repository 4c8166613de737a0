#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>

#include "dpforest/core/rng.hpp"
#include "dpforest/core/tree.hpp"

namespace dpforest {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// Branching process: a node at depth d splits with probability
// gamma / (1 + beta)^d.
struct TopologyPrior {
  double gamma = 0.95;
  double beta = 2.0;

  double split_prob(int depth) const { return gamma / std::pow(1.0 + beta, depth); }
  double log_split(int depth) const { return std::log(split_prob(depth)); }
  double log_stop(int depth) const { return std::log1p(-split_prob(depth)); }
  void validate() const;
};

struct SplitRule {
  std::int32_t var = -1;
  double cut = 0.0;
};

// Draws var ~ splitting proportions (given as logs) and cut uniformly inside
// the node's hyper-rectangle side. A degenerate side causes a redraw among the
// coordinates whose side still has room; nullopt when there are none.
std::optional<SplitRule> draw_split_rule(const Tree& tree, NodeId node,
                                         std::span<const double> log_s, RngStream& rng);

// Generates a tree from the branching-process prior. Leaf values are left at 0.
Tree sample_tree(const TopologyPrior& topology, std::span<const double> log_s, RngStream& rng);

// Exact log density of sample_tree with respect to counting measure on shapes
// and variables times Lebesgue measure on cuts. kLogZero when a branch splits
// on a zero-mass variable.
double log_prior_tree(const Tree& tree, const TopologyPrior& topology, std::span<const double> log_s);

}  // namespace dpforest
