#pragma once

#include <span>

#include "dpforest/core/matrix.hpp"
#include "dpforest/core/rng.hpp"
#include "dpforest/core/tree.hpp"
#include "dpforest/prior/tree_prior.hpp"
#include "dpforest/sampler/conditionals.hpp"
#include "dpforest/sampler/config.hpp"

namespace dpforest {

enum class MoveKind { Grow, Prune, Change };

struct MoveOutcome {
  MoveKind kind = MoveKind::Grow;
  bool accepted = false;
  bool proposed = false;  // false for structural no-ops
  double accept_prob = 0.0;
};

// Everything a tree move reads besides the tree. Leaf values are integrated
// out, so only the residuals, the scalars and the cluster's proportions enter.
struct MoveContext {
  const Matrix& x;
  std::span<const double> residuals;
  std::span<const double> log_s;
  const TopologyPrior& topology;
  const MoveProbabilities& moves;
  double sigma;
  double sigma_mu;
  std::size_t num_trees;
  GateMode mode;
};

// Log Metropolis-Hastings ratios. With `rows` (hard mode only) the likelihood
// terms come from per-leaf sufficient statistics; otherwise from full
// marginal likelihoods of the current and proposed trees.
double grow_log_ratio(const Tree& tree, NodeId leaf, const SplitRule& rule, const MoveContext& ctx,
                      const RowAssignment* rows = nullptr);
double prune_log_ratio(const Tree& tree, NodeId branch, const MoveContext& ctx,
                       const RowAssignment* rows = nullptr);
double change_log_ratio(const Tree& tree, NodeId branch, const SplitRule& rule,
                        const MoveContext& ctx, const RowAssignment* rows = nullptr);

// One GROW / PRUNE / CHANGE proposal and accept/reject. Leaf values of the
// resulting tree are stale (zero on new leaves) until draw_leaf_values runs.
// `rows` is kept in sync when given.
MoveOutcome mh_tree_move(Tree& tree, const MoveContext& ctx, RngStream& rng,
                         RowAssignment* rows = nullptr);

}  // namespace dpforest
