#include "dpforest/sampler/moves.hpp"

#include <cmath>

#include "dpforest/kernels/kernels.hpp"
#include "dpforest/sampler/marginal.hpp"

namespace dpforest {

namespace {

struct LikelihoodScale {
  double sigma2;
  double leaf_var;
};

LikelihoodScale scale_of(const MoveContext& ctx) {
  return {ctx.sigma * ctx.sigma, ctx.sigma_mu * ctx.sigma_mu / static_cast<double>(ctx.num_trees)};
}

bool use_stats(const MoveContext& ctx, const RowAssignment* rows) {
  return rows != nullptr && ctx.mode == GateMode::Hard;
}

double full_marginal(const Tree& tree, const MoveContext& ctx) {
  return tree_log_marginal(tree, ctx.x, ctx.residuals, ctx.sigma, ctx.sigma_mu, ctx.num_trees, ctx.mode);
}

double leaf_term(const kernels::LeafStats& s, const LikelihoodScale& sc) {
  return leaf_log_marginal(s.n, s.sum, sc.sigma2, sc.leaf_var);
}

kernels::LeafStats leaf_stats(const RowAssignment& rows, NodeId leaf, const MoveContext& ctx) {
  return kernels::active().leaf_stats(rows.leaf_of_row.data(), leaf, ctx.residuals.data(),
                                      ctx.residuals.size());
}

kernels::SplitStats split_stats(const RowAssignment& rows, NodeId a, NodeId b, const SplitRule& rule,
                                const MoveContext& ctx) {
  return kernels::active().split_stats(rows.leaf_of_row.data(), a, b,
                                       ctx.x.col(static_cast<std::size_t>(rule.var)).data(), rule.cut,
                                       ctx.residuals.data(), ctx.residuals.size());
}

// Log prior ratio of a tree with `leaf` (depth d) split versus unsplit,
// excluding the variable and cut density, which the proposal cancels.
double grow_prior_ratio(const TopologyPrior& topology, int depth) {
  return topology.log_split(depth) + 2.0 * topology.log_stop(depth + 1) - topology.log_stop(depth);
}

double safe_log(double v) { return v > 0.0 ? std::log(v) : kLogZero; }

void reassign_rows(RowAssignment& rows, NodeId a, NodeId b, const Tree& tree, NodeId branch,
                   const Matrix& x) {
  const Node& n = tree.node(branch);
  const auto col = x.col(static_cast<std::size_t>(n.var));
  for (std::size_t i = 0; i < rows.leaf_of_row.size(); ++i) {
    const NodeId id = rows.leaf_of_row[i];
    if (id == a || id == b) rows.leaf_of_row[i] = col[i] <= n.cut ? n.left : n.right;
  }
}

}  // namespace

double grow_log_ratio(const Tree& tree, NodeId leaf, const SplitRule& rule, const MoveContext& ctx,
                      const RowAssignment* rows) {
  const int depth = tree.depth(leaf);
  const NodeId parent = tree.node(leaf).parent;
  const std::size_t prunable_after =
      tree.num_prunable() + 1 - (parent != kNoNode && tree.is_prunable(parent) ? 1 : 0);
  const double proposal = safe_log(ctx.moves.prune / static_cast<double>(prunable_after)) -
                          safe_log(ctx.moves.grow / static_cast<double>(tree.num_leaves()));
  double likelihood = 0.0;
  if (use_stats(ctx, rows)) {
    const auto sc = scale_of(ctx);
    const auto st = split_stats(*rows, leaf, leaf, rule, ctx);
    likelihood = leaf_log_marginal(st.n_left, st.sum_left, sc.sigma2, sc.leaf_var) +
                 leaf_log_marginal(st.n_right, st.sum_right, sc.sigma2, sc.leaf_var) -
                 leaf_log_marginal(st.n_left + st.n_right, st.sum_left + st.sum_right, sc.sigma2,
                                   sc.leaf_var);
  } else {
    Tree grown = tree;
    grown.grow(leaf, rule.var, rule.cut);
    likelihood = full_marginal(grown, ctx) - full_marginal(tree, ctx);
  }
  return likelihood + grow_prior_ratio(ctx.topology, depth) + proposal;
}

double prune_log_ratio(const Tree& tree, NodeId branch, const MoveContext& ctx,
                       const RowAssignment* rows) {
  const int depth = tree.depth(branch);
  const double proposal = safe_log(ctx.moves.grow / static_cast<double>(tree.num_leaves() - 1)) -
                          safe_log(ctx.moves.prune / static_cast<double>(tree.num_prunable()));
  double likelihood = 0.0;
  const Node& n = tree.node(branch);
  if (use_stats(ctx, rows)) {
    const auto sc = scale_of(ctx);
    const auto left = leaf_stats(*rows, n.left, ctx);
    const auto right = leaf_stats(*rows, n.right, ctx);
    likelihood = leaf_log_marginal(left.n + right.n, left.sum + right.sum, sc.sigma2, sc.leaf_var) -
                 leaf_term(left, sc) - leaf_term(right, sc);
  } else {
    Tree pruned = tree;
    pruned.prune(branch);
    likelihood = full_marginal(pruned, ctx) - full_marginal(tree, ctx);
  }
  return likelihood - grow_prior_ratio(ctx.topology, depth) + proposal;
}

double change_log_ratio(const Tree& tree, NodeId branch, const SplitRule& rule,
                        const MoveContext& ctx, const RowAssignment* rows) {
  // Prior and proposal densities of the old and new rules cancel.
  const Node& n = tree.node(branch);
  if (use_stats(ctx, rows)) {
    const auto sc = scale_of(ctx);
    const auto left = leaf_stats(*rows, n.left, ctx);
    const auto right = leaf_stats(*rows, n.right, ctx);
    const auto st = split_stats(*rows, n.left, n.right, rule, ctx);
    return leaf_log_marginal(st.n_left, st.sum_left, sc.sigma2, sc.leaf_var) +
           leaf_log_marginal(st.n_right, st.sum_right, sc.sigma2, sc.leaf_var) -
           leaf_term(left, sc) - leaf_term(right, sc);
  }
  Tree changed = tree;
  changed.set_rule(branch, rule.var, rule.cut);
  return full_marginal(changed, ctx) - full_marginal(tree, ctx);
}

MoveOutcome mh_tree_move(Tree& tree, const MoveContext& ctx, RngStream& rng, RowAssignment* rows) {
  MoveOutcome out;
  const double u = rng.uniform();
  if (u < ctx.moves.grow) {
    out.kind = MoveKind::Grow;
  } else if (u < ctx.moves.grow + ctx.moves.prune) {
    out.kind = MoveKind::Prune;
  } else {
    out.kind = MoveKind::Change;
  }

  if (out.kind == MoveKind::Grow) {
    const auto leaves = tree.leaves();
    const NodeId leaf = leaves[rng.uniform_index(leaves.size())];
    const auto rule = draw_split_rule(tree, leaf, ctx.log_s, rng);
    if (!rule) return out;
    out.proposed = true;
    const double log_ratio = grow_log_ratio(tree, leaf, *rule, ctx, rows);
    out.accept_prob = log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
    if (std::log(rng.uniform()) < log_ratio) {
      out.accepted = true;
      tree.grow(leaf, rule->var, rule->cut);
      if (rows != nullptr) reassign_rows(*rows, leaf, leaf, tree, leaf, ctx.x);
    }
    return out;
  }

  const auto candidates = tree.prunable();
  if (candidates.empty()) return out;
  const NodeId branch = candidates[rng.uniform_index(candidates.size())];
  out.proposed = true;

  if (out.kind == MoveKind::Prune) {
    const double log_ratio = prune_log_ratio(tree, branch, ctx, rows);
    out.accept_prob = log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
    if (std::log(rng.uniform()) < log_ratio) {
      out.accepted = true;
      if (rows != nullptr) {
        const NodeId l = tree.node(branch).left;
        const NodeId r = tree.node(branch).right;
        for (auto& id : rows->leaf_of_row) {
          if (id == l || id == r) id = branch;
        }
      }
      tree.prune(branch);
    }
    return out;
  }

  const auto rule = draw_split_rule(tree, branch, ctx.log_s, rng);
  if (!rule) {
    out.proposed = false;
    return out;
  }
  const double log_ratio = change_log_ratio(tree, branch, *rule, ctx, rows);
  out.accept_prob = log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
  if (std::log(rng.uniform()) < log_ratio) {
    out.accepted = true;
    const NodeId l = tree.node(branch).left;
    const NodeId r = tree.node(branch).right;
    tree.set_rule(branch, rule->var, rule->cut);
    if (rows != nullptr) reassign_rows(*rows, l, r, tree, branch, ctx.x);
  }
  return out;
}

}  // namespace dpforest
