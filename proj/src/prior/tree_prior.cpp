#include "dpforest/prior/tree_prior.hpp"

#include <stdexcept>
#include <vector>

#include "dpforest/core/error.hpp"

namespace dpforest {

void TopologyPrior::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("topology gamma must lie in [0, 1)");
  if (!(beta >= 0.0)) throw ConfigError("topology beta must be nonnegative");
}

namespace {

// True when some double lies strictly between lo and hi.
bool has_room(const Interval& side) {
  return side.lo < side.hi && std::nextafter(side.lo, side.hi) < side.hi;
}

double draw_cut(const Interval& side, RngStream& rng) {
  while (true) {
    const double cut = side.lo + rng.uniform() * (side.hi - side.lo);
    if (cut > side.lo && cut < side.hi) return cut;
  }
}

}  // namespace

std::optional<SplitRule> draw_split_rule(const Tree& tree, NodeId node,
                                         std::span<const double> log_s, RngStream& rng) {
  const auto var = static_cast<std::int32_t>(rng.categorical_log(log_s));
  const Interval side = tree.interval(node, var);
  if (has_room(side)) return SplitRule{var, draw_cut(side, rng)};

  std::vector<double> masked(log_s.begin(), log_s.end());
  bool any = false;
  for (std::size_t j = 0; j < masked.size(); ++j) {
    if (masked[j] == kLogZero) continue;
    if (has_room(tree.interval(node, static_cast<std::int32_t>(j)))) {
      any = true;
    } else {
      masked[j] = kLogZero;
    }
  }
  if (!any) return std::nullopt;
  const auto redrawn = static_cast<std::int32_t>(rng.categorical_log(masked));
  return SplitRule{redrawn, draw_cut(tree.interval(node, redrawn), rng)};
}

Tree sample_tree(const TopologyPrior& topology, std::span<const double> log_s, RngStream& rng) {
  Tree tree;
  std::vector<std::pair<NodeId, int>> pending{{Tree::kRoot, 0}};
  while (!pending.empty()) {
    const auto [id, depth] = pending.back();
    pending.pop_back();
    if (!(rng.uniform() < topology.split_prob(depth))) continue;
    const auto rule = draw_split_rule(tree, id, log_s, rng);
    if (!rule) continue;
    tree.grow(id, rule->var, rule->cut);
    pending.emplace_back(tree.node(id).right, depth + 1);
    pending.emplace_back(tree.node(id).left, depth + 1);
  }
  return tree;
}

double log_prior_tree(const Tree& tree, const TopologyPrior& topology, std::span<const double> log_s) {
  double total = 0.0;
  std::vector<std::pair<NodeId, int>> stack{{Tree::kRoot, 0}};
  while (!stack.empty()) {
    const auto [id, depth] = stack.back();
    stack.pop_back();
    const Node& n = tree.node(id);
    if (n.is_leaf()) {
      total += topology.log_stop(depth);
      continue;
    }
    const double ls = log_s[static_cast<std::size_t>(n.var)];
    if (ls == kLogZero) return kLogZero;
    total += topology.log_split(depth) + ls - std::log(tree.interval(id, n.var).width());
    stack.emplace_back(n.right, depth + 1);
    stack.emplace_back(n.left, depth + 1);
  }
  return total;
}

}  // namespace dpforest
