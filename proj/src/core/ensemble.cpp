#include "dpforest/core/ensemble.hpp"

#include <cmath>

namespace dpforest {

double logistic(double v) {
  if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
  const double e = std::exp(v);
  return e / (1.0 + e);
}

namespace {

// Soft weights by node id: each node's weight is the product of gates on its
// root path. Children are always visited after their parent.
template <class Coord>
void soft_weights_by_node(const Tree& tree, Coord&& get, std::vector<double>& by_node) {
  by_node.resize(tree.capacity());
  by_node[Tree::kRoot] = 1.0;
  thread_local std::vector<NodeId> stack;
  stack.assign(1, Tree::kRoot);
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    const Node& n = tree.node(id);
    if (n.is_leaf()) continue;
    const double w = by_node[static_cast<std::size_t>(id)];
    const double left = logistic((n.cut - get(n.var)) / tree.tau());
    by_node[static_cast<std::size_t>(n.left)] = w * left;
    by_node[static_cast<std::size_t>(n.right)] = w * (1.0 - left);
    stack.push_back(n.right);
    stack.push_back(n.left);
  }
}

}  // namespace

void leaf_weights(const Tree& tree, std::span<const double> x, GateMode mode,
                  std::vector<double>& out) {
  const auto leaves = tree.leaves();
  out.assign(leaves.size(), 0.0);
  if (mode == GateMode::Hard) {
    const NodeId hit = tree.route(x);
    for (std::size_t l = 0; l < leaves.size(); ++l) {
      if (leaves[l] == hit) out[l] = 1.0;
    }
    return;
  }
  std::vector<double> by_node;
  soft_weights_by_node(
      tree, [x](std::int32_t j) { return x[static_cast<std::size_t>(j)]; }, by_node);
  for (std::size_t l = 0; l < leaves.size(); ++l) out[l] = by_node[static_cast<std::size_t>(leaves[l])];
}

std::vector<double> leaf_weights(const Tree& tree, std::span<const double> x, GateMode mode) {
  std::vector<double> out;
  leaf_weights(tree, x, mode, out);
  return out;
}

void leaf_weights_by_node(const Tree& tree, const Matrix& x, std::size_t row,
                          std::vector<double>& by_node) {
  soft_weights_by_node(
      tree, [&](std::int32_t j) { return x(row, static_cast<std::size_t>(j)); }, by_node);
}

double tree_predict(const Tree& tree, std::span<const double> x, GateMode mode) {
  if (mode == GateMode::Hard) return tree.node(tree.route(x)).mu;
  std::vector<double> by_node;
  soft_weights_by_node(
      tree, [x](std::int32_t j) { return x[static_cast<std::size_t>(j)]; }, by_node);
  double total = 0.0;
  for (NodeId leaf : tree.leaves()) total += by_node[static_cast<std::size_t>(leaf)] * tree.node(leaf).mu;
  return total;
}

double ensemble_predict(const ChainState& state, std::span<const double> x, GateMode mode) {
  double total = 0.0;
  for (const Tree& tree : state.trees) total += tree_predict(tree, x, mode);
  return total;
}

void tree_fit(const Tree& tree, const Matrix& x, GateMode mode, std::span<double> out) {
  if (mode == GateMode::Hard) {
    for (std::size_t i = 0; i < x.rows(); ++i) {
      out[i] = tree.node(tree.route([&](std::int32_t j) { return x(i, static_cast<std::size_t>(j)); })).mu;
    }
    return;
  }
  const auto leaves = tree.leaves();
  std::vector<double> by_node;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    leaf_weights_by_node(tree, x, i, by_node);
    double total = 0.0;
    for (NodeId leaf : leaves) total += by_node[static_cast<std::size_t>(leaf)] * tree.node(leaf).mu;
    out[i] = total;
  }
}

std::vector<double> ensemble_fit(const ChainState& state, const Matrix& x, GateMode mode) {
  std::vector<double> total(x.rows(), 0.0);
  std::vector<double> one(x.rows());
  for (const Tree& tree : state.trees) {
    tree_fit(tree, x, mode, one);
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += one[i];
  }
  return total;
}

}  // namespace dpforest
