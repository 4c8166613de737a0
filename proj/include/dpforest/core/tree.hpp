#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace dpforest {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

enum class GateMode { Hard, Soft };

struct Node {
  std::int32_t var = -1;  // -1 marks a leaf
  double cut = 0.0;
  double mu = 0.0;
  NodeId left = kNoNode;
  NodeId right = kNoNode;
  NodeId parent = kNoNode;

  bool is_leaf() const noexcept { return var < 0; }
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double width() const noexcept { return hi - lo; }
};

/// Binary decision tree with axis-aligned rules [x_var <= cut] and scalar
/// leaf values.
///
/// Nodes live in a flat arena; pruned slots are recycled, so node ids are
/// stable while a node is alive but carry no meaning beyond that. Anything
/// that needs a canonical order (leaf weight vectors, serialization) uses the
/// left-to-right depth-first order from leaves() / branches().
class Tree {
 public:
  static constexpr NodeId kRoot = 0;
  static constexpr double kDefaultTau = 0.1;

  Tree();

  const Node& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  double tau() const noexcept { return tau_; }
  void set_tau(double tau) { tau_ = tau; }
  void set_mu(NodeId leaf, double mu) { nodes_[static_cast<std::size_t>(leaf)].mu = mu; }

  // Turns `leaf` into a branch with two fresh leaf children (mu = 0).
  void grow(NodeId leaf, std::int32_t var, double cut);
  // Collapses a branch whose children are both leaves. The branch becomes a
  // leaf with mu = 0.
  void prune(NodeId branch);
  void set_rule(NodeId branch, std::int32_t var, double cut);

  int depth(NodeId id) const;
  std::size_t num_leaves() const noexcept { return num_leaves_; }
  std::size_t num_branches() const noexcept { return num_leaves_ - 1; }
  std::size_t num_prunable() const;

  std::vector<NodeId> leaves() const;
  std::vector<NodeId> branches() const;
  // Branches whose two children are leaves, in depth-first order.
  std::vector<NodeId> prunable() const;
  bool is_prunable(NodeId id) const;

  // Side `var` of the hyper-rectangle of unit-cube points reaching `id`.
  Interval interval(NodeId id, std::int32_t var) const;

  // Leaf reached by following [x_var <= cut] to the left. `get(j)` returns
  // coordinate j of the point.
  template <class Coord>
  NodeId route(Coord&& get) const {
    NodeId id = kRoot;
    while (!nodes_[static_cast<std::size_t>(id)].is_leaf()) {
      const Node& n = nodes_[static_cast<std::size_t>(id)];
      id = get(n.var) <= n.cut ? n.left : n.right;
    }
    return id;
  }
  NodeId route(std::span<const double> x) const {
    return route([x](std::int32_t j) { return x[static_cast<std::size_t>(j)]; });
  }

  // Branch variables, one entry per branch (with repetition).
  std::vector<std::int32_t> split_vars() const;

  // Highest node id ever allocated + 1; index bound for per-node scratch arrays.
  std::size_t capacity() const noexcept { return nodes_.size(); }

  // Structural equality in canonical order (ignores arena layout).
  friend bool operator==(const Tree& a, const Tree& b);

 private:
  NodeId allocate();

  std::vector<Node> nodes_;
  std::vector<NodeId> free_;
  std::size_t num_leaves_ = 1;
  double tau_ = kDefaultTau;
};

}  // namespace dpforest
