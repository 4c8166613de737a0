#include "dpforest/core/tree.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "dpforest/core/chain_state.hpp"
#include "dpforest/core/rng.hpp"

namespace dpforest {

Tree::Tree() { nodes_.emplace_back(); }

NodeId Tree::allocate() {
  if (!free_.empty()) {
    const NodeId id = free_.back();
    free_.pop_back();
    nodes_[static_cast<std::size_t>(id)] = Node{};
    return id;
  }
  nodes_.emplace_back();
  return static_cast<NodeId>(nodes_.size() - 1);
}

void Tree::grow(NodeId leaf, std::int32_t var, double cut) {
  if (!node(leaf).is_leaf()) throw std::logic_error("grow on a branch");
  if (var < 0) throw std::invalid_argument("negative split variable");
  const NodeId l = allocate();
  const NodeId r = allocate();
  nodes_[static_cast<std::size_t>(l)].parent = leaf;
  nodes_[static_cast<std::size_t>(r)].parent = leaf;
  Node& n = nodes_[static_cast<std::size_t>(leaf)];
  n.var = var;
  n.cut = cut;
  n.mu = 0.0;
  n.left = l;
  n.right = r;
  ++num_leaves_;
}

void Tree::prune(NodeId branch) {
  if (!is_prunable(branch)) throw std::logic_error("prune on a node without two leaf children");
  Node& n = nodes_[static_cast<std::size_t>(branch)];
  free_.push_back(n.right);
  free_.push_back(n.left);
  nodes_[static_cast<std::size_t>(n.left)].parent = kNoNode;
  nodes_[static_cast<std::size_t>(n.right)].parent = kNoNode;
  n.var = -1;
  n.cut = 0.0;
  n.mu = 0.0;
  n.left = kNoNode;
  n.right = kNoNode;
  --num_leaves_;
}

void Tree::set_rule(NodeId branch, std::int32_t var, double cut) {
  Node& n = nodes_[static_cast<std::size_t>(branch)];
  if (n.is_leaf()) throw std::logic_error("set_rule on a leaf");
  n.var = var;
  n.cut = cut;
}

int Tree::depth(NodeId id) const {
  int d = 0;
  while (node(id).parent != kNoNode) {
    id = node(id).parent;
    ++d;
  }
  return d;
}

bool Tree::is_prunable(NodeId id) const {
  const Node& n = node(id);
  return !n.is_leaf() && node(n.left).is_leaf() && node(n.right).is_leaf();
}

namespace {

template <class Visit>
void depth_first(const Tree& tree, Visit&& visit) {
  std::vector<NodeId> stack{Tree::kRoot};
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    visit(id);
    const Node& n = tree.node(id);
    if (!n.is_leaf()) {
      stack.push_back(n.right);
      stack.push_back(n.left);
    }
  }
}

}  // namespace

std::vector<NodeId> Tree::leaves() const {
  std::vector<NodeId> out;
  out.reserve(num_leaves_);
  depth_first(*this, [&](NodeId id) {
    if (node(id).is_leaf()) out.push_back(id);
  });
  return out;
}

std::vector<NodeId> Tree::branches() const {
  std::vector<NodeId> out;
  depth_first(*this, [&](NodeId id) {
    if (!node(id).is_leaf()) out.push_back(id);
  });
  return out;
}

std::vector<NodeId> Tree::prunable() const {
  std::vector<NodeId> out;
  depth_first(*this, [&](NodeId id) {
    if (is_prunable(id)) out.push_back(id);
  });
  return out;
}

std::size_t Tree::num_prunable() const {
  std::size_t count = 0;
  depth_first(*this, [&](NodeId id) { count += is_prunable(id) ? 1 : 0; });
  return count;
}

Interval Tree::interval(NodeId id, std::int32_t var) const {
  Interval out{0.0, 1.0};
  NodeId child = id;
  NodeId parent = node(id).parent;
  while (parent != kNoNode) {
    const Node& p = node(parent);
    if (p.var == var) {
      if (p.left == child) {
        out.hi = std::min(out.hi, p.cut);
      } else {
        out.lo = std::max(out.lo, p.cut);
      }
    }
    child = parent;
    parent = p.parent;
  }
  return out;
}

std::vector<std::int32_t> Tree::split_vars() const {
  std::vector<std::int32_t> out;
  depth_first(*this, [&](NodeId id) {
    if (!node(id).is_leaf()) out.push_back(node(id).var);
  });
  return out;
}

bool operator==(const Tree& a, const Tree& b) {
  if (a.num_leaves_ != b.num_leaves_ || a.tau_ != b.tau_) return false;
  std::vector<std::pair<NodeId, NodeId>> stack{{Tree::kRoot, Tree::kRoot}};
  while (!stack.empty()) {
    const auto [ia, ib] = stack.back();
    stack.pop_back();
    const Node& na = a.node(ia);
    const Node& nb = b.node(ib);
    if (na.var != nb.var) return false;
    if (na.is_leaf()) {
      if (na.mu != nb.mu) return false;
    } else {
      if (na.cut != nb.cut) return false;
      stack.emplace_back(na.left, nb.left);
      stack.emplace_back(na.right, nb.right);
    }
  }
  return true;
}

std::vector<double> ChainState::s(std::size_t k) const {
  std::vector<double> out(log_s[k].size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::exp(log_s[k][j]);
  return out;
}

std::vector<double> ChainState::pi() const {
  std::vector<double> out(log_pi.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::exp(log_pi[k]);
  return out;
}

std::size_t ChainState::occupied_clusters() const {
  std::vector<char> seen(num_clusters(), 0);
  std::size_t count = 0;
  for (auto k : z) {
    if (!seen[static_cast<std::size_t>(k)]) {
      seen[static_cast<std::size_t>(k)] = 1;
      ++count;
    }
  }
  return count;
}

}  // namespace dpforest
