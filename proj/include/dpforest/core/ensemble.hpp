#pragma once

#include <span>
#include <vector>

#include "dpforest/core/chain_state.hpp"
#include "dpforest/core/matrix.hpp"
#include "dpforest/core/tree.hpp"

namespace dpforest {

double logistic(double v);

// Weights over tree.leaves() (depth-first order) for point x. Hard mode is
// one-hot on the routed leaf; soft mode multiplies logistic gates along each
// root path, the left gate at a branch being logistic((cut - x_var) / tau).
void leaf_weights(const Tree& tree, std::span<const double> x, GateMode mode,
                  std::vector<double>& out);
std::vector<double> leaf_weights(const Tree& tree, std::span<const double> x, GateMode mode);

// Same, for row `row` of a column-major matrix, written into weights indexed
// by node id (entries for branches are left untouched).
void leaf_weights_by_node(const Tree& tree, const Matrix& x, std::size_t row,
                          std::vector<double>& by_node);

double tree_predict(const Tree& tree, std::span<const double> x, GateMode mode);
double ensemble_predict(const ChainState& state, std::span<const double> x, GateMode mode);

// Fitted values of one tree at every row of x.
void tree_fit(const Tree& tree, const Matrix& x, GateMode mode, std::span<double> out);
// Sum over trees at each row of x.
std::vector<double> ensemble_fit(const ChainState& state, const Matrix& x, GateMode mode);

}  // namespace dpforest
