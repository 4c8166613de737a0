#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "dpforest/core/matrix.hpp"
#include "dpforest/core/rng.hpp"
#include "dpforest/core/tree.hpp"
#include "dpforest/prior/tree_prior.hpp"

namespace testutil {

inline dpforest::Matrix uniform_matrix(std::size_t n, std::size_t p, dpforest::RngStream& rng) {
  dpforest::Matrix x(n, p);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < n; ++i) x(i, j) = rng.uniform();
  }
  return x;
}

inline std::vector<double> log_uniform(std::size_t p) {
  return std::vector<double>(p, -std::log(static_cast<double>(p)));
}

// Prior tree with leaf values drawn N(0, 1).
inline dpforest::Tree random_tree(std::size_t p, dpforest::RngStream& rng, double gamma = 0.95,
                                  double beta = 2.0) {
  dpforest::Tree t = dpforest::sample_tree({gamma, beta}, log_uniform(p), rng);
  for (dpforest::NodeId leaf : t.leaves()) t.set_mu(leaf, rng.normal());
  return t;
}

// Composite Simpson rule on [a, b] with an even number of intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  double sd = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& v) {
  MeanSe out;
  for (double x : v) out.mean += x;
  out.mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - out.mean) * (x - out.mean);
  out.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  out.se = out.sd / std::sqrt(static_cast<double>(v.size()));
  return out;
}

}  // namespace testutil
