#pragma once

#include <cmath>
#include <stdexcept>

#include "dpforest/core/rng.hpp"

namespace dpforest {

// Univariate slice sampler with stepping out (at most max_steps widths in
// total, split at random between the two sides) followed by shrinkage.
template <class LogDensity>
double slice_sample(LogDensity&& log_density, double current, double width, RngStream& rng,
                    int max_steps = 1000) {
  const double f0 = log_density(current);
  if (!std::isfinite(f0)) throw std::domain_error("slice sampler started at a non-finite log density");
  const double level = f0 - rng.exponential();

  double lo = current - width * rng.uniform();
  double hi = lo + width;
  int left_steps = static_cast<int>(std::floor(max_steps * rng.uniform()));
  int right_steps = max_steps - 1 - left_steps;
  while (left_steps-- > 0 && log_density(lo) > level) lo -= width;
  while (right_steps-- > 0 && log_density(hi) > level) hi += width;

  while (true) {
    const double proposal = lo + rng.uniform() * (hi - lo);
    if (log_density(proposal) > level) return proposal;
    if (proposal < current) {
      lo = proposal;
    } else {
      hi = proposal;
    }
    if (!(hi > lo)) return current;
  }
}

}  // namespace dpforest
