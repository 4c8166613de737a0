#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace dpforest {

/// Deterministic random stream identified by (seed, stream id).
///
/// The engine is std::mt19937_64 seeded through std::seed_seq, both of which
/// the standard specifies exactly, and every variate below is derived from
/// the raw 64-bit outputs by code in this project, never by the
/// implementation-defined <random> distributions.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  double exponential();  // rate 1
  // Log of a Gamma(shape, 1) variate. Finite even when the variate itself
  // underflows, which happens routinely for shape << 1.
  double log_gamma_variate(double shape);
  double gamma(double shape);
  // Uniform over {0, ..., n-1}; n must be positive.
  std::size_t uniform_index(std::size_t n);
  // Index drawn with probability proportional to exp(log_weights[i]).
  // Entries equal to -inf are never drawn. Throws if every entry is -inf.
  std::size_t categorical_log(std::span<const double> log_weights);

  // Independent child stream; children of the same parent with different ids
  // do not overlap with each other or with the parent.
  RngStream child(std::uint64_t id) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

/// Log of a Dirichlet draw. Coordinates whose parameter is <= 0 are excluded
/// from the draw and come back as -inf; the others are normalized in log
/// space so they sum to one after exponentiation.
std::vector<double> log_dirichlet(std::span<const double> params, RngStream& rng);

double log_sum_exp(std::span<const double> values);

}  // namespace dpforest
