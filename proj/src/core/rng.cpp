#include "dpforest/core/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dpforest {

namespace {

std::uint64_t splitmix64(std::uint64_t v) {
  v += 0x9E3779B97F4A7C15ULL;
  v = (v ^ (v >> 30)) * 0xBF58476D1CE4E5B9ULL;
  v = (v ^ (v >> 27)) * 0x94D049BB133111EBULL;
  return v ^ (v >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(make_engine(seed, stream)) {}

RngStream RngStream::child(std::uint64_t id) const {
  return RngStream(seed_, splitmix64(stream_ ^ splitmix64(id ^ 0xD1B54A32D192ED03ULL)));
}

double RngStream::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  // Marsaglia polar method; the second variate of each pair is discarded so
  // the stream carries no hidden state beyond the engine.
  while (true) {
    const double u = 2.0 * uniform() - 1.0;
    const double v = 2.0 * uniform() - 1.0;
    const double s = u * u + v * v;
    if (s < 1.0 && s > 0.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double RngStream::exponential() { return -std::log(uniform()); }

double RngStream::log_gamma_variate(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma shape must be positive");
  if (shape < 1.0) {
    // Gamma(a) = Gamma(a + 1) * U^(1/a), carried out in log space.
    const double boosted = log_gamma_variate(shape + 1.0);
    return boosted + std::log(uniform()) / shape;
  }
  // Marsaglia & Tsang squeeze-free variant.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    const double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return std::log(d) + std::log(v);
  }
}

double RngStream::gamma(double shape) { return std::exp(log_gamma_variate(shape)); }

std::size_t RngStream::uniform_index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index over an empty range");
  const std::uint64_t range = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  while (true) {
    const std::uint64_t r = engine_();
    if (r < limit) return static_cast<std::size_t>(r % range);
  }
}

std::size_t RngStream::categorical_log(std::span<const double> log_weights) {
  double top = kNegInf;
  for (double lw : log_weights) top = std::max(top, lw);
  if (top == kNegInf) throw std::domain_error("categorical draw with all weights zero");
  double total = 0.0;
  for (double lw : log_weights) total += std::exp(lw - top);
  const double target = uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    if (log_weights[i] == kNegInf) continue;
    acc += std::exp(log_weights[i] - top);
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;
}

double log_sum_exp(std::span<const double> values) {
  double top = kNegInf;
  for (double v : values) top = std::max(top, v);
  if (top == kNegInf) return kNegInf;
  double total = 0.0;
  for (double v : values) total += std::exp(v - top);
  return top + std::log(total);
}

std::vector<double> log_dirichlet(std::span<const double> params, RngStream& rng) {
  std::vector<double> out(params.size(), kNegInf);
  bool any = false;
  for (std::size_t j = 0; j < params.size(); ++j) {
    if (params[j] > 0.0) {
      out[j] = rng.log_gamma_variate(params[j]);
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("Dirichlet draw with no positive parameter");
  const double norm = log_sum_exp(out);
  for (double& v : out) {
    if (v != kNegInf) v -= norm;
  }
  return out;
}

}  // namespace dpforest
