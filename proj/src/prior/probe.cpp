#include "dpforest/prior/probe.hpp"

#include <cmath>
#include <ostream>

#include "dpforest/core/error.hpp"

namespace dpforest {

namespace {

struct RatioAccumulator {
  double events = 0.0;
  double conditions = 0.0;
  std::vector<std::pair<double, double>> per_draw;

  void add(double a, double b) {
    events += a;
    conditions += b;
    per_draw.emplace_back(a, b);
  }

  ProbeEstimate finish() const {
    ProbeEstimate out;
    out.conditioning_events = static_cast<std::size_t>(conditions);
    if (conditions <= 0.0) return out;
    const double ratio = events / conditions;
    // Delta-method standard error of a ratio of per-draw sums.
    double ss = 0.0;
    for (const auto& [a, b] : per_draw) ss += (a - ratio * b) * (a - ratio * b);
    const double n = static_cast<double>(per_draw.size());
    out.value = ratio;
    out.se = n > 1 ? std::sqrt(ss * n / (n - 1.0)) / conditions : 0.0;
    return out;
  }
};

}  // namespace

PriorProbeReport probe_prior(const ClusterPrior& cluster, const TopologyPrior& topology,
                             const ProbeSettings& settings, RngStream& rng) {
  const std::size_t p = settings.num_features;
  if (cluster.w.size() != p) throw ConfigError("base weight length must equal P");
  if (settings.n_draws < 1) throw ConfigError("probe needs at least one draw");

  RatioAccumulator lambda;
  RatioAccumulator xi;
  std::vector<double> bin_pairs(p + 1, 0.0);
  std::vector<std::size_t> bin_draws(p + 1, 0);
  std::vector<char> included(p);
  std::vector<char> interact(p * p);
  std::vector<char> in_tree(p);

  for (std::size_t d = 0; d < settings.n_draws; ++d) {
    const ForestDraw draw = sample_forest_prior(cluster, topology, settings.num_trees, rng);
    std::fill(included.begin(), included.end(), 0);
    std::fill(interact.begin(), interact.end(), 0);
    for (const Tree& tree : draw.trees) {
      std::fill(in_tree.begin(), in_tree.end(), 0);
      for (auto v : tree.split_vars()) in_tree[static_cast<std::size_t>(v)] = 1;
      for (std::size_t i = 0; i < p; ++i) {
        if (!in_tree[i]) continue;
        included[i] = 1;
        for (std::size_t j = i + 1; j < p; ++j) {
          if (in_tree[j]) interact[i * p + j] = interact[j * p + i] = 1;
        }
      }
    }
    double pair_events = 0.0;
    double pair_conditions = 0.0;
    std::size_t num_included = 0;
    for (std::size_t i = 0; i < p; ++i) num_included += included[i] ? 1 : 0;
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = i + 1; j < p; ++j) {
        if (included[i] && included[j]) {
          pair_conditions += 1.0;
          pair_events += interact[i * p + j] ? 1.0 : 0.0;
        }
      }
    }
    lambda.add(pair_events, pair_conditions);
    bin_pairs[num_included] += pair_events;
    ++bin_draws[num_included];

    double triple_events = 0.0;
    double triple_conditions = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t i = 0; i < p; ++i) {
        if (i == j || !interact[i * p + j]) continue;
        for (std::size_t k = i + 1; k < p; ++k) {
          if (k == j || !interact[k * p + j]) continue;
          triple_conditions += 1.0;
          triple_events += interact[i * p + k] ? 1.0 : 0.0;
        }
      }
    }
    xi.add(triple_events, triple_conditions);
  }

  PriorProbeReport report;
  report.alpha = cluster.alpha;
  report.omega = cluster.k_max == 1 ? 0.0 : cluster.omega;
  report.lambda = lambda.finish();
  report.xi = xi.finish();
  report.n_draws = settings.n_draws;
  for (std::size_t v = 0; v <= p; ++v) {
    if (bin_draws[v] == 0) continue;
    report.pairs_vs_vars.push_back(
        {v, bin_draws[v], bin_pairs[v] / static_cast<double>(bin_draws[v])});
  }
  return report;
}

void write_probe_csv_header(std::ostream& out) {
  out << "alpha,omega,lambda_hat,lambda_se,xi_hat,xi_se,n_conditioning_events\n";
}

void write_probe_csv_row(std::ostream& out, const PriorProbeReport& r) {
  const auto precision = out.precision(10);
  auto value = [&out](const ProbeEstimate& e) -> std::ostream& {
    if (e.value) return out << *e.value;
    return out << "NA";
  };
  out << r.alpha << ',' << r.omega << ',';
  value(r.lambda) << ',' << r.lambda.se << ',';
  value(r.xi) << ',' << r.xi.se << ',' << r.lambda.conditioning_events << '\n';
  out.precision(precision);
}

}  // namespace dpforest
