#include "dpforest/inference/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>

#include "dpforest/core/ensemble.hpp"
#include "dpforest/core/error.hpp"

namespace dpforest {

namespace {

void check_dims(const FitResult& fit, const Matrix& raw_x) {
  if (raw_x.cols() != fit.transform.features.size()) {
    throw DataError("prediction points have " + std::to_string(raw_x.cols()) + " columns, model has " +
                    std::to_string(fit.transform.features.size()));
  }
  if (fit.draws.size() == 0) throw ConfigError("fit has no retained draws");
}

// Prediction points mapped to the model's unit scale, one row per point.
Matrix forward_matrix(const FitResult& fit, const Matrix& raw_x) {
  Matrix x(raw_x.rows(), raw_x.cols());
  for (std::size_t r = 0; r < raw_x.rows(); ++r) {
    const std::vector<double> f = fit.transform.forward_point(raw_x.row(r));
    for (std::size_t c = 0; c < f.size(); ++c) x(r, c) = f[c];
  }
  return x;
}

// Type-7 (linear interpolation) sample quantile of sorted values.
double quantile_sorted(const std::vector<double>& v, double q) {
  const double h = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// Distinct variables on the path from `leaf` to the root.
std::vector<int> path_vars(const Tree& tree, NodeId leaf) {
  std::vector<int> out;
  for (NodeId id = tree.node(leaf).parent; id != kNoNode; id = tree.node(id).parent) {
    out.push_back(tree.node(id).var);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void add_pairs(const std::vector<int>& vars, std::set<VarPair>& pairs) {
  for (std::size_t a = 0; a < vars.size(); ++a) {
    for (std::size_t b = a + 1; b < vars.size(); ++b) pairs.insert({vars[a], vars[b]});
  }
}

std::vector<double> grid_for(const FeatureRange& r, std::size_t n) {
  if (n == 1) return {0.5 * (r.min + r.max)};
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) {
    g[k] = r.min + (r.max - r.min) * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  g.back() = r.max;
  return g;
}

}  // namespace

std::vector<double> draw_predictions(const FitResult& fit, const Matrix& raw_x) {
  check_dims(fit, raw_x);
  const GateMode mode = fit.config.sampler.mode;
  const Matrix x = forward_matrix(fit, raw_x);
  const std::size_t m = raw_x.rows();
  std::vector<double> out(fit.draws.size() * m);
  for (std::size_t d = 0; d < fit.draws.size(); ++d) {
    const std::vector<double> f = ensemble_fit(fit.draws.states[d], x, mode);
    for (std::size_t r = 0; r < m; ++r) out[d * m + r] = fit.transform.inverse_y(f[r]);
  }
  return out;
}

PredictionSummary predict(const FitResult& fit, const Matrix& raw_x) {
  check_dims(fit, raw_x);
  const std::size_t d_count = fit.draws.size();
  PredictionSummary out;
  std::vector<double> vals(d_count);
  // Blocks of points bound the draws-by-points buffer.
  constexpr std::size_t kBlock = 256;
  for (std::size_t start = 0; start < raw_x.rows(); start += kBlock) {
    const std::size_t m = std::min(kBlock, raw_x.rows() - start);
    Matrix block(m, raw_x.cols());
    for (std::size_t c = 0; c < raw_x.cols(); ++c) {
      for (std::size_t r = 0; r < m; ++r) block(r, c) = raw_x(start + r, c);
    }
    const std::vector<double> per = draw_predictions(fit, block);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t d = 0; d < d_count; ++d) vals[d] = per[d * m + r];
      const double mean = mean_of(vals);
      out.mean.push_back(mean);
      out.sd.push_back(sd_of(vals, mean));
      std::sort(vals.begin(), vals.end());
      out.lower.push_back(quantile_sorted(vals, 0.025));
      out.upper.push_back(quantile_sorted(vals, 0.975));
    }
  }
  return out;
}

std::vector<double> posterior_mean(const FitResult& fit, const Matrix& raw_x) {
  check_dims(fit, raw_x);
  const GateMode mode = fit.config.sampler.mode;
  const double d_count = static_cast<double>(fit.draws.size());
  const Matrix x = forward_matrix(fit, raw_x);
  std::vector<double> sum(raw_x.rows(), 0.0);
  for (const ChainState& state : fit.draws.states) {
    const std::vector<double> f = ensemble_fit(state, x, mode);
    for (std::size_t r = 0; r < sum.size(); ++r) sum[r] += f[r];
  }
  std::vector<double> out(raw_x.rows());
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = fit.transform.inverse_y(sum[r] / d_count);
  return out;
}

double InteractionReport::pair(int i, int j) const {
  if (i > j) std::swap(i, j);
  const auto it = pair_prob.find({i, j});
  return it == pair_prob.end() ? 0.0 : it->second;
}

DrawStructure draw_structure(const ChainState& state, InteractionEvent event) {
  std::set<int> included;
  std::set<VarPair> pairs;
  for (const Tree& tree : state.trees) {
    std::vector<int> vars;
    for (std::int32_t v : tree.split_vars()) vars.push_back(v);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    included.insert(vars.begin(), vars.end());
    if (vars.size() < 2) continue;
    if (event == InteractionEvent::WithinTree) {
      add_pairs(vars, pairs);
    } else {
      for (NodeId leaf : tree.leaves()) add_pairs(path_vars(tree, leaf), pairs);
    }
  }
  return {{included.begin(), included.end()}, {pairs.begin(), pairs.end()}};
}

InteractionReport detect_interactions(const PosteriorDraws& draws, std::size_t num_features,
                                      double threshold, InteractionEvent event) {
  if (draws.size() == 0) throw ConfigError("interaction detection needs at least one draw");
  InteractionReport rep;
  rep.threshold = threshold;
  rep.event = event;
  rep.n_draws = draws.size();
  std::vector<std::size_t> main_hits(num_features, 0);
  std::map<VarPair, std::size_t> pair_hits;
  for (const ChainState& s : draws.states) {
    const DrawStructure ds = draw_structure(s, event);
    for (int v : ds.included) ++main_hits[static_cast<std::size_t>(v)];
    for (const VarPair& p : ds.pairs) ++pair_hits[p];
  }
  const double n = static_cast<double>(draws.size());
  rep.main_effect_prob.resize(num_features);
  for (std::size_t j = 0; j < num_features; ++j) {
    rep.main_effect_prob[j] = static_cast<double>(main_hits[j]) / n;
    if (rep.main_effect_prob[j] > threshold) rep.detected_mains.push_back(static_cast<int>(j));
  }
  for (const auto& [p, c] : pair_hits) {
    const double prob = static_cast<double>(c) / n;
    rep.pair_prob[p] = prob;
    if (prob > threshold) rep.detected_pairs.push_back(p);
  }
  return rep;
}

InteractionReport detect_interactions(const FitResult& fit, double threshold) {
  return detect_interactions(fit.draws, fit.num_features(), threshold, fit.config.event);
}

InteractionReport detect_interactions(const FitResult& fit) {
  return detect_interactions(fit, fit.config.threshold);
}

Json to_json(const InteractionReport& r, const std::vector<std::string>& names) {
  auto name = [&](int j) {
    const auto u = static_cast<std::size_t>(j);
    return u < names.size() ? names[u] : "x" + std::to_string(j + 1);
  };
  Json mains = Json::array();
  for (std::size_t j = 0; j < r.main_effect_prob.size(); ++j) {
    const double p = r.main_effect_prob[j];
    mains.push_back({{"name", name(static_cast<int>(j))}, {"index", j + 1}, {"prob", p}, {"detected", p > r.threshold}});
  }
  Json pairs = Json::array();
  for (const auto& [p, prob] : r.pair_prob) {
    pairs.push_back({{"names", {name(p.first), name(p.second)}},
                     {"indices", {p.first + 1, p.second + 1}},
                     {"prob", prob},
                     {"detected", prob > r.threshold}});
  }
  Json det_mains = Json::array();
  for (int j : r.detected_mains) det_mains.push_back(name(j));
  Json det_pairs = Json::array();
  for (const VarPair& p : r.detected_pairs) det_pairs.push_back({name(p.first), name(p.second)});
  return Json{{"threshold", r.threshold},
              {"interaction_event", to_string(r.event)},
              {"n_draws", r.n_draws},
              {"main_effects", std::move(mains)},
              {"pairs", std::move(pairs)},
              {"detected_mains", std::move(det_mains)},
              {"detected_pairs", std::move(det_pairs)}};
}

PartialDependence partial_dependence(const FitResult& fit, int vi, int vj, std::size_t n_i,
                                     std::size_t n_j, std::size_t max_draws) {
  const auto p = static_cast<int>(fit.transform.features.size());
  if (vi == vj || vi < 0 || vj < 0 || vi >= p || vj >= p) throw ConfigError("partial dependence needs two distinct valid variables");
  if (n_i < 1 || n_j < 1) throw ConfigError("grid sizes must be positive");
  if (fit.train_x.rows() == 0) throw ConfigError("partial dependence needs the training predictors");
  if (fit.draws.size() == 0) throw ConfigError("fit has no retained draws");

  PartialDependence pd;
  pd.vi = vi;
  pd.vj = vj;
  pd.grid_i = grid_for(fit.transform.features[static_cast<std::size_t>(vi)], n_i);
  pd.grid_j = grid_for(fit.transform.features[static_cast<std::size_t>(vj)], n_j);

  std::vector<std::size_t> chosen;
  const std::size_t d_all = fit.draws.size();
  if (max_draws == 0 || max_draws >= d_all) {
    for (std::size_t d = 0; d < d_all; ++d) chosen.push_back(d);
  } else {
    for (std::size_t k = 0; k < max_draws; ++k) chosen.push_back(k * d_all / max_draws);
  }

  const GateMode mode = fit.config.sampler.mode;
  const std::size_t cells = n_i * n_j;
  const std::size_t n = fit.train_x.rows();
  std::vector<double> per_draw(chosen.size() * cells, 0.0);
  std::vector<double> xrow;
  for (std::size_t r = 0; r < n; ++r) {
    xrow = fit.train_x.row(r);
    for (std::size_t a = 0; a < n_i; ++a) {
      xrow[static_cast<std::size_t>(vi)] = fit.transform.forward_x(static_cast<std::size_t>(vi), pd.grid_i[a]);
      for (std::size_t b = 0; b < n_j; ++b) {
        xrow[static_cast<std::size_t>(vj)] = fit.transform.forward_x(static_cast<std::size_t>(vj), pd.grid_j[b]);
        for (std::size_t c = 0; c < chosen.size(); ++c) {
          per_draw[c * cells + a * n_j + b] += ensemble_predict(fit.draws.states[chosen[c]], xrow, mode);
        }
      }
    }
  }
  pd.mean.resize(cells);
  pd.sd.resize(cells);
  std::vector<double> vals(chosen.size());
  for (std::size_t cell = 0; cell < cells; ++cell) {
    for (std::size_t c = 0; c < chosen.size(); ++c) {
      vals[c] = fit.transform.inverse_y(per_draw[c * cells + cell] / static_cast<double>(n));
    }
    pd.mean[cell] = mean_of(vals);
    pd.sd[cell] = sd_of(vals, pd.mean[cell]);
  }
  return pd;
}

double interaction_contrast(const PartialDependence& pd) {
  const std::size_t ni = pd.grid_i.size();
  const std::size_t nj = pd.grid_j.size();
  std::vector<double> row(ni, 0.0), col(nj, 0.0);
  double grand = 0.0;
  for (std::size_t a = 0; a < ni; ++a) {
    for (std::size_t b = 0; b < nj; ++b) {
      row[a] += pd.at(a, b) / static_cast<double>(nj);
      col[b] += pd.at(a, b) / static_cast<double>(ni);
      grand += pd.at(a, b) / static_cast<double>(ni * nj);
    }
  }
  double ss = 0.0;
  for (std::size_t a = 0; a < ni; ++a) {
    for (std::size_t b = 0; b < nj; ++b) {
      const double c = pd.at(a, b) - row[a] - col[b] + grand;
      ss += c * c;
    }
  }
  return std::sqrt(ss / static_cast<double>(ni * nj));
}

void write_pd_csv(std::ostream& out, const PartialDependence& pd) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "vi,vj,mean,sd\n";
  for (std::size_t a = 0; a < pd.grid_i.size(); ++a) {
    for (std::size_t b = 0; b < pd.grid_j.size(); ++b) {
      const std::size_t cell = a * pd.grid_j.size() + b;
      out << pd.grid_i[a] << ',' << pd.grid_j[b] << ',' << pd.mean[cell] << ',' << pd.sd[cell] << '\n';
    }
  }
  out.precision(old);
}

}  // namespace dpforest
