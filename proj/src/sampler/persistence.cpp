#include "dpforest/sampler/persistence.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <utility>

#include "dpforest/core/error.hpp"

namespace dpforest {

namespace {

Json node_to_json(const Tree& tree, NodeId id) {
  const Node& n = tree.node(id);
  if (n.is_leaf()) return Json::array({n.mu});
  return Json::array({n.var, n.cut, node_to_json(tree, n.left), node_to_json(tree, n.right)});
}

void node_from_json(const Json& j, Tree& tree, NodeId id) {
  if (!j.is_array() || (j.size() != 1 && j.size() != 4)) throw DataError("malformed tree node");
  if (j.size() == 1) {
    tree.set_mu(id, j[0].get<double>());
    return;
  }
  tree.grow(id, j[0].get<std::int32_t>(), j[1].get<double>());
  const NodeId left = tree.node(id).left;
  const NodeId right = tree.node(id).right;
  node_from_json(j[2], tree, left);
  node_from_json(j[3], tree, right);
}

Json log_vector(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) {
    if (std::isinf(x) && x < 0) {
      out.push_back(nullptr);
    } else {
      out.push_back(x);
    }
  }
  return out;
}

std::vector<double> log_vector_from(const Json& j) {
  std::vector<double> out;
  out.reserve(j.size());
  for (const Json& x : j) out.push_back(x.is_null() ? kLogZero : x.get<double>());
  return out;
}

std::vector<double> exp_vector(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::exp(v[i]);
  return out;
}

Json to_json(const ScalePrior& p) { return Json{{"family", to_string(p.kind)}, {"scale", p.scale}}; }

ScalePrior scale_prior_from(const Json& j) {
  return ScalePrior{parse_scale_prior_kind(j.at("family").get<std::string>()), j.at("scale").get<double>()};
}

}  // namespace

Json tree_to_json(const Tree& tree) { return Json::array({tree.tau(), node_to_json(tree, Tree::kRoot)}); }

Tree tree_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw DataError("malformed tree record");
  Tree tree;
  tree.set_tau(j[0].get<double>());
  node_from_json(j[1], tree, Tree::kRoot);
  return tree;
}

Json state_to_json(const ChainState& state) {
  Json trees = Json::array();
  for (const Tree& t : state.trees) trees.push_back(tree_to_json(t));
  Json z = Json::array();
  for (std::int32_t k : state.z) z.push_back(k + 1);
  Json log_s = Json::array();
  Json s = Json::array();
  for (const auto& ls : state.log_s) {
    log_s.push_back(log_vector(ls));
    s.push_back(exp_vector(ls));
  }
  return Json{{"trees", std::move(trees)},
              {"z", std::move(z)},
              {"log_s", std::move(log_s)},
              {"s", std::move(s)},
              {"log_pi", log_vector(state.log_pi)},
              {"pi", exp_vector(state.log_pi)},
              {"sigma", state.sigma},
              {"sigma_mu", state.sigma_mu},
              {"alpha", state.alpha},
              {"omega", state.omega}};
}

ChainState state_from_json(const Json& j) {
  ChainState s;
  for (const Json& t : j.at("trees")) s.trees.push_back(tree_from_json(t));
  for (const Json& k : j.at("z")) s.z.push_back(k.get<std::int32_t>() - 1);
  for (const Json& ls : j.at("log_s")) s.log_s.push_back(log_vector_from(ls));
  s.log_pi = log_vector_from(j.at("log_pi"));
  s.sigma = j.at("sigma").get<double>();
  s.sigma_mu = j.at("sigma_mu").get<double>();
  s.alpha = j.at("alpha").get<double>();
  s.omega = j.at("omega").get<double>();
  return s;
}

Json to_json(const SamplerConfig& c) {
  return Json{{"n_iterations", c.n_iterations},
              {"n_burnin", c.n_burnin},
              {"thin", c.thin},
              {"moves", {{"grow", c.moves.grow}, {"prune", c.moves.prune}, {"change", c.moves.change}}},
              {"slice_width", c.slice_width},
              {"mode", to_string(c.mode)},
              {"topology", {{"gamma", c.topology.gamma}, {"beta", c.topology.beta}}},
              {"priors",
               {{"sigma", to_json(c.priors.sigma)},
                {"sigma_mu", to_json(c.priors.sigma_mu)},
                {"alpha", to_json(c.priors.alpha)},
                {"omega", to_json(c.priors.omega)},
                {"tau", to_json(c.priors.tau)}}},
              {"update",
               {{"sigma", c.update_sigma},
                {"sigma_mu", c.update_sigma_mu},
                {"alpha", c.update_alpha},
                {"omega", c.update_omega}}},
              {"refresh_every", c.refresh_every}};
}

SamplerConfig sampler_config_from_json(const Json& j) {
  SamplerConfig c;
  c.n_iterations = j.at("n_iterations").get<std::size_t>();
  c.n_burnin = j.at("n_burnin").get<std::size_t>();
  c.thin = j.at("thin").get<std::size_t>();
  const Json& m = j.at("moves");
  c.moves = {m.at("grow").get<double>(), m.at("prune").get<double>(), m.at("change").get<double>()};
  c.slice_width = j.at("slice_width").get<double>();
  c.mode = parse_gate_mode(j.at("mode").get<std::string>());
  c.topology.gamma = j.at("topology").at("gamma").get<double>();
  c.topology.beta = j.at("topology").at("beta").get<double>();
  const Json& p = j.at("priors");
  c.priors.sigma = scale_prior_from(p.at("sigma"));
  c.priors.sigma_mu = scale_prior_from(p.at("sigma_mu"));
  c.priors.alpha = scale_prior_from(p.at("alpha"));
  c.priors.omega = scale_prior_from(p.at("omega"));
  c.priors.tau = scale_prior_from(p.at("tau"));
  const Json& u = j.at("update");
  c.update_sigma = u.at("sigma").get<bool>();
  c.update_sigma_mu = u.at("sigma_mu").get<bool>();
  c.update_alpha = u.at("alpha").get<bool>();
  c.update_omega = u.at("omega").get<bool>();
  c.refresh_every = j.at("refresh_every").get<std::size_t>();
  return c;
}

Json to_json(const TransformSpec& t) {
  Json features = Json::array();
  for (const FeatureRange& f : t.features) features.push_back(Json::array({f.min, f.max}));
  return Json{{"features", std::move(features)}, {"center", t.center}, {"half_range", t.half_range}};
}

TransformSpec transform_from_json(const Json& j) {
  TransformSpec t;
  for (const Json& f : j.at("features")) t.features.push_back({f.at(0).get<double>(), f.at(1).get<double>()});
  t.center = j.at("center").get<double>();
  t.half_range = j.at("half_range").get<double>();
  return t;
}

void write_header(std::ostream& out, const PosteriorHeader& h) {
  const Json j{{"record", "header"},
               {"schema_version", h.schema_version},
               {"seed", h.seed},
               {"config", h.config},
               {"transform", to_json(h.transform)},
               {"feature_names", h.feature_names},
               {"w", h.w},
               {"screening", h.screening}};
  out << j.dump() << '\n';
}

void write_draw(std::ostream& out, const ChainState& state, std::size_t iteration) {
  Json j = state_to_json(state);
  j["record"] = "draw";
  j["iteration"] = iteration;
  out << j.dump() << '\n';
}

PosteriorFile read_posterior(std::istream& in) {
  PosteriorFile file;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw DataError(std::string("invalid JSON in posterior file: ") + e.what(), line_no);
    }
    const std::string record = j.value("record", "");
    if (record == "header") {
      PosteriorHeader& h = file.header;
      h.schema_version = j.at("schema_version").get<int>();
      if (h.schema_version != kSchemaVersion) {
        throw DataError("unsupported posterior schema version " + std::to_string(h.schema_version), line_no);
      }
      h.seed = j.at("seed").get<std::uint64_t>();
      h.config = j.at("config");
      h.transform = transform_from_json(j.at("transform"));
      h.feature_names = j.at("feature_names").get<std::vector<std::string>>();
      h.w = j.at("w").get<std::vector<double>>();
      h.screening = j.value("screening", Json::object());
      have_header = true;
    } else if (record == "draw") {
      if (!have_header) throw DataError("draw record before header", line_no);
      file.iterations.push_back(j.at("iteration").get<std::size_t>());
      file.draws.push_back(state_from_json(j));
    } else {
      throw DataError("unknown record type '" + record + "'", line_no);
    }
  }
  if (!have_header) throw DataError("posterior file has no header record");
  return file;
}

}  // namespace dpforest
