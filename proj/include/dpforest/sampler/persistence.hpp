#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpforest/core/chain_state.hpp"
#include "dpforest/core/transform.hpp"
#include "dpforest/sampler/config.hpp"

namespace dpforest {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Trees are nested arrays: [tau, root] where a leaf is [mu] and a branch is
// [var, cut, left, right] with a 0-based predictor index. Cluster labels are
// written 1-based. Log-zero entries of log_s are written as null.
Json tree_to_json(const Tree& tree);
Tree tree_from_json(const Json& j);
Json state_to_json(const ChainState& state);
ChainState state_from_json(const Json& j);

Json to_json(const SamplerConfig& config);
SamplerConfig sampler_config_from_json(const Json& j);
Json to_json(const TransformSpec& transform);
TransformSpec transform_from_json(const Json& j);

struct PosteriorHeader {
  int schema_version = kSchemaVersion;
  Json config = Json::object();  // fully resolved run configuration
  TransformSpec transform;
  std::uint64_t seed = 0;
  std::vector<std::string> feature_names;
  std::vector<double> w;
  Json screening = Json::object();
};

struct PosteriorFile {
  PosteriorHeader header;
  std::vector<std::size_t> iterations;
  std::vector<ChainState> draws;
};

// One JSON object per line: a header record followed by draw records.
void write_header(std::ostream& out, const PosteriorHeader& header);
void write_draw(std::ostream& out, const ChainState& state, std::size_t iteration);
PosteriorFile read_posterior(std::istream& in);

}  // namespace dpforest
