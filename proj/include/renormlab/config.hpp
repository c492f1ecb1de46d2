#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "renormlab/backends.hpp"

namespace renormlab {

// Everything one run needs: the backend, the chain, depths and bounds, the
// probe selection, and output/caching choices.  Unknown backends and
// out-of-range parameters are rejected here, before any computation runs.
struct RunConfig {
  std::string preset;  // informational echo of the preset used, if any
  nlohmann::json backend;
  std::string chain;  // "renormalization" or "vertex_stabilizer"
  int max_level = 3;
  Point max_index = 2'000'000;
  std::optional<int> window;  // verdict window; clamped to depth-2 when unset
  int comparison_depth = 12;  // tree backends only

  // Probe selection: unset means "run where it applies" (contracting on
  // endomorphism chains, self-replication on tree backends); an explicit
  // request on an unsupported run is an error.
  std::optional<bool> probe_contracting;
  int contracting_max_iterate = 8;

  bool probe_kernel = false;
  int kernel_level = 2;
  int kernel_bound = 2;

  bool probe_qa = false;
  int qa_level = 2;
  int qa_cylinder = 1;
  int qa_bound = 8;

  std::optional<bool> probe_self_replication;
  int self_replication_bound = 10;
  int self_replication_depth = 8;

  std::string cache_dir;
  std::string out_path;
  std::string format = "json";  // json | text | csv
};

namespace detail {

inline void apply_probe_settings(RunConfig& cfg, const nlohmann::json& probes) {
  if (probes.contains("contracting")) cfg.probe_contracting = probes.at("contracting");
  if (probes.contains("contracting_max_iterate"))
    cfg.contracting_max_iterate = probes.at("contracting_max_iterate");
  if (probes.contains("kernel")) cfg.probe_kernel = probes.at("kernel");
  if (probes.contains("kernel_level")) cfg.kernel_level = probes.at("kernel_level");
  if (probes.contains("kernel_bound")) cfg.kernel_bound = probes.at("kernel_bound");
  if (probes.contains("qa")) cfg.probe_qa = probes.at("qa");
  if (probes.contains("qa_level")) cfg.qa_level = probes.at("qa_level");
  if (probes.contains("qa_cylinder")) cfg.qa_cylinder = probes.at("qa_cylinder");
  if (probes.contains("qa_bound")) cfg.qa_bound = probes.at("qa_bound");
  if (probes.contains("self_replication"))
    cfg.probe_self_replication = probes.at("self_replication");
  if (probes.contains("self_replication_bound"))
    cfg.self_replication_bound = probes.at("self_replication_bound");
  if (probes.contains("self_replication_depth"))
    cfg.self_replication_depth = probes.at("self_replication_depth");
}

}  // namespace detail

// Fills a config from a preset name.  Depths follow the default study
// depths: deep enough to see the behavior, shallow enough for desk-scale
// runtimes.
inline RunConfig preset_config(const std::string& name) {
  RunConfig cfg;
  cfg.preset = name;
  if (name == "heisenberg") {
    cfg.backend = {{"name", "heisenberg"}, {"p", 2}, {"q", 3}};
    cfg.chain = "renormalization";
    cfg.max_level = 3;
  } else if (name == "lattice") {
    cfg.backend = {{"name", "lattice"},
                   {"k", 3},
                   {"m", 2},
                   {"h_generators", nlohmann::json::array({{1, 2, 0}})}};
    cfg.chain = "renormalization";
    cfg.max_level = 4;
  } else if (name == "affine-unit" || name == "affine_unit") {
    cfg.backend = {{"name", "affine_unit"}};
    cfg.chain = "renormalization";
    cfg.max_level = 12;
  } else if (name == "odometer") {
    cfg.backend = {{"name", "odometer"}};
    cfg.chain = "renormalization";
    cfg.max_level = 8;
  } else if (name == "grigorchuk") {
    cfg.backend = {{"name", "grigorchuk"}};
    cfg.chain = "vertex_stabilizer";
    cfg.max_level = 6;
    cfg.probe_qa = true;
    cfg.qa_level = 6;
    cfg.qa_cylinder = 1;
    cfg.qa_bound = 12;
  } else if (name == "toy") {
    cfg.backend = {{"name", "toy"}};
    cfg.chain = "vertex_stabilizer";
    cfg.max_level = 4;
  } else {
    throw ConfigInvalid("unknown preset '" + name + "'");
  }
  return cfg;
}

// Parses a JSON config document; a "preset" key supplies defaults that the
// remaining keys override.
inline RunConfig parse_config(const nlohmann::json& j) {
  RunConfig cfg;
  try {
    if (j.contains("preset")) cfg = preset_config(j.at("preset").get<std::string>());
    if (j.contains("backend")) cfg.backend = j.at("backend");
    if (j.contains("chain")) cfg.chain = j.at("chain").get<std::string>();
    if (j.contains("max_level")) cfg.max_level = j.at("max_level");
    if (j.contains("max_index")) cfg.max_index = j.at("max_index");
    if (j.contains("window")) cfg.window = j.at("window").get<int>();
    if (j.contains("comparison_depth")) cfg.comparison_depth = j.at("comparison_depth");
    if (j.contains("probes")) detail::apply_probe_settings(cfg, j.at("probes"));
    if (j.contains("cache_dir")) cfg.cache_dir = j.at("cache_dir").get<std::string>();
    if (j.contains("out")) cfg.out_path = j.at("out").get<std::string>();
    if (j.contains("format")) cfg.format = j.at("format").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigInvalid(std::string("malformed config: ") + e.what());
  }
  if (cfg.backend.is_null()) throw ConfigInvalid("config needs a 'preset' or a 'backend'");
  if (cfg.format != "json" && cfg.format != "text" && cfg.format != "csv")
    throw ConfigInvalid("format must be json, text, or csv");
  if (cfg.max_level < 0) throw ConfigInvalid("max_level must be nonnegative");
  if (cfg.window && *cfg.window < 1) throw ConfigInvalid("window must be positive");
  return cfg;
}

// Instantiates the backend named in the config; constructor validation
// covers the parameter ranges.
inline BackendVariant make_backend(const RunConfig& cfg) {
  try {
    const std::string name = cfg.backend.at("name").get<std::string>();
    if (name == "heisenberg")
      return HeisenbergBackend(cfg.backend.at("p").get<std::int64_t>(),
                               cfg.backend.at("q").get<std::int64_t>());
    if (name == "lattice")
      return LatticeBackend(cfg.backend.at("k").get<int>(),
                            cfg.backend.at("m").get<std::int64_t>(),
                            cfg.backend.at("h_generators")
                                .get<std::vector<std::vector<Point>>>());
    if (name == "affine_unit") return AffineUnitBackend();
    if (name == "odometer") return binary_odometer(cfg.comparison_depth);
    if (name == "grigorchuk") return grigorchuk(cfg.comparison_depth);
    if (name == "toy") return toy_swap(cfg.comparison_depth);
    throw ConfigInvalid("unknown backend '" + name + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigInvalid(std::string("malformed backend parameters: ") + e.what());
  }
}

inline ChainKind chain_kind_of(const RunConfig& cfg) {
  std::string kind = cfg.chain;
  if (kind.empty()) kind = "renormalization";
  if (kind == "renormalization") return ChainKind::kRenormalization;
  if (kind == "vertex_stabilizer") return ChainKind::kVertexStabilizer;
  throw ConfigInvalid("unknown chain kind '" + kind + "'");
}

}  // namespace renormlab
