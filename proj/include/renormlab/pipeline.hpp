#pragma once

#include <chrono>
#include <ctime>
#include <string>
#include <variant>

#include "renormlab/cache.hpp"
#include "renormlab/config.hpp"
#include "renormlab/report.hpp"
#include "renormlab/tree.hpp"

namespace renormlab {

namespace detail {

inline std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

template <class B>
ChainSpec<B> make_spec(B backend, const RunConfig& cfg) {
  ChainSpec<B> spec{std::move(backend), chain_kind_of(cfg), cfg.max_level, cfg.max_index};
  spec.validate();
  return spec;
}

// Levels from the cache when possible, else a fresh build (saved back when a
// cache directory is configured).
template <class B>
std::vector<std::shared_ptr<const LevelAction<B>>> obtain_levels(const ChainSpec<B>& spec,
                                                                 const RunConfig& cfg,
                                                                 bool& cache_hit) {
  cache_hit = false;
  if (!cfg.cache_dir.empty()) {
    auto cached = try_load_tower(spec, cfg.cache_dir, cfg.max_level);
    if (!cached.empty()) {
      cache_hit = true;
      return cached;
    }
  }
  std::vector<std::shared_ptr<const LevelAction<B>>> levels;
  for (int l = 0; l <= cfg.max_level; ++l) {
    const LevelAction<B>* prev = l > 0 ? levels.back().get() : nullptr;
    levels.push_back(std::make_shared<const LevelAction<B>>(build_level(spec, l, prev)));
  }
  if (!cfg.cache_dir.empty()) save_tower(spec, levels, cfg.cache_dir);
  return levels;
}

template <class B>
void fill_rows(Report& report, const TowerAnalysis<B>& t) {
  for (int l = 0; l <= t.top_level(); ++l) {
    LevelRow row;
    row.level = l;
    row.points = t.level(l).size;
    row.quotient_order = to_string(t.quotients[l].order());
    row.discriminant_order = to_string(t.discriminants[l].order());
    row.discriminant_shape = t.shape_known[l] ? t.shapes[l].str() : "";
    if (l >= 2) {
      PermGroupBSGS img = detail::one_step_image(t, l - 1);
      row.bonding_onto_below = img.order() == t.discriminants[l - 1].order();
    }
    report.rows.push_back(std::move(row));
  }
}

template <class B>
void run_probes(Report& report, const TowerAnalysis<B>& t, const RunConfig& cfg) {
  if (cfg.probe_contracting && t.spec.kind == ChainKind::kRenormalization) {
    nlohmann::json jc = nlohmann::json::array();
    auto gens = t.spec.backend.generators();
    auto names = t.spec.backend.generator_names();
    int max_level = t.top_level();
    for (std::size_t i = 0; i < gens.size(); ++i) {
      ContractingProbe p =
          contracting_probe(t, gens[i], max_level, cfg.contracting_max_iterate);
      nlohmann::json levels = nlohmann::json::array();
      for (const auto& f : p.first_trivial) {
        if (f)
          levels.push_back(*f);
        else
          levels.push_back(nullptr);  // not within the iterate bound
      }
      jc.push_back({{"generator", names[i]},
                    {"first_trivial_iterate", std::move(levels)},
                    {"max_iterate", cfg.contracting_max_iterate}});
    }
    report.probes["contracting"] = std::move(jc);
  }

  if (cfg.probe_kernel) {
    KernelProbe p = kernel_probe(t, std::min(cfg.kernel_level, t.top_level()),
                                 cfg.kernel_bound);
    nlohmann::json words = nlohmann::json::array();
    for (const KernelWord& w : p.words)
      words.push_back({{"word", w.word}, {"acts_trivially", w.acts_trivially}});
    report.probes["kernel"] = {
        {"level", p.level}, {"word_bound", p.word_bound}, {"words", std::move(words)}};
  }

  if (cfg.probe_qa) {
    int level = std::min(cfg.qa_level, t.top_level());
    QASearchResult r = qa_witness_search(t, level, cfg.qa_cylinder, cfg.qa_bound);
    nlohmann::json jq;
    jq["level"] = level;
    jq["cylinder_depth"] = cfg.qa_cylinder;
    jq["word_bound"] = cfg.qa_bound;
    jq["classes_explored"] = r.classes_explored;
    if (r.found) {
      jq["witness"] = {{"word", r.witness.word},
                       {"moved_point", r.witness.moved_point},
                       {"validated", validate_qa_witness(t, r.witness)}};
    } else {
      jq["witness"] = nullptr;  // depth-stamped evidence of quasi-analyticity
    }
    report.probes["qa"] = std::move(jq);
  }

  if constexpr (B::kActsOnTree) {
    if (cfg.probe_self_replication) {
      SelfReplication r = self_replicating_probe(t.spec.backend, cfg.self_replication_bound,
                                                 cfg.self_replication_depth);
      nlohmann::json items = nlohmann::json::array();
      for (const auto& item : r.items)
        items.push_back({{"generator", item.generator},
                         {"found", item.found},
                         {"word", item.word}});
      report.probes["self_replication"] = {{"pass", r.pass},
                                           {"word_bound", cfg.self_replication_bound},
                                           {"depth", cfg.self_replication_depth},
                                           {"items", std::move(items)}};
    }
  }
}

template <class B>
Report analyze_with_backend(B backend, const RunConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  ChainSpec<B> spec = make_spec(std::move(backend), cfg);

  Report report;
  report.backend_name = spec.backend.name();
  report.chain = to_string(spec.kind);
  report.max_level = cfg.max_level;
  report.timestamp = iso_timestamp();

  bool cache_hit = false;
  auto levels = obtain_levels(spec, cfg, cache_hit);
  report.cache_hit = cache_hit;
  TowerAnalysis<B> t = analyze_levels(spec, std::move(levels));

  fill_rows(report, t);

  int window = cfg.window ? *cfg.window : std::min(3, t.top_level() - 2);
  report.window_used = window;
  if (window >= 1 && t.top_level() >= window + 2) {
    report.verdict = classify_discriminant(t, window);
  } else if (cfg.window) {
    throw InsufficientDepth("window " + std::to_string(*cfg.window) + " needs at least " +
                            std::to_string(*cfg.window + 2) + " levels");
  } else {
    report.verdict_note = "tower too shallow for a verdict window";
  }

  run_probes(report, t, cfg);

  report.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  return report;
}

}  // namespace detail

// Builds (or loads) the tower, computes the per-level table, the verdict at
// the configured window, and the requested probes.  Deterministic for a
// fixed config up to the meta block.
inline Report run_analyze(const RunConfig& cfg) {
  BackendVariant backend = make_backend(cfg);
  Report report = std::visit(
      [&](auto bk) { return detail::analyze_with_backend(std::move(bk), cfg); }, backend);
  nlohmann::json echo;
  echo["preset"] = cfg.preset;
  echo["backend"] = cfg.backend;
  echo["chain"] = report.chain;
  echo["max_level"] = cfg.max_level;
  echo["max_index"] = cfg.max_index;
  echo["window_used"] = report.window_used;
  echo["probes"] = {{"contracting", cfg.probe_contracting},
                    {"contracting_max_iterate", cfg.contracting_max_iterate},
                    {"kernel", cfg.probe_kernel},
                    {"kernel_level", cfg.kernel_level},
                    {"kernel_bound", cfg.kernel_bound},
                    {"qa", cfg.probe_qa},
                    {"qa_level", cfg.qa_level},
                    {"qa_cylinder", cfg.qa_cylinder},
                    {"qa_bound", cfg.qa_bound},
                    {"self_replication", cfg.probe_self_replication},
                    {"self_replication_bound", cfg.self_replication_bound},
                    {"self_replication_depth", cfg.self_replication_depth}};
  report.config_echo = std::move(echo);
  return report;
}

// Builds the tower and caches it; reports only the level table.
inline Report run_tower(const RunConfig& cfg) {
  RunConfig sub = cfg;
  sub.probe_contracting = false;
  sub.probe_kernel = false;
  sub.probe_qa = false;
  sub.probe_self_replication = false;
  return run_analyze(sub);
}

// Runs only the quasi-analyticity scan.
inline Report run_qa_scan(const RunConfig& cfg) {
  RunConfig sub = cfg;
  sub.probe_contracting = false;
  sub.probe_kernel = false;
  sub.probe_self_replication = false;
  sub.probe_qa = true;
  return run_analyze(sub);
}

// DOT text of the coset tree at the configured depth; builds levels first
// when they are not already cached.
inline std::string run_tree_export(const RunConfig& cfg) {
  BackendVariant backend = make_backend(cfg);
  return std::visit(
      [&](auto bk) {
        auto spec = detail::make_spec(std::move(bk), cfg);
        bool cache_hit = false;
        auto levels = detail::obtain_levels(spec, cfg, cache_hit);
        return export_dot(build_tree(levels, static_cast<int>(levels.size()) - 1));
      },
      backend);
}

}  // namespace renormlab
