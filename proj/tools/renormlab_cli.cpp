// Command line front end: finite-level models of renormalizable group
// actions, their discriminant towers, regularity probes, and tree exports.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "renormlab/renormlab.hpp"

namespace {

using namespace renormlab;

struct CommonArgs {
  std::string preset;
  std::string config_path;
  std::optional<int> depth;
  std::optional<int> window;
  std::optional<int> word_bound;
  std::string cache_dir;
  std::string out_path;
  std::string format;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("preset", args.preset,
                  "preset name: heisenberg, lattice, affine-unit, odometer, grigorchuk, toy");
  cmd->add_option("--config", args.config_path, "JSON config file (overrides the preset)");
  cmd->add_option("--depth", args.depth, "levels to build");
  cmd->add_option("--window", args.window, "verdict window");
  cmd->add_option("--word-bound", args.word_bound, "word length bound for searches");
  cmd->add_option("--cache-dir", args.cache_dir, "tower cache directory");
  cmd->add_option("--out", args.out_path, "write the report here instead of stdout");
  cmd->add_option("--format", args.format, "json | text | csv");
}

RunConfig resolve_config(const CommonArgs& args) {
  RunConfig cfg;
  bool have = false;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) throw ConfigInvalid("cannot read config file " + args.config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigInvalid(std::string("config is not valid JSON: ") + e.what());
    }
    cfg = parse_config(j);
    have = true;
  }
  if (!args.preset.empty()) {
    if (!have) {
      cfg = preset_config(args.preset);
      have = true;
    } else if (cfg.preset != args.preset) {
      throw ConfigInvalid("preset argument conflicts with the config file");
    }
  }
  if (!have) throw ConfigInvalid("give a preset name or --config");

  if (args.depth) cfg.max_level = *args.depth;
  if (args.depth && *args.depth < 0) throw ConfigInvalid("depth must be nonnegative");
  if (args.window) {
    if (*args.window < 1) throw ConfigInvalid("window must be positive");
    cfg.window = *args.window;
  }
  if (args.word_bound) {
    cfg.qa_bound = *args.word_bound;
    cfg.kernel_bound = *args.word_bound;
  }
  if (!args.cache_dir.empty()) cfg.cache_dir = args.cache_dir;
  if (!args.out_path.empty()) cfg.out_path = args.out_path;
  if (!args.format.empty()) cfg.format = args.format;
  if (cfg.format != "json" && cfg.format != "text" && cfg.format != "csv")
    throw ConfigInvalid("format must be json, text, or csv");
  return cfg;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out_path.empty()) {
    std::cout << text;
    return;
  }
  write_file_atomic(cfg.out_path, text);
}

int dispatch(const std::string& command, const RunConfig& cfg) {
  if (command == "analyze") {
    emit(cfg, run_analyze(cfg).render(cfg.format));
  } else if (command == "tower") {
    emit(cfg, run_tower(cfg).render(cfg.format));
  } else if (command == "qa-scan") {
    RunConfig sub = cfg;
    sub.qa_level = cfg.max_level;
    emit(cfg, run_qa_scan(sub).render(cfg.format));
  } else if (command == "tree-export") {
    emit(cfg, run_tree_export(cfg));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-level models of renormalizable group actions"};
  app.require_subcommand(1);

  CommonArgs args;
  CLI::App* analyze = app.add_subcommand("analyze", "full per-level table, verdict, probes");
  CLI::App* tower = app.add_subcommand("tower", "build and cache the coset tower");
  CLI::App* qa = app.add_subcommand("qa-scan", "search for quasi-analyticity witnesses");
  CLI::App* tree = app.add_subcommand("tree-export", "emit the coset tree as DOT text");
  for (CLI::App* cmd : {analyze, tower, qa, tree}) add_common(cmd, args);

  CLI11_PARSE(app, argc, argv);

  std::string command;
  for (CLI::App* cmd : {analyze, tower, qa, tree})
    if (cmd->parsed()) command = cmd->get_name();

  try {
    RunConfig cfg = resolve_config(args);
    return dispatch(command, cfg);
  } catch (const renormlab::ConfigInvalid& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const renormlab::InsufficientDepth& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const renormlab::IndexBudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const renormlab::LevelBudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const renormlab::TooLarge& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const renormlab::CacheVersionMismatch& e) {
    std::cerr << "cache error: " << e.what() << "\n";
    return 4;
  } catch (const renormlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
