#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "renormlab/chain.hpp"

namespace renormlab {

inline constexpr const char* kTowerFormat = "renormlab-tower";
inline constexpr int kTowerVersion = 1;

namespace detail {

inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace detail

// Serializes built levels; representatives are backend-tagged encodings and
// the whole payload round-trips bit-exactly.
template <class B>
nlohmann::json encode_tower(const ChainSpec<B>& spec,
                            const std::vector<std::shared_ptr<const LevelAction<B>>>& levels) {
  nlohmann::json j;
  j["format"] = kTowerFormat;
  j["version"] = kTowerVersion;
  j["backend"] = spec.backend.params();
  j["backend"]["name"] = spec.backend.name();
  j["chain"] = to_string(spec.kind);
  j["max_level_built"] = static_cast<int>(levels.size()) - 1;
  nlohmann::json jlevels = nlohmann::json::array();
  for (const auto& level : levels) {
    nlohmann::json jl;
    jl["level"] = level->level;
    jl["size"] = level->size;
    nlohmann::json perms = nlohmann::json::array();
    for (const Permutation& p : level->generator_perms) perms.push_back(p.images());
    jl["generator_perms"] = std::move(perms);
    jl["projection"] = level->projection;
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& r : level->representatives) reps.push_back(spec.backend.encode(r));
    jl["representatives"] = std::move(reps);
    jlevels.push_back(std::move(jl));
  }
  j["levels"] = std::move(jlevels);
  j["checksum"] = detail::fnv1a_hex(j["levels"].dump() + j["backend"].dump() + j["chain"].dump());
  return j;
}

template <class B>
std::vector<std::shared_ptr<const LevelAction<B>>> decode_tower(const ChainSpec<B>& spec,
                                                                const nlohmann::json& j) {
  try {
    if (!j.contains("format") || j.at("format") != kTowerFormat)
      throw CacheVersionMismatch("tower cache: wrong format tag");
    if (!j.contains("version") || j.at("version") != kTowerVersion)
      throw CacheVersionMismatch("tower cache: wrong version");
    nlohmann::json expect_backend = spec.backend.params();
    expect_backend["name"] = spec.backend.name();
    if (j.at("backend") != expect_backend || j.at("chain") != to_string(spec.kind))
      throw CacheVersionMismatch("tower cache: built for a different chain");
    const std::string checksum =
        detail::fnv1a_hex(j.at("levels").dump() + j.at("backend").dump() + j.at("chain").dump());
    if (j.at("checksum") != checksum)
      throw CacheVersionMismatch("tower cache: checksum mismatch");

    std::vector<std::shared_ptr<const LevelAction<B>>> levels;
    for (const auto& jl : j.at("levels")) {
      LevelAction<B> level;
      level.level = jl.at("level");
      level.size = jl.at("size");
      for (const auto& imgs : jl.at("generator_perms"))
        level.generator_perms.emplace_back(imgs.get<std::vector<Point>>());  // validates
      level.projection = jl.at("projection").get<std::vector<Point>>();
      for (const auto& r : jl.at("representatives"))
        level.representatives.push_back(spec.backend.decode(r));
      if (level.representatives.size() != level.size)
        throw CacheVersionMismatch("tower cache: representative count mismatch");
      levels.push_back(std::make_shared<const LevelAction<B>>(std::move(level)));
    }
    return levels;
  } catch (const nlohmann::json::exception& e) {
    throw CacheVersionMismatch(std::string("tower cache: malformed payload: ") + e.what());
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw CacheVersionMismatch(std::string("tower cache: ") + e.what());
  }
}

// Write-temp-then-rename so readers never observe a half-written cache.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& data) {
  std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << data;
    if (!out) throw Error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

template <class B>
std::filesystem::path cache_path(const ChainSpec<B>& spec, const std::string& cache_dir) {
  nlohmann::json params = spec.backend.params();
  params["name"] = spec.backend.name();
  std::string key = detail::fnv1a_hex(params.dump() + "|" + to_string(spec.kind));
  return std::filesystem::path(cache_dir) /
         (spec.backend.name() + "-" + to_string(spec.kind) + "-" + key + ".tower.json");
}

template <class B>
void save_tower(const ChainSpec<B>& spec,
                const std::vector<std::shared_ptr<const LevelAction<B>>>& levels,
                const std::string& cache_dir) {
  write_file_atomic(cache_path(spec, cache_dir), encode_tower(spec, levels).dump(1));
}

// Loads a cached tower when present, valid, and deep enough for the request;
// surplus levels are dropped.  A missing file returns empty; a present but
// unusable file throws CacheVersionMismatch.
template <class B>
std::vector<std::shared_ptr<const LevelAction<B>>> try_load_tower(const ChainSpec<B>& spec,
                                                                  const std::string& cache_dir,
                                                                  int up_to_level) {
  std::filesystem::path path = cache_path(spec, cache_dir);
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw CacheVersionMismatch(std::string("tower cache: unreadable JSON: ") + e.what());
  }
  auto levels = decode_tower(spec, j);
  if (static_cast<int>(levels.size()) - 1 < up_to_level) return {};  // too shallow, rebuild
  levels.resize(static_cast<std::size_t>(up_to_level) + 1);
  return levels;
}

}  // namespace renormlab
