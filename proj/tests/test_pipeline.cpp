#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "renormlab/renormlab.hpp"

using namespace renormlab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("renormlab-test-" + std::to_string(std::rand()) + "-" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

nlohmann::json strip_meta(nlohmann::json j) {
  j.erase("meta");
  return j;
}

}  // namespace

TEST_CASE("config parsing and validation") {
  SECTION("presets fill defaults") {
    RunConfig cfg = preset_config("heisenberg");
    CHECK(cfg.backend.at("p") == 2);
    CHECK(cfg.max_level == 3);
    CHECK(chain_kind_of(cfg) == ChainKind::kRenormalization);
    CHECK(chain_kind_of(preset_config("grigorchuk")) == ChainKind::kVertexStabilizer);
  }

  SECTION("unknown names are rejected before computation") {
    CHECK_THROWS_AS(preset_config("dihedral"), ConfigInvalid);
    RunConfig cfg;
    cfg.backend = {{"name", "so3"}};
    CHECK_THROWS_AS(make_backend(cfg), ConfigInvalid);
  }

  SECTION("out-of-range parameters are rejected") {
    RunConfig bad_p = preset_config("heisenberg");
    bad_p.backend["p"] = 1;
    CHECK_THROWS_AS(make_backend(bad_p), ConfigInvalid);

    RunConfig bad_h = preset_config("lattice");
    bad_h.backend["h_generators"] = nlohmann::json::array({{0, 0, 1}});
    CHECK_THROWS_AS(make_backend(bad_h), ConfigInvalid);

    CHECK_THROWS_AS(parse_config(nlohmann::json{{"preset", "heisenberg"}, {"format", "xml"}}),
                    ConfigInvalid);
    CHECK_THROWS_AS(parse_config(nlohmann::json{{"preset", "heisenberg"}, {"window", 0}}),
                    ConfigInvalid);
    CHECK_THROWS_AS(parse_config(nlohmann::json::object()), ConfigInvalid);
  }

  SECTION("config keys override preset defaults") {
    nlohmann::json j{{"preset", "heisenberg"}, {"max_level", 2}, {"window", 1},
                     {"backend", {{"name", "heisenberg"}, {"p", 2}, {"q", 2}}}};
    RunConfig cfg = parse_config(j);
    CHECK(cfg.max_level == 2);
    CHECK(cfg.window == 1);
    CHECK(cfg.backend.at("q") == 2);
  }
}

TEST_CASE("analyze report values") {
  SECTION("heisenberg depth 3 table row") {
    RunConfig cfg = preset_config("heisenberg");
    Report r = run_analyze(cfg);
    REQUIRE(r.rows.size() == 4);
    CHECK(r.rows[3].points == 46656);
    CHECK(r.rows[3].quotient_order == "10077696");
    CHECK(r.rows[3].discriminant_order == "216");
    CHECK(r.rows[3].discriminant_shape == "[216]");
    REQUIRE(r.verdict.has_value());
    CHECK(r.verdict->kind == VerdictKind::kGrowing);  // window clamped to depth-2
    CHECK(r.window_used == 1);
  }

  SECTION("affine depth 6 discriminant column") {
    RunConfig cfg = preset_config("affine-unit");
    cfg.max_level = 6;
    Report r = run_analyze(cfg);
    std::vector<std::string> column;
    for (std::size_t l = 1; l < r.rows.size(); ++l)
      column.push_back(r.rows[l].discriminant_order);
    CHECK(column == std::vector<std::string>{"1", "2", "4", "8", "16", "32"});
    REQUIRE(r.verdict.has_value());
    CHECK(r.verdict->kind == VerdictKind::kGrowing);
  }

  SECTION("grigorchuk qa scan emits a validated witness certificate") {
    RunConfig cfg = preset_config("grigorchuk");
    Report r = run_qa_scan(cfg);
    REQUIRE(r.probes.contains("qa"));
    const auto& qa = r.probes.at("qa");
    REQUIRE_FALSE(qa.at("witness").is_null());
    CHECK(qa.at("witness").at("word") == "d");
    CHECK(qa.at("witness").at("validated") == true);
  }

  SECTION("qa scan runs on a vertex-stabilizer chain without an endomorphism") {
    RunConfig cfg = preset_config("grigorchuk");
    cfg.max_level = 4;
    cfg.qa_level = 4;
    cfg.qa_bound = 6;
    Report r = run_qa_scan(cfg);
    CHECK(r.probes.contains("qa"));
    CHECK_FALSE(r.probes.contains("contracting"));
  }

  SECTION("csv rows mirror the json table") {
    RunConfig cfg = preset_config("lattice");
    cfg.max_level = 3;
    Report r = run_analyze(cfg);
    std::string csv = r.to_csv();
    std::size_t lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == r.rows.size() + 1);  // header + one line per level
    for (const LevelRow& row : r.rows) {
      std::string needle = std::to_string(row.level) + "," + std::to_string(row.points) + "," +
                           row.quotient_order + "," + row.discriminant_order;
      CHECK(csv.find(needle) != std::string::npos);
    }
  }
}

TEST_CASE("determinism") {
  RunConfig cfg = preset_config("lattice");
  cfg.max_level = 3;
  Report a = run_analyze(cfg);
  Report b = run_analyze(cfg);
  CHECK(strip_meta(a.to_json()).dump() == strip_meta(b.to_json()).dump());
}

TEST_CASE("tower cache") {
  TempDir dir;

  SECTION("round trip is bit-exact and hits on the second run") {
    RunConfig cfg = preset_config("odometer");
    cfg.max_level = 4;
    cfg.cache_dir = dir.path.string();

    Report first = run_tower(cfg);
    CHECK_FALSE(first.cache_hit);
    Report second = run_tower(cfg);
    CHECK(second.cache_hit);
    CHECK(strip_meta(first.to_json()).dump() == strip_meta(second.to_json()).dump());

    // Level payloads reload identically.
    ChainSpec<WreathBackend> spec{binary_odometer(), ChainKind::kRenormalization, 4};
    auto built = try_load_tower(spec, cfg.cache_dir, 4);
    REQUIRE(built.size() == 5);
    auto reencoded = encode_tower(spec, built);
    std::ifstream in(cache_path(spec, cfg.cache_dir));
    nlohmann::json on_disk;
    in >> on_disk;
    CHECK(reencoded.dump() == on_disk.dump());
  }

  SECTION("corrupting one byte is detected") {
    RunConfig cfg = preset_config("odometer");
    cfg.max_level = 3;
    cfg.cache_dir = dir.path.string();
    run_tower(cfg);

    ChainSpec<WreathBackend> spec{binary_odometer(), ChainKind::kRenormalization, 3};
    fs::path path = cache_path(spec, cfg.cache_dir);
    std::string data;
    {
      std::ifstream in(path, std::ios::binary);
      data.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    std::size_t pos = data.find("\"projection\"");
    REQUIRE(pos != std::string::npos);
    // Flip a digit inside the levels payload.
    std::size_t digit = data.find_first_of("0123456789", pos + 14);
    REQUIRE(digit != std::string::npos);
    data[digit] = data[digit] == '0' ? '1' : '0';
    {
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      out << data;
    }
    CHECK_THROWS_AS(try_load_tower(spec, cfg.cache_dir, 3), CacheVersionMismatch);
  }

  SECTION("a cache for different parameters is rejected") {
    ChainSpec<WreathBackend> od{binary_odometer(), ChainKind::kRenormalization, 3};
    std::vector<std::shared_ptr<const LevelAction<WreathBackend>>> levels;
    for (int l = 0; l <= 3; ++l) {
      const LevelAction<WreathBackend>* prev = l > 0 ? levels.back().get() : nullptr;
      levels.push_back(
          std::make_shared<const LevelAction<WreathBackend>>(build_level(od, l, prev)));
    }
    nlohmann::json j = encode_tower(od, levels);
    ChainSpec<WreathBackend> gr{grigorchuk(), ChainKind::kVertexStabilizer, 3};
    CHECK_THROWS_AS(decode_tower(gr, j), CacheVersionMismatch);
  }

  SECTION("a shallow cache is rebuilt rather than reused") {
    RunConfig cfg = preset_config("odometer");
    cfg.max_level = 2;
    cfg.cache_dir = dir.path.string();
    run_tower(cfg);
    cfg.max_level = 4;
    Report deeper = run_tower(cfg);
    CHECK_FALSE(deeper.cache_hit);
    CHECK(deeper.rows.size() == 5);
  }
}

TEST_CASE("tree export text") {
  RunConfig cfg = preset_config("odometer");
  cfg.max_level = 1;
  std::string dot = run_tree_export(cfg);
  CHECK(dot.find("digraph") == 0);
  CHECK(dot.find("v0_0 -> v1_1") != std::string::npos);
}

TEST_CASE("analysis on a cached tower reproduces the report") {
  TempDir dir;
  RunConfig cfg = preset_config("lattice");
  cfg.max_level = 4;
  cfg.cache_dir = dir.path.string();
  Report fresh = run_analyze(cfg);
  Report cached = run_analyze(cfg);
  CHECK(cached.cache_hit);
  CHECK(strip_meta(fresh.to_json()).dump() == strip_meta(cached.to_json()).dump());
  REQUIRE(fresh.verdict.has_value());
  CHECK(fresh.verdict->kind == VerdictKind::kFiniteStable);
  CHECK(fresh.verdict->stable_order == 3);
}
