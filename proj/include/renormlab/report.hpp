#pragma once

#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "renormlab/analyzer.hpp"
#include "renormlab/bigint.hpp"

namespace renormlab {

inline constexpr const char* kReportFormat = "renormlab-report";
inline constexpr int kReportVersion = 1;

struct LevelRow {
  int level = 0;
  Point points = 0;
  std::string quotient_order;
  std::string discriminant_order;
  std::string discriminant_shape;  // "" when outside the enumeration budget
  std::optional<bool> bonding_onto_below;  // image of D_l in D_{l-1} full?
};

struct Report {
  nlohmann::json config_echo;
  std::string backend_name;
  std::string chain;
  int max_level = 0;
  std::vector<LevelRow> rows;

  std::optional<Verdict> verdict;
  std::string verdict_note;  // set when no verdict could be computed
  int window_used = 0;

  nlohmann::json probes = nlohmann::json::object();

  // Run metadata; excluded from determinism comparisons.
  std::string timestamp;
  std::int64_t elapsed_ms = 0;
  bool cache_hit = false;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["format"] = kReportFormat;
    j["version"] = kReportVersion;
    j["config"] = config_echo;
    j["backend"] = backend_name;
    j["chain"] = chain;
    j["max_level"] = max_level;

    nlohmann::json table = nlohmann::json::array();
    for (const LevelRow& r : rows) {
      nlohmann::json row;
      row["level"] = r.level;
      row["points"] = r.points;
      row["quotient_order"] = r.quotient_order;
      row["discriminant_order"] = r.discriminant_order;
      row["discriminant_shape"] = r.discriminant_shape;
      if (r.bonding_onto_below)
        row["bonding_onto_below"] = *r.bonding_onto_below;
      else
        row["bonding_onto_below"] = nullptr;
      table.push_back(std::move(row));
    }
    j["levels"] = std::move(table);

    if (verdict) {
      nlohmann::json v;
      v["kind"] = to_string(verdict->kind);
      if (verdict->kind == VerdictKind::kFiniteStable)
        v["stable_order"] = to_string(verdict->stable_order);
      v["evidence_depth"] = verdict->evidence_depth;
      v["window"] = verdict->window;
      nlohmann::json so = nlohmann::json::array();
      for (const auto& seq : verdict->stable_orders) {
        nlohmann::json row = nlohmann::json::array();
        for (const BigInt& o : seq) row.push_back(to_string(o));
        so.push_back(std::move(row));
      }
      v["stable_image_orders"] = std::move(so);
      v["stabilized"] = verdict->stabilized;
      v["semantics"] = "finite-depth evidence at the stated window, not a limit statement";
      j["verdict"] = std::move(v);
    } else {
      j["verdict"] = nullptr;
      j["verdict_note"] = verdict_note;
    }

    j["probes"] = probes;
    j["meta"] = {{"timestamp", timestamp}, {"elapsed_ms", elapsed_ms}, {"cache_hit", cache_hit}};
    return j;
  }

  // One CSV row per level, mirroring the JSON table exactly.
  std::string to_csv() const {
    std::ostringstream os;
    os << "level,points,quotient_order,discriminant_order,discriminant_shape,"
          "bonding_onto_below\n";
    for (const LevelRow& r : rows) {
      os << r.level << "," << r.points << "," << r.quotient_order << ","
         << r.discriminant_order << ",\"" << r.discriminant_shape << "\",";
      if (r.bonding_onto_below) os << (*r.bonding_onto_below ? "true" : "false");
      os << "\n";
    }
    return os.str();
  }

  std::string to_text() const {
    std::ostringstream os;
    os << "backend: " << backend_name << "   chain: " << chain << "   depth: " << max_level
       << "\n\n";
    os << "  l |      points |   quotient order | discriminant | shape        | onto below\n";
    os << "----+-------------+------------------+--------------+--------------+-----------\n";
    for (const LevelRow& r : rows) {
      os << std::setw(3) << r.level << " | " << std::setw(11) << r.points << " | "
         << std::setw(16) << r.quotient_order << " | " << std::setw(12)
         << r.discriminant_order << " | " << std::setw(12)
         << (r.discriminant_shape.empty() ? "-" : r.discriminant_shape) << " | "
         << (r.bonding_onto_below ? (*r.bonding_onto_below ? "yes" : "no") : "-") << "\n";
    }
    os << "\n";
    if (verdict) {
      os << "verdict: " << to_string(verdict->kind);
      if (verdict->kind == VerdictKind::kFiniteStable)
        os << "(" << to_string(verdict->stable_order) << ")";
      os << "  [evidence depth " << verdict->evidence_depth << ", window " << verdict->window
         << "]\n";
    } else {
      os << "verdict: none (" << verdict_note << ")\n";
    }
    if (!probes.empty()) os << "probes: " << probes.dump(1) << "\n";
    return os.str();
  }

  std::string render(const std::string& format) const {
    if (format == "json") return to_json().dump(1) + "\n";
    if (format == "csv") return to_csv();
    return to_text();
  }
};

}  // namespace renormlab
