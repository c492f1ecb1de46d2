#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "renormlab/errors.hpp"
#include "renormlab/perm.hpp"

namespace renormlab {

// Z^k semidirect a permutation group H <= Sym(k) acting on coordinates,
// with the endomorphism (v, h) -> (m v, h).  The level-l subgroup is
// m^l Z^k ⋊ H, so cosets are labeled by v mod m^l.
class LatticeBackend {
 public:
  struct Element {
    std::vector<std::int64_t> v;  // translation part, length k
    std::vector<Point> h;         // coordinate permutation, length k
    friend bool operator==(const Element&, const Element&) = default;
  };

  static constexpr bool kActsOnTree = false;

  LatticeBackend(int k, std::int64_t m, std::vector<std::vector<Point>> h_generators)
      : k_(k), m_(m), h_gens_(std::move(h_generators)) {
    if (k < 1) throw ConfigInvalid("lattice: k must be positive");
    if (m < 2) throw ConfigInvalid("lattice: m must be at least 2");
    for (const auto& h : h_gens_) {
      if (h.size() != static_cast<std::size_t>(k))
        throw ConfigInvalid("lattice: H generator degree != k");
      std::vector<bool> seen(h.size(), false);
      for (Point img : h) {
        if (img >= h.size() || seen[img])
          throw ConfigInvalid("lattice: H generator is not a permutation");
        seen[img] = true;
      }
    }
  }

  int k() const { return k_; }
  std::int64_t m() const { return m_; }
  std::string name() const { return "lattice"; }
  bool has_phi() const { return true; }

  Element identity() const { return {std::vector<std::int64_t>(k_, 0), id_perm()}; }

  Element multiply(const Element& g, const Element& h) const {
    Element r;
    r.v = g.v;
    for (int j = 0; j < k_; ++j) r.v[g.h[j]] = add(r.v[g.h[j]], h.v[j]);
    r.h.resize(k_);
    for (int j = 0; j < k_; ++j) r.h[j] = g.h[h.h[j]];
    return r;
  }

  Element invert(const Element& g) const {
    Element r;
    r.h.resize(k_);
    for (int j = 0; j < k_; ++j) r.h[g.h[j]] = static_cast<Point>(j);
    r.v.resize(k_);
    for (int j = 0; j < k_; ++j) r.v[j] = -g.v[g.h[j]];
    return r;
  }

  Element apply_phi(const Element& g) const {
    Element r = g;
    for (auto& c : r.v) c = mul(c, m_);
    return r;
  }

  std::vector<Element> generators() const {
    std::vector<Element> gens;
    for (int i = 0; i < k_; ++i) {
      Element e = identity();
      e.v[i] = 1;
      gens.push_back(std::move(e));
    }
    for (const auto& h : h_gens_) gens.push_back({std::vector<std::int64_t>(k_, 0), h});
    return gens;
  }

  std::vector<std::string> generator_names() const {
    std::vector<std::string> names;
    for (int i = 0; i < k_; ++i) names.push_back("e" + std::to_string(i + 1));
    for (std::size_t i = 0; i < h_gens_.size(); ++i) names.push_back("h" + std::to_string(i + 1));
    return names;
  }

  std::string coset_token(const Element& g, int level) const {
    std::int64_t ml = ipow(m_, level);
    std::string t;
    for (int i = 0; i < k_; ++i) {
      if (i) t += ",";
      t += std::to_string(mod(g.v[i], ml));
    }
    return t;
  }

  bool in_level_subgroup(const Element& g, int level) const {
    std::int64_t ml = ipow(m_, level);
    for (auto c : g.v)
      if (mod(c, ml) != 0) return false;
    return true;
  }

  nlohmann::json encode(const Element& g) const { return {{"v", g.v}, {"h", g.h}}; }

  Element decode(const nlohmann::json& j) const {
    Element g{j.at("v").get<std::vector<std::int64_t>>(), j.at("h").get<std::vector<Point>>()};
    if (g.v.size() != static_cast<std::size_t>(k_) || g.h.size() != static_cast<std::size_t>(k_))
      throw CacheVersionMismatch("lattice: bad element encoding");
    return g;
  }

  nlohmann::json params() const { return {{"k", k_}, {"m", m_}, {"h_generators", h_gens_}}; }

 private:
  std::vector<Point> id_perm() const {
    std::vector<Point> p(k_);
    for (int i = 0; i < k_; ++i) p[i] = static_cast<Point>(i);
    return p;
  }

  static std::int64_t mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
  }

  static std::int64_t add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw TooLarge("lattice: coordinate overflow");
    return r;
  }

  static std::int64_t mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw TooLarge("lattice: coordinate overflow");
    return r;
  }

  static std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r = mul(r, b);
    return r;
  }

  int k_;
  std::int64_t m_;
  std::vector<std::vector<Point>> h_gens_;
};

}  // namespace renormlab
