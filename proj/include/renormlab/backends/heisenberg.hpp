#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "renormlab/errors.hpp"

namespace renormlab {

// Integer Heisenberg group on Z^3 with
//   (x,y,z)*(u,v,w) = (x+u, y+v, z+w+xv),   (x,y,z)^-1 = (-x,-y,-z+xy),
// and the scaling endomorphism (x,y,z) -> (px, qy, pqz).  The level-l
// subgroup is { (p^l x, q^l y, (pq)^l z) }, so a coset is canonically
// labeled by reducing x mod p^l, then y mod q^l (which shears z), then
// z mod (pq)^l.
class HeisenbergBackend {
 public:
  struct Element {
    std::int64_t x = 0, y = 0, z = 0;
    friend bool operator==(const Element&, const Element&) = default;
  };

  static constexpr bool kActsOnTree = false;

  HeisenbergBackend(std::int64_t p, std::int64_t q) : p_(p), q_(q) {
    if (p < 2 || q < 2) throw ConfigInvalid("heisenberg: p and q must be at least 2");
  }

  std::int64_t p() const { return p_; }
  std::int64_t q() const { return q_; }
  std::string name() const { return "heisenberg"; }
  bool has_phi() const { return true; }

  Element identity() const { return {}; }

  Element multiply(const Element& g, const Element& h) const {
    return {add(g.x, h.x), add(g.y, h.y), add(add(g.z, h.z), mul(g.x, h.y))};
  }

  Element invert(const Element& g) const { return {-g.x, -g.y, add(-g.z, mul(g.x, g.y))}; }

  Element apply_phi(const Element& g) const {
    return {mul(p_, g.x), mul(q_, g.y), mul(mul(p_, q_), g.z)};
  }

  std::vector<Element> generators() const { return {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}; }

  std::vector<std::string> generator_names() const { return {"a", "b", "c"}; }

  std::string coset_token(const Element& g, int level) const {
    std::int64_t pl = ipow(p_, level), ql = ipow(q_, level), m = mul(pl, ql);
    std::int64_t xr = mod(g.x, pl);
    std::int64_t yr = mod(g.y, ql);
    // Right multiplication by (0, q^l v, 0) adds x q^l v to z; v is the
    // shift that reduces y, taken mod (pq)^l where it is all that matters.
    std::int64_t vm = mod((yr - g.y) / ql, m);
    std::int64_t term = mod(mod(xr * ql, m) * vm, m);
    std::int64_t zr = mod(mod(g.z, m) + term, m);
    return std::to_string(xr) + "," + std::to_string(yr) + "," + std::to_string(zr);
  }

  // Membership of g in the level-l subgroup, used as a test oracle.
  bool in_level_subgroup(const Element& g, int level) const {
    std::int64_t pl = ipow(p_, level), ql = ipow(q_, level);
    return mod(g.x, pl) == 0 && mod(g.y, ql) == 0 && mod(g.z, mul(pl, ql)) == 0;
  }

  nlohmann::json encode(const Element& g) const { return {g.x, g.y, g.z}; }

  Element decode(const nlohmann::json& j) const {
    return {j.at(0).get<std::int64_t>(), j.at(1).get<std::int64_t>(),
            j.at(2).get<std::int64_t>()};
  }

  nlohmann::json params() const { return {{"p", p_}, {"q", q_}}; }

 private:
  static std::int64_t mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
  }

  static std::int64_t add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
      throw TooLarge("heisenberg: coordinate exceeds 64-bit range");
    return r;
  }

  static std::int64_t mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
      throw TooLarge("heisenberg: coordinate exceeds 64-bit range");
    return r;
  }

  static std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r = mul(r, b);
    return r;
  }

  std::int64_t p_, q_;
};

}  // namespace renormlab
