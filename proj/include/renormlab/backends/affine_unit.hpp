#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "renormlab/errors.hpp"

namespace renormlab {

// The group Z[1/5] ⋊ (Z/2 x Z) of affine maps x -> (-1)^eps 5^m x + t on
// the 5-divisible rationals, generated by
//   a : x -> x + 1,   b : x -> -x,   c : x -> 5x,
// so that b a b^-1 = a^-1 and c a c^-1 = a^5, with b and c commuting.
// Products compose right to left: (g*h)(x) = g(h(x)).  The endomorphism
// fixes b and c and doubles translations, giving the level-l subgroup
// <a^{2^l}, b, c>; since 5 is invertible mod 2^l, a coset is labeled by
// the image of 0, i.e. t mod 2^l.
class AffineUnitBackend {
 public:
  struct Element {
    std::int64_t num = 0;  // t = num / 5^e5, with 5 ∤ num unless num == 0
    std::int32_t e5 = 0;
    std::uint8_t eps = 0;  // sign exponent of the unit part
    std::int64_t m = 0;    // 5-power exponent of the unit part
    friend bool operator==(const Element&, const Element&) = default;
  };

  static constexpr bool kActsOnTree = false;

  std::string name() const { return "affine_unit"; }
  bool has_phi() const { return true; }

  Element identity() const { return {}; }

  Element multiply(const Element& g, const Element& h) const {
    // t = t_g + u_g * t_h, unit parts multiply.
    Element scaled = scale_translation(h.num, h.e5, g.eps, g.m);
    auto [num, e5] = add_rat(g.num, g.e5, scaled.num, scaled.e5);
    return normalize({num, e5, static_cast<std::uint8_t>(g.eps ^ h.eps), add(g.m, h.m)});
  }

  Element invert(const Element& g) const {
    // inverse map x -> u^-1 x - u^-1 t
    Element scaled = scale_translation(g.num, g.e5, g.eps, -g.m);
    return normalize({-scaled.num, scaled.e5, g.eps, -g.m});
  }

  Element apply_phi(const Element& g) const {
    return normalize({mul(g.num, 2), g.e5, g.eps, g.m});
  }

  std::vector<Element> generators() const {
    return {{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  }

  std::vector<std::string> generator_names() const { return {"a", "b", "c"}; }

  std::string coset_token(const Element& g, int level) const {
    return std::to_string(residue(g, level));
  }

  bool in_level_subgroup(const Element& g, int level) const { return residue(g, level) == 0; }

  // t mod 2^level, resolving the 5-power denominator by modular inverse.
  std::int64_t residue(const Element& g, int level) const {
    if (level >= 62) throw TooLarge("affine_unit: level too deep for 64-bit residues");
    std::int64_t mod2 = std::int64_t{1} << level;
    std::int64_t num = ((g.num % mod2) + mod2) % mod2;
    std::int64_t inv5 = mod_inverse_pow5(g.e5, mod2);
    return static_cast<std::int64_t>((static_cast<__int128>(num) * inv5) % mod2);
  }

  nlohmann::json encode(const Element& g) const { return {g.num, g.e5, g.eps, g.m}; }

  Element decode(const nlohmann::json& j) const {
    return {j.at(0).get<std::int64_t>(), j.at(1).get<std::int32_t>(),
            j.at(2).get<std::uint8_t>(), j.at(3).get<std::int64_t>()};
  }

  nlohmann::json params() const { return nlohmann::json::object(); }

 private:
  static std::int64_t add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw TooLarge("affine_unit: overflow");
    return r;
  }

  static std::int64_t mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw TooLarge("affine_unit: overflow");
    return r;
  }

  static std::int64_t ipow5(int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r = mul(r, 5);
    return r;
  }

  // (num / 5^e5) * (-1)^eps 5^m as an unnormalized rational.
  static Element scale_translation(std::int64_t num, std::int32_t e5, std::uint8_t eps,
                                   std::int64_t m) {
    if (m > 1 << 20 || m < -(1 << 20)) throw TooLarge("affine_unit: exponent overflow");
    Element r{num, e5, 0, 0};
    if (m >= 0)
      r.num = mul(r.num, ipow5(static_cast<int>(m)));
    else
      r.e5 += static_cast<std::int32_t>(-m);
    if (eps) r.num = -r.num;
    return r;
  }

  static std::pair<std::int64_t, std::int32_t> add_rat(std::int64_t n1, std::int32_t e1,
                                                       std::int64_t n2, std::int32_t e2) {
    std::int32_t e = std::max(e1, e2);
    return {add(mul(n1, ipow5(e - e1)), mul(n2, ipow5(e - e2))), e};
  }

  static Element normalize(Element g) {
    if (g.num == 0) {
      g.e5 = 0;
      return g;
    }
    while (g.e5 > 0 && g.num % 5 == 0) {
      g.num /= 5;
      --g.e5;
    }
    return g;
  }

  // Inverse of 5^e modulo a power of two, by Newton lifting; all arithmetic
  // wraps mod 2^128, a multiple of the modulus, then masks down.
  static std::int64_t mod_inverse_pow5(std::int32_t e, std::int64_t mod2) {
    if (mod2 == 1) return 0;
    const unsigned __int128 mask = static_cast<unsigned __int128>(mod2) - 1;
    unsigned __int128 p = 1;
    for (std::int32_t i = 0; i < e; ++i) p = (p * 5) & mask;
    unsigned __int128 inv = 1;  // x_{n+1} = x_n (2 - p x_n) doubles precision
    for (int it = 0; it < 7; ++it) inv = (inv * (2 - p * inv)) & mask;
    return static_cast<std::int64_t>(inv);
  }

  friend class AffineUnitTestPeek;
};

}  // namespace renormlab
