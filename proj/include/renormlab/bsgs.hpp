#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "renormlab/bigint.hpp"
#include "renormlab/errors.hpp"
#include "renormlab/perm.hpp"

namespace renormlab {

// A finite permutation group held as a base and strong generating set.
//
// The construction is deterministic: base points are the smallest moved
// points of the generators that create each level, orbits are explored
// breadth-first with generators in index order, and Schreier generators are
// processed in orbit-discovery x generator-index order.  Rebuilding from the
// same generator list therefore reproduces the identical structure.
class PermGroupBSGS {
 public:
  PermGroupBSGS() = default;

  static PermGroupBSGS build(const std::vector<Permutation>& generators, Point degree) {
    PermGroupBSGS g(degree);
    for (const Permutation& gen : generators) {
      if (gen.degree() != degree)
        throw DegreeMismatch("bsgs_build: generator degree " + std::to_string(gen.degree()) +
                             " != " + std::to_string(degree));
      if (!gen.is_identity()) g.insert_generator(gen);
    }
    for (std::size_t i = g.levels_.size(); i-- > 0;) g.schreier_sims(i);
    g.recompute_order();
    return g;
  }

  // A transitive group on the full point set whose basepoint stabilizer is
  // known by construction.  `transversal` maps a point x to a group element
  // (as a permutation) carrying point 0 to x; `stabilizer_generators` must
  // generate the full stabilizer of 0.  The stabilizer chain below the first
  // level is built generically.
  static PermGroupBSGS transitive_with_known_stabilizer(
      Point degree, std::vector<Permutation> group_generators,
      std::function<Permutation(Point)> transversal,
      const std::vector<Permutation>& stabilizer_generators) {
    PermGroupBSGS sub = build(stabilizer_generators, degree);

    PermGroupBSGS g(degree);
    g.sgens_ = std::move(group_generators);
    Level root;
    root.base = 0;
    root.mode = Level::kExternal;
    root.orbit.resize(degree);
    std::iota(root.orbit.begin(), root.orbit.end(), Point{0});
    root.pos.resize(degree);
    std::iota(root.pos.begin(), root.pos.end(), Point{0});
    root.external = std::move(transversal);
    g.levels_.push_back(std::move(root));

    for (Level& lvl : sub.levels_) {
      for (std::size_t& gi : lvl.gen_idx) gi += g.sgens_.size();
      g.levels_.push_back(std::move(lvl));
    }
    g.sgens_.insert(g.sgens_.end(), sub.sgens_.begin(), sub.sgens_.end());
    g.recompute_order();
    return g;
  }

  Point degree() const { return degree_; }

  const BigInt& order() const { return order_; }

  bool trivial() const { return order_ == 1; }

  std::vector<Point> base() const {
    std::vector<Point> b;
    b.reserve(levels_.size());
    for (const Level& lvl : levels_) b.push_back(lvl.base);
    return b;
  }

  const std::vector<Permutation>& strong_generators() const { return sgens_; }

  std::size_t num_levels() const { return levels_.size(); }
  Point base_at(std::size_t i) const { return levels_[i].base; }
  const std::vector<Point>& orbit_at(std::size_t i) const { return levels_[i].orbit; }

  bool contains(const Permutation& p) const {
    if (p.degree() != degree_)
      throw DegreeMismatch("membership: degree " + std::to_string(p.degree()) + " != " +
                           std::to_string(degree_));
    auto [residue, level] = strip(p, 0);
    return level == levels_.size() && residue.is_identity();
  }

  // The subgroup fixing x.  When x is the first base point the stabilizer is
  // just the tail of the chain; otherwise Schreier's lemma is applied to the
  // orbit of x.
  PermGroupBSGS stabilizer_of(Point x) const {
    if (x >= degree_) throw Error("point_stabilizer: point out of range");
    if (!levels_.empty() && levels_[0].base == x) return chain_suffix();
    if (levels_.empty()) return PermGroupBSGS(degree_);

    const std::vector<Permutation> gens = generators_for_orbits();
    std::vector<Point> orbit{x};
    std::vector<Point> pos(degree_, kNoPos);
    pos[x] = 0;
    std::vector<Permutation> reps{Permutation::identity(degree_)};
    for (std::size_t oi = 0; oi < orbit.size(); ++oi) {
      for (const Permutation& g : gens) {
        Point y = g(orbit[oi]);
        if (pos[y] == kNoPos) {
          pos[y] = static_cast<Point>(orbit.size());
          orbit.push_back(y);
          reps.push_back(compose(g, reps[oi]));
        }
      }
    }
    std::vector<Permutation> schreier;
    std::unordered_set<Permutation, PermutationHash> seen;
    for (std::size_t oi = 0; oi < orbit.size(); ++oi) {
      for (const Permutation& g : gens) {
        Point y = g(orbit[oi]);
        Permutation s = compose(reps[pos[y]].inverse(), compose(g, reps[oi]));
        if (!s.is_identity() && seen.insert(s).second) schreier.push_back(s);
      }
    }
    return build(schreier, degree_);
  }

 private:
  static constexpr Point kNoPos = ~Point{0};

  struct Level {
    enum Mode { kExplicit, kSchreierVector, kExternal };
    Point base = 0;
    Mode mode = kExplicit;
    std::vector<std::size_t> gen_idx;      // indices into sgens_
    std::vector<Point> orbit;              // discovery order, orbit[0] == base
    std::vector<Point> pos;                // degree-sized, kNoPos outside orbit
    std::vector<Permutation> transversal;  // kExplicit: parallel to orbit
    std::vector<std::size_t> parent_gen;   // kSchreierVector: parallel to orbit
    std::vector<Point> parent_pt;          //   "
    std::function<Permutation(Point)> external;
  };

  explicit PermGroupBSGS(Point degree) : degree_(degree) {}

  // Transversal element carrying the level's base to x.
  Permutation u(const Level& lvl, Point x) const {
    switch (lvl.mode) {
      case Level::kExternal:
        return lvl.external(x);
      case Level::kExplicit:
        return lvl.transversal[lvl.pos[x]];
      case Level::kSchreierVector: {
        std::vector<std::size_t> path;
        Point cur = x;
        while (cur != lvl.base) {
          Point p = lvl.pos[cur];
          path.push_back(lvl.parent_gen[p]);
          cur = lvl.parent_pt[p];
        }
        Permutation r = Permutation::identity(degree_);
        for (std::size_t i = path.size(); i-- > 0;) r = compose(sgens_[path[i]], r);
        return r;
      }
    }
    throw Error("unreachable");
  }

  void recompute_orbit(std::size_t li) {
    // First pass: orbit size only, to pick the transversal storage mode.
    Level& lvl = levels_[li];
    lvl.orbit.assign(1, lvl.base);
    lvl.pos.assign(degree_, kNoPos);
    lvl.pos[lvl.base] = 0;
    for (std::size_t oi = 0; oi < lvl.orbit.size(); ++oi) {
      for (std::size_t gi : lvl.gen_idx) {
        Point y = sgens_[gi](lvl.orbit[oi]);
        if (lvl.pos[y] == kNoPos) {
          lvl.pos[y] = static_cast<Point>(lvl.orbit.size());
          lvl.orbit.push_back(y);
        }
      }
    }

    // Explicit transversal permutations while they fit in memory, parent
    // pointers (walked on demand) otherwise.
    constexpr std::uint64_t kExplicitBudget = 60'000'000;
    lvl.mode = static_cast<std::uint64_t>(lvl.orbit.size()) * degree_ <= kExplicitBudget
                   ? Level::kExplicit
                   : Level::kSchreierVector;
    lvl.orbit.assign(1, lvl.base);
    lvl.pos.assign(degree_, kNoPos);
    lvl.pos[lvl.base] = 0;
    lvl.transversal.clear();
    lvl.parent_gen.assign(1, 0);
    lvl.parent_pt.assign(1, lvl.base);
    if (lvl.mode == Level::kExplicit) lvl.transversal.push_back(Permutation::identity(degree_));

    for (std::size_t oi = 0; oi < lvl.orbit.size(); ++oi) {
      Point x = lvl.orbit[oi];
      for (std::size_t gi : lvl.gen_idx) {
        Point y = sgens_[gi](x);
        if (lvl.pos[y] != kNoPos) continue;
        lvl.pos[y] = static_cast<Point>(lvl.orbit.size());
        lvl.orbit.push_back(y);
        if (lvl.mode == Level::kExplicit)
          lvl.transversal.push_back(compose(sgens_[gi], lvl.transversal[oi]));
        else {
          lvl.parent_gen.push_back(gi);
          lvl.parent_pt.push_back(x);
        }
      }
    }
  }

  // Sifts p through levels [from, end); returns the residue and the level at
  // which sifting stopped (levels_.size() if it ran through the whole chain).
  std::pair<Permutation, std::size_t> strip(Permutation p, std::size_t from) const {
    for (std::size_t i = from; i < levels_.size(); ++i) {
      const Level& lvl = levels_[i];
      Point x = p(lvl.base);
      if (x == lvl.base) continue;
      if (lvl.pos.empty() || lvl.pos[x] == kNoPos) return {std::move(p), i};
      p = compose(u(lvl, x).inverse(), p);
    }
    return {std::move(p), levels_.size()};
  }

  void insert_generator(const Permutation& g) {
    std::size_t idx = sgens_.size();
    sgens_.push_back(g);
    std::size_t i = 0;
    while (true) {
      if (i == levels_.size()) {
        Level lvl;
        lvl.base = *g.smallest_moved_point();
        levels_.push_back(std::move(lvl));
      }
      levels_[i].gen_idx.push_back(idx);
      recompute_orbit(i);
      if (g(levels_[i].base) != levels_[i].base) break;
      ++i;
    }
  }

  // Ensures the chain is complete from level i down, assuming levels > i are
  // already complete: every Schreier generator of level i must sift to the
  // identity through the rest of the chain.
  void schreier_sims(std::size_t i) {
    // Note: processing level i never modifies level i itself (only deeper
    // levels), so its orbit and generator list are stable throughout.  All
    // level access is by index because levels_ may reallocate.
    for (std::size_t oi = 0; oi < levels_[i].orbit.size(); ++oi) {
      Point x = levels_[i].orbit[oi];
      Permutation ux = u(levels_[i], x);
      for (std::size_t gii = 0; gii < levels_[i].gen_idx.size(); ++gii) {
        const Permutation g = sgens_[levels_[i].gen_idx[gii]];
        Point y = g(x);
        Permutation s = compose(u(levels_[i], y).inverse(), compose(g, ux));
        if (s.is_identity()) continue;
        auto [h, j] = strip(std::move(s), i + 1);
        if (h.is_identity()) continue;
        if (j == levels_.size()) {
          Level fresh;
          fresh.base = *h.smallest_moved_point();
          levels_.push_back(std::move(fresh));
        }
        std::size_t idx = sgens_.size();
        sgens_.push_back(std::move(h));
        for (std::size_t k = i + 1; k <= j; ++k) {
          levels_[k].gen_idx.push_back(idx);
          recompute_orbit(k);
        }
        for (std::size_t k = j; k > i; --k) schreier_sims(k);
      }
    }
  }

  void recompute_order() {
    order_ = 1;
    for (const Level& lvl : levels_) order_ *= static_cast<std::uint64_t>(lvl.orbit.size());
  }

  // Generators usable for orbit computations on the whole group.
  std::vector<Permutation> generators_for_orbits() const {
    if (levels_.empty()) return {};
    std::vector<Permutation> gens;
    if (levels_[0].mode == Level::kExternal) {
      gens = sgens_;  // external root keeps the original generator list
    } else {
      for (std::size_t gi : levels_[0].gen_idx) gens.push_back(sgens_[gi]);
    }
    return gens;
  }

  PermGroupBSGS chain_suffix() const {
    PermGroupBSGS g(degree_);
    if (levels_.size() <= 1) return g;
    std::vector<std::size_t> remap(sgens_.size(), static_cast<std::size_t>(-1));
    for (std::size_t li = 1; li < levels_.size(); ++li) {
      Level lvl = levels_[li];
      for (std::size_t& gi : lvl.gen_idx) {
        if (remap[gi] == static_cast<std::size_t>(-1)) {
          remap[gi] = g.sgens_.size();
          g.sgens_.push_back(sgens_[gi]);
        }
        gi = remap[gi];
      }
      g.levels_.push_back(std::move(lvl));
    }
    g.recompute_order();
    return g;
  }

  Point degree_ = 0;
  std::vector<Permutation> sgens_;
  std::vector<Level> levels_;
  BigInt order_ = 1;
};

inline PermGroupBSGS bsgs_build(const std::vector<Permutation>& generators, Point degree) {
  return PermGroupBSGS::build(generators, degree);
}

inline bool membership(const PermGroupBSGS& g, const Permutation& p) { return g.contains(p); }

inline PermGroupBSGS point_stabilizer(const PermGroupBSGS& g, Point x) {
  return g.stabilizer_of(x);
}

// Isomorphism type of a finite abelian group: invariant factors d1 | d2 | ... | dr.
struct AbelianShape {
  bool abelian = true;
  std::vector<std::uint64_t> invariant_factors;  // empty means trivial

  static AbelianShape non_abelian() { return AbelianShape{false, {}}; }

  friend bool operator==(const AbelianShape&, const AbelianShape&) = default;

  std::string str() const {
    if (!abelian) return "NonAbelian";
    if (invariant_factors.empty()) return "[]";
    std::string s = "[";
    for (std::size_t i = 0; i < invariant_factors.size(); ++i) {
      if (i) s += ", ";
      s += std::to_string(invariant_factors[i]);
    }
    return s + "]";
  }
};

namespace detail {

inline std::uint64_t perm_order(const Permutation& p) {
  std::vector<bool> seen(p.degree(), false);
  std::uint64_t ord = 1;
  for (Point i = 0; i < p.degree(); ++i) {
    if (seen[i]) continue;
    std::uint64_t len = 0;
    Point cur = i;
    while (!seen[cur]) {
      seen[cur] = true;
      cur = p(cur);
      ++len;
    }
    ord = std::lcm(ord, len);
  }
  return ord;
}

// `elements` must be a full group, identity first.
inline std::vector<std::uint64_t> invariant_factors_of_group(
    const std::vector<Permutation>& elements) {
  if (elements.size() <= 1) return {};

  std::uint64_t exponent = 1;
  std::size_t max_idx = 0;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    std::uint64_t o = perm_order(elements[i]);
    if (o > exponent) {
      exponent = o;
      max_idx = i;
    }
  }
  const Permutation& g = elements[max_idx];

  std::unordered_map<Permutation, std::size_t, PermutationHash> index;
  for (std::size_t i = 0; i < elements.size(); ++i) index.emplace(elements[i], i);

  // Partition into cosets h<g>; canonical representative = smallest index.
  std::vector<std::size_t> coset_of(elements.size(), static_cast<std::size_t>(-1));
  std::vector<std::size_t> coset_rep;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (coset_of[i] != static_cast<std::size_t>(-1)) continue;
    std::size_t cid = coset_rep.size();
    coset_rep.push_back(i);
    Permutation cur = elements[i];
    while (true) {
      coset_of[index.at(cur)] = cid;
      cur = compose(cur, g);
      if (index.at(cur) == i) break;
    }
  }

  std::size_t m = coset_rep.size();
  if (m == 1) return {exponent};
  if (static_cast<std::uint64_t>(m) * m > 50'000'000)
    throw TooLarge("abelian_invariants: quotient of order " + std::to_string(m) +
                   " exceeds the enumeration budget");

  // Regular representation of the quotient on its cosets.
  std::vector<Permutation> quotient;
  quotient.reserve(m);
  for (std::size_t c = 0; c < m; ++c) {
    std::vector<Point> img(m);
    for (std::size_t d = 0; d < m; ++d) {
      Permutation prod = compose(elements[coset_rep[c]], elements[coset_rep[d]]);
      img[d] = static_cast<Point>(coset_of[index.at(prod)]);
    }
    quotient.emplace_back(std::move(img));
  }

  std::vector<std::uint64_t> factors = invariant_factors_of_group(quotient);
  factors.push_back(exponent);
  return factors;
}

}  // namespace detail

// Identifies a finite abelian permutation group by exhaustive enumeration.
// Only intended for small groups; `max_order` bounds the closure.
inline AbelianShape abelian_invariants(const std::vector<Permutation>& generators,
                                       Point degree, std::uint64_t max_order = 1'000'000) {
  for (std::size_t i = 0; i < generators.size(); ++i)
    for (std::size_t j = i + 1; j < generators.size(); ++j)
      if (!(compose(generators[i], generators[j]) == compose(generators[j], generators[i])))
        return AbelianShape::non_abelian();

  std::vector<Permutation> elements{Permutation::identity(degree)};
  std::unordered_set<Permutation, PermutationHash> seen{elements[0]};
  for (std::size_t qi = 0; qi < elements.size(); ++qi) {
    for (const Permutation& g : generators) {
      if (g.degree() != degree) throw DegreeMismatch("abelian_invariants: generator degree");
      Permutation next = compose(elements[qi], g);
      if (seen.insert(next).second) {
        elements.push_back(std::move(next));
        if (elements.size() > max_order ||
            static_cast<std::uint64_t>(elements.size()) * degree > 200'000'000)
          throw TooLarge("abelian_invariants: group exceeds the enumeration budget");
      }
    }
  }
  return AbelianShape{true, detail::invariant_factors_of_group(elements)};
}

}  // namespace renormlab
