#pragma once

#include <future>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "renormlab/backends.hpp"
#include "renormlab/bsgs.hpp"
#include "renormlab/errors.hpp"
#include "renormlab/perm.hpp"

namespace renormlab {

// One finite floor of the tower: the coset space of the level subgroup,
// with the generator action and the projection one level down.
template <class B>
struct LevelAction {
  int level = 0;
  Point size = 0;
  std::vector<typename B::Element> representatives;  // index 0 = identity coset
  std::vector<Permutation> generator_perms;          // one per backend generator
  std::vector<Point> projection;                     // to level-1 indices; empty at level 0
};

// Token -> index lookup for one built level, with element-to-point and
// element-to-permutation evaluation.
template <class B>
class TokenIndex {
 public:
  TokenIndex(const B& backend, std::shared_ptr<const LevelAction<B>> level)
      : backend_(backend), level_(std::move(level)) {
    map_ = std::make_shared<std::unordered_map<std::string, Point>>();
    map_->reserve(level_->size * 2);
    for (Point i = 0; i < level_->size; ++i)
      map_->emplace(backend_.coset_token(level_->representatives[i], level_->level), i);
  }

  const LevelAction<B>& level() const { return *level_; }

  Point index_of(const typename B::Element& g) const {
    auto it = map_->find(backend_.coset_token(g, level_->level));
    if (it == map_->end())
      throw Error("internal: element token missing from level " +
                  std::to_string(level_->level));
    return it->second;
  }

  Permutation perm_of(const typename B::Element& g) const {
    std::vector<Point> img(level_->size);
    for (Point j = 0; j < level_->size; ++j)
      img[j] = index_of(backend_.multiply(g, level_->representatives[j]));
    return Permutation(std::move(img), Permutation::Unchecked{});
  }

 private:
  B backend_;
  std::shared_ptr<const LevelAction<B>> level_;
  std::shared_ptr<std::unordered_map<std::string, Point>> map_;
};

// Breadth-first closure of the identity coset under the generators (then
// their inverses), in fixed order; representatives are the first-discovered
// elements, which makes every downstream index reproducible.
template <class B>
LevelAction<B> build_level(const ChainSpec<B>& spec, int level,
                           const LevelAction<B>* previous = nullptr) {
  spec.validate();
  if (level < 0 || level > spec.max_level)
    throw LevelBudgetExceeded("level " + std::to_string(level) + " outside max_level " +
                              std::to_string(spec.max_level));
  using Element = typename B::Element;
  const B& bk = spec.backend;

  std::vector<Element> letters = bk.generators();
  for (const Element& g : bk.generators()) letters.push_back(bk.invert(g));

  LevelAction<B> out;
  out.level = level;
  std::unordered_map<std::string, Point> index;
  out.representatives.push_back(bk.identity());
  index.emplace(bk.coset_token(bk.identity(), level), 0);

  for (std::size_t i = 0; i < out.representatives.size(); ++i) {
    Element rep = out.representatives[i];
    for (const Element& l : letters) {
      Element next = bk.multiply(l, rep);
      std::string t = bk.coset_token(next, level);
      auto [it, fresh] = index.emplace(std::move(t), static_cast<Point>(out.representatives.size()));
      if (fresh) {
        if (out.representatives.size() >= spec.max_index)
          throw IndexBudgetExceeded("level " + std::to_string(level) +
                                    " exceeds max_index=" + std::to_string(spec.max_index));
        out.representatives.push_back(std::move(next));
      }
    }
  }
  out.size = static_cast<Point>(out.representatives.size());

  for (const Element& g : bk.generators()) {
    std::vector<Point> img(out.size);
    for (Point j = 0; j < out.size; ++j)
      img[j] = index.at(bk.coset_token(bk.multiply(g, out.representatives[j]), level));
    out.generator_perms.emplace_back(std::move(img));
  }

  if (previous != nullptr) {
    if (previous->level != level - 1)
      throw Error("internal: projection target must be one level down");
    std::unordered_map<std::string, Point> prev_index;
    prev_index.reserve(previous->size * 2);
    for (Point i = 0; i < previous->size; ++i)
      prev_index.emplace(bk.coset_token(previous->representatives[i], previous->level), i);
    out.projection.resize(out.size);
    for (Point i = 0; i < out.size; ++i)
      out.projection[i] =
          prev_index.at(bk.coset_token(out.representatives[i], previous->level));
    if (out.size % previous->size != 0)
      throw Error("internal: level sizes do not divide");
  }
  return out;
}

// The faithful finite quotient acting on the coset space: the group
// generated by the level's generator permutations.  For endomorphism chains
// on coordinate backends the basepoint stabilizer is generated exactly by
// the images of the iterated endomorphism, so the first stabilizer level
// comes for free and only the (small) chain below it is computed.
template <class B>
PermGroupBSGS quotient_group(const ChainSpec<B>& spec,
                             std::shared_ptr<const LevelAction<B>> level) {
  const Point n = level->size;
  if (n == 1 || level->generator_perms.empty())
    return PermGroupBSGS::build({}, n);

  if (spec.kind == ChainKind::kRenormalization && !B::kActsOnTree) {
    TokenIndex<B> index(spec.backend, level);
    const B bk = spec.backend;
    auto transversal = [index, bk, level](Point x) {
      const auto& reps = level->representatives;
      std::vector<Point> img(reps.size());
      for (Point j = 0; j < reps.size(); ++j)
        img[j] = index.index_of(bk.multiply(reps[x], reps[j]));
      return Permutation(std::move(img), Permutation::Unchecked{});
    };
    std::vector<Permutation> stabilizer_seed;
    for (const auto& g : bk.generators()) {
      auto image = g;
      for (int l = 0; l < level->level; ++l) image = bk.apply_phi(image);
      stabilizer_seed.push_back(index.perm_of(image));
    }
    return PermGroupBSGS::transitive_with_known_stabilizer(n, level->generator_perms,
                                                           transversal, stabilizer_seed);
  }
  return PermGroupBSGS::build(level->generator_perms, n);
}

// The isotropy group of the identity coset inside the faithful quotient.
inline PermGroupBSGS discriminant_level(const PermGroupBSGS& quotient) {
  return quotient.stabilizer_of(0);
}

// Images of the upper discriminant's strong generators one level down.
// Every image must fix the basepoint and land in the lower discriminant;
// anything else means the tower is inconsistent.
inline std::vector<std::pair<Permutation, Permutation>> bonding_map(
    const PermGroupBSGS& disc_upper, const std::vector<Point>& projection,
    Point lower_size, const PermGroupBSGS& disc_lower) {
  std::vector<std::pair<Permutation, Permutation>> out;
  for (const Permutation& g : disc_upper.strong_generators()) {
    Permutation img = block_projection(g, projection, lower_size);
    if (img(0) != 0)
      throw NotBlockCompatible("bonding image moves the basepoint");
    if (!disc_lower.contains(img))
      throw NotBlockCompatible("bonding image escapes the lower discriminant");
    out.emplace_back(g, std::move(img));
  }
  return out;
}

// The injection of level-l cosets into level-(l+1) cosets induced by the
// endomorphism.
template <class B>
std::vector<Point> shift_map(const ChainSpec<B>& spec, const LevelAction<B>& from,
                             const TokenIndex<B>& to) {
  if (spec.kind != ChainKind::kRenormalization)
    throw UnsupportedForChainKind("shift map needs an endomorphism chain");
  if (to.level().level != from.level + 1)
    throw Error("internal: shift map must go one level up");
  std::vector<Point> s(from.size);
  for (Point i = 0; i < from.size; ++i)
    s[i] = to.index_of(spec.backend.apply_phi(from.representatives[i]));
  return s;
}

// A fully analyzed tower: level actions plus the quotient and discriminant
// groups, with abelian shapes where the discriminant is small enough to
// enumerate.
template <class B>
struct TowerAnalysis {
  ChainSpec<B> spec;
  std::vector<std::shared_ptr<const LevelAction<B>>> levels;  // 0..top
  std::vector<PermGroupBSGS> quotients;
  std::vector<PermGroupBSGS> discriminants;
  std::vector<AbelianShape> shapes;
  std::vector<bool> shape_known;

  int top_level() const { return static_cast<int>(levels.size()) - 1; }
  const LevelAction<B>& level(int l) const { return *levels[l]; }

  // Composition of projection arrays from `from` down to `to`.
  Permutation project_perm(const Permutation& p, int from, int to) const {
    Permutation cur = p;
    for (int l = from; l > to; --l)
      cur = block_projection(cur, levels[l]->projection, levels[l - 1]->size);
    return cur;
  }

  // Points of level `at` lying over the basepoint of level `to`.
  std::vector<Point> basepoint_fiber(int at, int to) const {
    std::vector<Point> result;
    for (Point i = 0; i < levels[at]->size; ++i) {
      Point cur = i;
      for (int l = at; l > to; --l) cur = levels[l]->projection[cur];
      if (cur == 0) result.push_back(i);
    }
    return result;
  }
};

// Group data for already-built levels; the per-level computations are
// independent and may run concurrently.
template <class B>
TowerAnalysis<B> analyze_levels(const ChainSpec<B>& spec,
                                std::vector<std::shared_ptr<const LevelAction<B>>> levels,
                                bool parallel = true,
                                std::uint64_t shape_budget = 1'000'000) {
  spec.validate();
  TowerAnalysis<B> t{.spec = spec};
  t.levels = std::move(levels);

  const int n = static_cast<int>(t.levels.size());
  t.quotients.resize(n);
  t.discriminants.resize(n);
  t.shapes.resize(n);
  t.shape_known.assign(n, false);

  auto level_job = [&t, &spec, shape_budget](int l) {
    t.quotients[l] = quotient_group(spec, t.levels[l]);
    t.discriminants[l] = discriminant_level(t.quotients[l]);
    const PermGroupBSGS& d = t.discriminants[l];
    if (d.order() <= shape_budget) {
      try {
        t.shapes[l] = abelian_invariants(d.strong_generators(), d.degree(), shape_budget);
        t.shape_known[l] = true;
      } catch (const TooLarge&) {
        t.shape_known[l] = false;
      }
    }
  };

  if (parallel) {
    std::vector<std::future<void>> jobs;
    for (int l = 0; l < n; ++l)
      jobs.push_back(std::async(std::launch::async, level_job, l));
    for (auto& j : jobs) j.get();
  } else {
    for (int l = 0; l < n; ++l) level_job(l);
  }
  return t;
}

// Builds levels 0..up_to sequentially, then analyzes them.
template <class B>
TowerAnalysis<B> analyze_tower(const ChainSpec<B>& spec, int up_to, bool parallel = true,
                               std::uint64_t shape_budget = 1'000'000) {
  spec.validate();
  std::vector<std::shared_ptr<const LevelAction<B>>> levels;
  for (int l = 0; l <= up_to; ++l) {
    const LevelAction<B>* prev = l > 0 ? levels.back().get() : nullptr;
    levels.push_back(std::make_shared<const LevelAction<B>>(build_level(spec, l, prev)));
  }
  return analyze_levels(spec, std::move(levels), parallel, shape_budget);
}

}  // namespace renormlab
