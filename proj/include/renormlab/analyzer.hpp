#pragma once

#include <deque>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "renormlab/bigint.hpp"
#include "renormlab/chain.hpp"

namespace renormlab {

// ---------------------------------------------------------------------------
// Stable images and the discriminant verdict
// ---------------------------------------------------------------------------

struct StableImage {
  int level = 0;
  std::vector<BigInt> orders;  // |S^(k)| for k = 0..window, descending
  PermGroupBSGS image;         // S^(window)
  bool stabilized = false;
};

// S^(k) is the image of the discriminant k levels up, pushed down through
// the composed bonding maps.  The sequence is descending in k; it counts as
// stabilized when the last two images agree, or terminally when the deepest
// image is already trivial (a descending chain that reaches the trivial
// group stays there).
template <class B>
StableImage stable_image(const TowerAnalysis<B>& t, int level, int window) {
  if (window < 1) throw InsufficientDepth("stable_image: window must be at least 1");
  if (level < 1 || level + window > t.top_level())
    throw InsufficientDepth("stable_image: needs levels up to " +
                            std::to_string(level + window) + ", built " +
                            std::to_string(t.top_level()));
  StableImage out;
  out.level = level;
  BigInt prev_order = 0;
  for (int k = 0; k <= window; ++k) {
    std::vector<Permutation> gens;
    for (const Permutation& g : t.discriminants[level + k].strong_generators())
      gens.push_back(t.project_perm(g, level + k, level));
    PermGroupBSGS s = bsgs_build(gens, t.level(level).size);
    out.orders.push_back(s.order());
    if (k == window - 1) prev_order = s.order();
    if (k == window) out.image = std::move(s);
  }
  out.stabilized = out.image.trivial() || prev_order == out.image.order();
  return out;
}

enum class VerdictKind { kTrivialInLimit, kFiniteStable, kGrowing, kUndetermined };

inline std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::kTrivialInLimit: return "trivial_in_limit";
    case VerdictKind::kFiniteStable: return "finite_stable";
    case VerdictKind::kGrowing: return "growing";
    case VerdictKind::kUndetermined: return "undetermined";
  }
  return "undetermined";
}

// A classification computed from finitely many levels.  It is evidence at
// the recorded depth, not a limit theorem, and deeper reruns may refine an
// undetermined answer.
struct Verdict {
  VerdictKind kind = VerdictKind::kUndetermined;
  BigInt stable_order = 0;  // meaningful for kFiniteStable
  int evidence_depth = 0;
  int window = 0;
  std::vector<BigInt> discriminant_orders;       // levels 1..L
  std::vector<std::vector<BigInt>> stable_orders;  // per window level l = 1..L-W
  std::vector<bool> stabilized;                    // parallel to stable_orders
  std::vector<bool> bonding_surjective;            // levels 1..L-1
};

namespace detail {

// Image of D_{level+1} inside D_level as a group.
template <class B>
PermGroupBSGS one_step_image(const TowerAnalysis<B>& t, int level) {
  std::vector<Permutation> gens;
  for (const Permutation& g : t.discriminants[level + 1].strong_generators())
    gens.push_back(t.project_perm(g, level + 1, level));
  return bsgs_build(gens, t.level(level).size);
}

}  // namespace detail

// The trichotomy rule over the window of levels where a full stable image
// is available (l = 1 .. L-W):
//   - every stable image trivial             -> TrivialInLimit
//   - stabilized, constant order, bondings
//     restricting to bijections              -> FiniteStable(order)
//   - |D_l| strictly increasing and all
//     bondings surjective                    -> Growing
//   - anything else                          -> Undetermined
template <class B>
Verdict classify_discriminant(const TowerAnalysis<B>& t, int window) {
  const int top = t.top_level();
  if (window < 1) throw InsufficientDepth("classify: window must be at least 1");
  if (top < window + 2)
    throw InsufficientDepth("classify: needs at least " + std::to_string(window + 2) +
                            " levels, built " + std::to_string(top));

  Verdict v;
  v.window = window;
  v.evidence_depth = top;
  for (int l = 1; l <= top; ++l) v.discriminant_orders.push_back(t.discriminants[l].order());

  std::vector<StableImage> images;
  for (int l = 1; l + window <= top; ++l) {
    images.push_back(stable_image(t, l, window));
    v.stable_orders.push_back(images.back().orders);
    v.stabilized.push_back(images.back().stabilized);
  }

  std::vector<PermGroupBSGS> one_step;
  for (int l = 1; l < top; ++l) {
    one_step.push_back(detail::one_step_image(t, l));
    v.bonding_surjective.push_back(one_step.back().order() == t.discriminants[l].order());
  }

  bool all_trivial = true, all_stabilized = true;
  for (const StableImage& s : images) {
    all_trivial = all_trivial && s.image.trivial();
    all_stabilized = all_stabilized && s.stabilized;
  }
  if (all_trivial && all_stabilized) {
    v.kind = VerdictKind::kTrivialInLimit;
    return v;
  }

  bool constant_order = true;
  for (const StableImage& s : images)
    constant_order = constant_order && s.image.order() == images.front().image.order();
  if (all_stabilized && constant_order) {
    // The bonding must carry each stable image bijectively onto the one
    // below it.
    bool bijections = true;
    for (std::size_t i = 0; i + 1 < images.size() && bijections; ++i) {
      const PermGroupBSGS& upper = images[i + 1].image;
      std::vector<Permutation> projected;
      for (const Permutation& g : upper.strong_generators())
        projected.push_back(t.project_perm(g, images[i + 1].level, images[i].level));
      PermGroupBSGS restricted = bsgs_build(projected, t.level(images[i].level).size);
      bijections = restricted.order() == upper.order() &&
                   restricted.order() == images[i].image.order();
      for (const Permutation& g : projected)
        bijections = bijections && images[i].image.contains(g);
    }
    if (bijections) {
      v.kind = VerdictKind::kFiniteStable;
      v.stable_order = images.front().image.order();
      return v;
    }
  }

  bool increasing = true;
  for (std::size_t i = 0; i + 1 < v.discriminant_orders.size(); ++i)
    increasing = increasing && v.discriminant_orders[i] < v.discriminant_orders[i + 1];
  bool all_surjective = true;
  for (bool s : v.bonding_surjective) all_surjective = all_surjective && s;
  if (increasing && all_surjective) {
    v.kind = VerdictKind::kGrowing;
    return v;
  }

  v.kind = VerdictKind::kUndetermined;
  return v;
}

// ---------------------------------------------------------------------------
// Word searches
// ---------------------------------------------------------------------------

namespace detail {

template <class B>
struct WordNode {
  typename B::Element element;
  std::vector<std::uint16_t> letters;  // 2*gen (+1 for the inverse letter)
};

// Breadth-first enumeration of freely reduced generator words, pruned by a
// caller-supplied equivalence key; `visit` sees exactly one node per key, in
// word order (length, then letter index).  Return false from visit to stop.
template <class B, class KeyFn, class VisitFn>
void word_bfs(const B& backend, int max_len, KeyFn&& key, VisitFn&& visit) {
  std::vector<typename B::Element> letter_elems;
  for (const auto& g : backend.generators()) {
    letter_elems.push_back(g);
    letter_elems.push_back(backend.invert(g));
  }
  std::deque<WordNode<B>> queue;
  std::unordered_set<std::string> seen;
  WordNode<B> root{backend.identity(), {}};
  seen.insert(key(root.element));
  if (!visit(root)) return;
  queue.push_back(std::move(root));
  while (!queue.empty()) {
    WordNode<B> node = std::move(queue.front());
    queue.pop_front();
    if (static_cast<int>(node.letters.size()) >= max_len) continue;
    for (std::uint16_t l = 0; l < letter_elems.size(); ++l) {
      if (!node.letters.empty() && (node.letters.back() ^ 1u) == l) continue;
      WordNode<B> next{backend.multiply(node.element, letter_elems[l]), node.letters};
      next.letters.push_back(l);
      if (!seen.insert(key(next.element)).second) continue;
      if (!visit(next)) return;
      queue.push_back(std::move(next));
    }
  }
}

template <class B>
std::string render_word(const B& backend, const std::vector<std::uint16_t>& letters) {
  if (letters.empty()) return "<identity>";
  auto names = backend.generator_names();
  std::string out;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i) out += " ";
    out += names[letters[i] / 2];
    if (letters[i] & 1) out += "^-1";
  }
  return out;
}

// Key capturing the element's permutation at one level: the images of the
// quotient group's base points determine the permutation uniquely.
template <class B>
auto perm_level_key(const B& backend, const TokenIndex<B>& index,
                    const std::vector<Point>& base) {
  return [&backend, &index, &base](const typename B::Element& g) {
    std::string k;
    for (Point b : base) {
      k += std::to_string(index.index_of(
          backend.multiply(g, index.level().representatives[b])));
      k += ",";
    }
    return k;
  };
}

// Exact element key for the coordinate backends; depth-stamped action key
// for tree words.
inline std::string element_key(const HeisenbergBackend&, const HeisenbergBackend::Element& g) {
  return std::to_string(g.x) + "," + std::to_string(g.y) + "," + std::to_string(g.z);
}
inline std::string element_key(const LatticeBackend&, const LatticeBackend::Element& g) {
  std::string k;
  for (auto c : g.v) k += std::to_string(c) + ",";
  k += "|";
  for (auto p : g.h) k += std::to_string(p) + ",";
  return k;
}
inline std::string element_key(const AffineUnitBackend&, const AffineUnitBackend::Element& g) {
  return std::to_string(g.num) + "/" + std::to_string(g.e5) + "," + std::to_string(g.eps) +
         "," + std::to_string(g.m);
}
inline std::string element_key(const WreathBackend& b, const WreathBackend::Element& g,
                               int depth) {
  // Concatenated images of every vertex at `depth`; identifies the element
  // up to that depth.
  std::string k;
  std::string v(static_cast<std::size_t>(depth), '0');
  while (true) {
    k += b.act(g, v);
    k += "|";
    int i = depth - 1;
    while (i >= 0 && v[i] == static_cast<char>('0' + b.arity() - 1)) v[i--] = '0';
    if (i < 0) break;
    ++v[i];
  }
  return k;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Quasi-analyticity witness search
// ---------------------------------------------------------------------------

struct QAWitness {
  std::string word;
  std::vector<std::uint16_t> letters;
  int level = 0;
  int cylinder_depth = 0;
  Point moved_point = 0;
};

struct QASearchResult {
  bool found = false;
  QAWitness witness;
  std::uint64_t classes_explored = 0;
};

// First reduced word (in length-then-letter order) whose level-L action
// fixes the basepoint cylinder of the given depth pointwise without being
// the identity on the whole level.  NoneFound is depth-stamped evidence of
// quasi-analyticity, not a proof.
template <class B>
QASearchResult qa_witness_search(const TowerAnalysis<B>& t, int level, int cylinder_depth,
                                 int word_bound) {
  if (level > t.top_level()) throw InsufficientDepth("qa search: level not built");
  if (cylinder_depth < 0 || cylinder_depth >= level)
    throw Error("qa search: cylinder depth must be below the working level");

  TokenIndex<B> index(t.spec.backend, t.levels[level]);
  const std::vector<Point> base = t.quotients[level].base();
  const std::vector<Point> fiber = t.basepoint_fiber(level, cylinder_depth);
  const Point n = t.level(level).size;
  const B& bk = t.spec.backend;

  QASearchResult result;
  auto visit = [&](const detail::WordNode<B>& node) {
    ++result.classes_explored;
    // Fixes the cylinder pointwise?
    for (Point x : fiber)
      if (index.index_of(bk.multiply(node.element, index.level().representatives[x])) != x)
        return true;  // keep searching
    // Moves some point outside it?
    for (Point x = 0; x < n; ++x) {
      if (index.index_of(bk.multiply(node.element, index.level().representatives[x])) != x) {
        result.found = true;
        result.witness = {detail::render_word(bk, node.letters), node.letters, level,
                          cylinder_depth, x};
        return false;
      }
    }
    return true;  // identity action; not a witness
  };
  detail::word_bfs(bk, word_bound, detail::perm_level_key(bk, index, base), visit);
  return result;
}

// Replays a witness and confirms its certificate.
template <class B>
bool validate_qa_witness(const TowerAnalysis<B>& t, const QAWitness& w) {
  TokenIndex<B> index(t.spec.backend, t.levels[w.level]);
  const B& bk = t.spec.backend;
  auto gens = bk.generators();
  auto g = bk.identity();
  for (std::uint16_t l : w.letters)
    g = bk.multiply(g, (l & 1) ? bk.invert(gens[l / 2]) : gens[l / 2]);
  Permutation p = index.perm_of(g);
  for (Point x : t.basepoint_fiber(w.level, w.cylinder_depth))
    if (p(x) != x) return false;
  return !p.is_identity() && p(w.moved_point) != w.moved_point;
}

// ---------------------------------------------------------------------------
// Contracting probe
// ---------------------------------------------------------------------------

struct ContractingProbe {
  std::string element;             // rendered input
  int max_iterate = 0;
  std::vector<std::optional<int>> first_trivial;  // per level 1..max_level
};

// For each level, the first iterate n with phi^n(g) acting trivially.
// Triviality is monotone down the tower, which the scan asserts.
template <class B>
ContractingProbe contracting_probe(const TowerAnalysis<B>& t, const typename B::Element& g,
                                   int max_level, int max_iterate) {
  if (t.spec.kind != ChainKind::kRenormalization)
    throw UnsupportedForChainKind("contracting probe needs an endomorphism chain");
  if (max_level > t.top_level()) throw InsufficientDepth("contracting probe: level not built");

  ContractingProbe out;
  out.max_iterate = max_iterate;
  out.first_trivial.assign(static_cast<std::size_t>(max_level), std::nullopt);

  std::vector<TokenIndex<B>> indices;
  for (int l = 1; l <= max_level; ++l) indices.emplace_back(t.spec.backend, t.levels[l]);

  auto trivial_at = [&](const typename B::Element& e, int l) {
    const auto& reps = t.level(l).representatives;
    const TokenIndex<B>& ix = indices[l - 1];
    for (Point x = 0; x < reps.size(); ++x)
      if (ix.index_of(t.spec.backend.multiply(e, reps[x])) != x) return false;
    return true;
  };

  typename B::Element cur = g;
  for (int n = 0; n <= max_iterate; ++n) {
    bool deeper_allowed = true;
    for (int l = 1; l <= max_level; ++l) {
      if (out.first_trivial[l - 1].has_value()) continue;
      if (deeper_allowed && trivial_at(cur, l)) {
        out.first_trivial[l - 1] = n;
      } else {
        // Nontrivial here implies nontrivial at every deeper level.
        deeper_allowed = false;
      }
    }
    bool done = true;
    for (auto& f : out.first_trivial) done = done && f.has_value();
    if (done) break;
    if (n < max_iterate) cur = t.spec.phi(cur);
  }

  for (std::size_t l = 0; l + 1 < out.first_trivial.size(); ++l)
    if (out.first_trivial[l + 1].has_value() &&
        (!out.first_trivial[l].has_value() ||
         *out.first_trivial[l] > *out.first_trivial[l + 1]))
      throw Error("internal: contracting probe lost monotonicity");
  return out;
}

// ---------------------------------------------------------------------------
// Kernel probe
// ---------------------------------------------------------------------------

struct KernelWord {
  std::string word;
  bool acts_trivially = false;  // candidate for the kernel's normal core
};

struct KernelProbe {
  int level = 0;
  int word_bound = 0;
  std::vector<KernelWord> words;  // nonidentity elements fixing the basepoint
};

// All short reduced words (one per element class) lying in the level
// subgroup: their action fixes the identity coset.  Words acting trivially
// on the whole level are flagged.
template <class B>
KernelProbe kernel_probe(const TowerAnalysis<B>& t, int level, int word_bound) {
  if (level > t.top_level()) throw InsufficientDepth("kernel probe: level not built");
  TokenIndex<B> index(t.spec.backend, t.levels[level]);
  const B& bk = t.spec.backend;
  const Point n = t.level(level).size;

  KernelProbe out;
  out.level = level;
  out.word_bound = word_bound;

  auto key = [&bk, level](const typename B::Element& g) {
    if constexpr (B::kActsOnTree)
      return detail::element_key(bk, g, std::min(bk.comparison_depth(), level + 2));
    else
      return detail::element_key(bk, g);
  };

  auto is_identity_element = [&bk](const typename B::Element& g) {
    if constexpr (B::kActsOnTree)
      return bk.is_identity_element(g);
    else
      return g == bk.identity();
  };

  auto visit = [&](const detail::WordNode<B>& node) {
    if (is_identity_element(node.element)) return true;
    if (index.index_of(node.element) != 0) return true;  // moves the basepoint
    bool trivial = true;
    for (Point x = 1; x < n && trivial; ++x)
      trivial = index.index_of(bk.multiply(node.element, index.level().representatives[x])) == x;
    out.words.push_back({detail::render_word(bk, node.letters), trivial});
    return true;
  };
  detail::word_bfs(bk, word_bound, key, visit);
  return out;
}

// ---------------------------------------------------------------------------
// Self-replication probe
// ---------------------------------------------------------------------------

struct SelfReplication {
  bool pass = false;
  struct PerGenerator {
    std::string generator;
    bool found = false;
    std::string word;  // certificate: fixes the vertex, section equals the generator
  };
  std::vector<PerGenerator> items;
};

// Searches for words fixing the first basepoint vertex whose section there
// reproduces each generator (up to the comparison depth).  Failure means
// "not found within bounds".
inline SelfReplication self_replicating_probe(const WreathBackend& bk, int word_bound,
                                              int depth) {
  const std::string vertex = bk.basepoint(1);
  auto gens = bk.generators();
  auto names = bk.generator_names();

  SelfReplication out;
  for (const auto& name : names) out.items.push_back({name, false, ""});
  std::size_t remaining = gens.size();

  auto key = [&bk, depth](const WreathBackend::Element& g) {
    return detail::element_key(bk, g, std::min(bk.comparison_depth(), depth + 1));
  };
  auto visit = [&](const detail::WordNode<WreathBackend>& node) {
    if (bk.act(node.element, vertex) != vertex) return true;
    WreathBackend::Element section = bk.section_at(node.element, vertex);
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (out.items[i].found) continue;
      if (bk.elements_equal(section, gens[i], depth)) {
        out.items[i].found = true;
        out.items[i].word = detail::render_word(bk, node.letters);
        --remaining;
      }
    }
    return remaining > 0;
  };
  detail::word_bfs(bk, word_bound, key, visit);
  out.pass = remaining == 0;
  return out;
}

}  // namespace renormlab
