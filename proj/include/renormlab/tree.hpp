#pragma once

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "renormlab/chain.hpp"

namespace renormlab {

// The rooted coset tree: one vertex per coset at each level, a vertex's
// parent being its projection.  Vertices are (level, index) pairs.
struct CosetTree {
  std::vector<Point> sizes;                 // per level 0..L
  std::vector<std::vector<Point>> parents;  // parents[l][i], defined for l >= 1
  std::vector<std::vector<Permutation>> generator_perms;  // per level

  int depth() const { return static_cast<int>(sizes.size()) - 1; }

  std::vector<Point> children(int level, Point v) const {
    std::vector<Point> out;
    for (Point i = 0; i < sizes[level + 1]; ++i)
      if (parents[level + 1][i] == v) out.push_back(i);
    return out;
  }
};

// A union of depth-k cylinders, named by the level-k vertices it contains.
struct ClopenSet {
  int depth = 0;
  std::vector<Point> vertices;  // sorted, unique

  static ClopenSet cylinder(int depth, Point v) { return {depth, {v}}; }

  static ClopenSet full_level(int depth, Point size) {
    ClopenSet s{depth, {}};
    for (Point i = 0; i < size; ++i) s.vertices.push_back(i);
    return s;
  }

  friend bool operator==(const ClopenSet&, const ClopenSet&) = default;
};

template <class B>
CosetTree build_tree(const std::vector<std::shared_ptr<const LevelAction<B>>>& levels,
                     int depth) {
  if (depth >= static_cast<int>(levels.size()))
    throw InsufficientDepth("build_tree: levels not built");
  CosetTree tree;
  for (int l = 0; l <= depth; ++l) {
    tree.sizes.push_back(levels[l]->size);
    tree.parents.push_back(levels[l]->projection);
    tree.generator_perms.push_back(levels[l]->generator_perms);
  }
  // Spherical homogeneity: every vertex of a level has the same number of
  // children (fibers of an equivariant map under a transitive action).
  for (int l = 1; l <= depth; ++l) {
    std::vector<Point> count(tree.sizes[l - 1], 0);
    for (Point v : tree.parents[l]) ++count[v];
    for (Point c : count)
      if (c != tree.sizes[l] / tree.sizes[l - 1])
        throw Error("internal: coset tree is not spherically homogeneous");
  }
  return tree;
}

template <class B>
CosetTree build_tree(const TowerAnalysis<B>& t, int depth) {
  return build_tree(t.levels, depth);
}

// Replaces each vertex of the set by its children, `extra` levels down.
inline ClopenSet refine(const CosetTree& tree, const ClopenSet& s, int extra) {
  ClopenSet cur = s;
  for (int step = 0; step < extra; ++step) {
    ClopenSet next{cur.depth + 1, {}};
    std::set<Point> members(cur.vertices.begin(), cur.vertices.end());
    for (Point i = 0; i < tree.sizes[cur.depth + 1]; ++i)
      if (members.count(tree.parents[cur.depth + 1][i])) next.vertices.push_back(i);
    cur = std::move(next);
  }
  return cur;
}

struct AdaptedReport {
  bool adapted = false;
  std::size_t orbit_size = 0;          // = index of the stabilizer when adapted
  std::vector<std::vector<Point>> orbit;  // translates, in discovery order
};

// Enumerates the orbit of the vertex set under the level generators; the
// set is adapted exactly when every translate equals it or misses it.
inline AdaptedReport adapted_check(const CosetTree& tree, const ClopenSet& s,
                                   std::size_t orbit_budget = 1 << 20) {
  const auto& gens = tree.generator_perms[s.depth];
  std::set<std::vector<Point>> seen;
  AdaptedReport report;
  std::vector<Point> start = s.vertices;
  std::sort(start.begin(), start.end());
  seen.insert(start);
  report.orbit.push_back(start);

  bool disjoint_or_equal = true;
  for (std::size_t qi = 0; qi < report.orbit.size(); ++qi) {
    std::vector<Point> cur = report.orbit[qi];
    for (const Permutation& g : gens) {
      std::vector<Point> img;
      img.reserve(cur.size());
      for (Point v : cur) img.push_back(g(v));
      std::sort(img.begin(), img.end());
      if (seen.insert(img).second) {
        if (seen.size() > orbit_budget) throw TooLarge("adapted_check: orbit budget exceeded");
        // Compare against the original set.
        if (img != start) {
          std::vector<Point> inter;
          std::set_intersection(img.begin(), img.end(), start.begin(), start.end(),
                                std::back_inserter(inter));
          if (!inter.empty()) disjoint_or_equal = false;
        }
        report.orbit.push_back(std::move(img));
      }
    }
  }
  report.adapted = disjoint_or_equal;
  report.orbit_size = report.orbit.size();
  return report;
}

// Iterated shift images starting from the full level set: after j steps the
// set sits at level start+j and is the cylinder of the level-j basepoint.
template <class B>
std::vector<ClopenSet> lambda_orbit(const TowerAnalysis<B>& t, int start_level, int steps) {
  if (t.spec.kind != ChainKind::kRenormalization)
    throw UnsupportedForChainKind("lambda orbit needs an endomorphism chain");
  if (start_level + steps > t.top_level())
    throw InsufficientDepth("lambda orbit: levels not built");

  std::vector<ClopenSet> out;
  out.push_back(ClopenSet::full_level(start_level, t.level(start_level).size));
  for (int j = 0; j < steps; ++j) {
    int l = start_level + j;
    TokenIndex<B> up(t.spec.backend, t.levels[l + 1]);
    std::vector<Point> s = shift_map(t.spec, t.level(l), up);
    ClopenSet next{l + 1, {}};
    for (Point v : out.back().vertices) next.vertices.push_back(s[v]);
    std::sort(next.vertices.begin(), next.vertices.end());
    out.push_back(std::move(next));
  }
  return out;
}

struct DotOptions {
  bool token_labels = false;  // label vertices with coset tokens instead of indices
};

// Deterministic DOT rendering of the coset tree, vertices labeled
// "level:index", edges parent -> child.
inline std::string export_dot(const CosetTree& tree, const DotOptions& options = {},
                              const std::vector<std::vector<std::string>>& tokens = {}) {
  std::ostringstream os;
  os << "digraph coset_tree {\n";
  os << "  rankdir=TB;\n";
  os << "  node [shape=circle, fontsize=10];\n";
  for (int l = 0; l <= tree.depth(); ++l) {
    for (Point i = 0; i < tree.sizes[l]; ++i) {
      os << "  v" << l << "_" << i << " [label=\"";
      if (options.token_labels && static_cast<std::size_t>(l) < tokens.size())
        os << tokens[l][i];
      else
        os << l << ":" << i;
      os << "\"];\n";
    }
  }
  for (int l = 1; l <= tree.depth(); ++l)
    for (Point i = 0; i < tree.sizes[l]; ++i)
      os << "  v" << (l - 1) << "_" << tree.parents[l][i] << " -> v" << l << "_" << i << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace renormlab
