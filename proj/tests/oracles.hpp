#pragma once

// Test-only oracles, kept independent of the library's own algorithms: plain
// exhaustive closures and brute-force counts used to freeze expected values.

#include <random>
#include <set>
#include <vector>

#include "renormlab/perm.hpp"

namespace oracles {

using renormlab::Permutation;
using renormlab::Point;

inline std::vector<Point> act(const std::vector<Point>& a, const std::vector<Point>& b) {
  std::vector<Point> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[b[i]];
  return r;
}

// Every element of <generators> by plain set closure.
inline std::set<std::vector<Point>> exhaustive_closure(
    const std::vector<Permutation>& generators, Point degree) {
  std::vector<Point> id(degree);
  for (Point i = 0; i < degree; ++i) id[i] = i;
  std::set<std::vector<Point>> elems{id};
  std::vector<std::vector<Point>> queue{id};
  while (!queue.empty()) {
    std::vector<Point> cur = queue.back();
    queue.pop_back();
    for (const Permutation& g : generators) {
      std::vector<Point> next = act(cur, g.images());
      if (elems.insert(next).second) queue.push_back(next);
    }
  }
  return elems;
}

inline std::size_t closure_order(const std::vector<Permutation>& generators, Point degree) {
  return exhaustive_closure(generators, degree).size();
}

inline bool closure_contains(const std::vector<Permutation>& generators, Point degree,
                             const Permutation& p) {
  return exhaustive_closure(generators, degree).count(p.images()) > 0;
}

// Count of closure elements fixing the given point.
inline std::size_t closure_stabilizer_order(const std::vector<Permutation>& generators,
                                            Point degree, Point fixed) {
  std::size_t n = 0;
  for (const auto& e : exhaustive_closure(generators, degree))
    if (e[fixed] == fixed) ++n;
  return n;
}

inline Permutation cycle(Point degree, const std::vector<Point>& pts) {
  std::vector<Point> img(degree);
  for (Point i = 0; i < degree; ++i) img[i] = i;
  for (std::size_t i = 0; i < pts.size(); ++i) img[pts[i]] = pts[(i + 1) % pts.size()];
  return Permutation(img);
}

// Random short words over a backend's generators, deterministic per seed.
template <class B>
std::vector<typename B::Element> random_words(const B& backend, int count, int max_len,
                                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto gens = backend.generators();
  std::vector<typename B::Element> out;
  for (int i = 0; i < count; ++i) {
    typename B::Element w = backend.identity();
    std::uniform_int_distribution<int> len_d(0, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    std::uniform_int_distribution<int> flip(0, 1);
    int len = len_d(rng);
    for (int j = 0; j < len; ++j) {
      auto g = gens[pick(rng)];
      if (flip(rng)) g = backend.invert(g);
      w = backend.multiply(w, g);
    }
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace oracles
