#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "renormlab/errors.hpp"

namespace renormlab {

using Point = std::uint32_t;

// A permutation of the points [0, degree), stored as an image array.
class Permutation {
 public:
  Permutation() = default;

  // Identity on `degree` points.
  explicit Permutation(Point degree) : images_(degree) {
    for (Point i = 0; i < degree; ++i) images_[i] = i;
  }

  // Takes ownership of an image array; validates bijectivity.
  explicit Permutation(std::vector<Point> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (Point img : images_) {
      if (img >= images_.size() || seen[img])
        throw Error("permutation image array is not a bijection");
      seen[img] = true;
    }
  }

  struct Unchecked {};
  Permutation(std::vector<Point> images, Unchecked) : images_(std::move(images)) {}

  static Permutation identity(Point degree) { return Permutation(degree); }

  Point degree() const { return static_cast<Point>(images_.size()); }

  Point operator()(Point p) const { return images_[p]; }

  const std::vector<Point>& images() const { return images_; }

  bool is_identity() const {
    for (Point i = 0; i < degree(); ++i)
      if (images_[i] != i) return false;
    return true;
  }

  std::optional<Point> smallest_moved_point() const {
    for (Point i = 0; i < degree(); ++i)
      if (images_[i] != i) return i;
    return std::nullopt;
  }

  Permutation inverse() const {
    std::vector<Point> inv(images_.size());
    for (Point i = 0; i < degree(); ++i) inv[images_[i]] = i;
    return Permutation(std::move(inv), Unchecked{});
  }

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.images_ == b.images_;
  }

 private:
  std::vector<Point> images_;
};

// Product acting as `a` after `b`: the result maps i to a(b(i)).
inline Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.degree() != b.degree())
    throw DegreeMismatch("compose: degrees differ (" + std::to_string(a.degree()) +
                         " vs " + std::to_string(b.degree()) + ")");
  std::vector<Point> images(a.degree());
  for (Point i = 0; i < a.degree(); ++i) images[i] = a(b(i));
  return Permutation(std::move(images), Permutation::Unchecked{});
}

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const {
    // FNV-1a over the image words.
    std::size_t h = 1469598103934665603ull;
    for (Point img : p.images()) {
      h ^= img;
      h *= 1099511628211ull;
    }
    return h;
  }
};

// Pushes a permutation of a fiber-compatible action down through a surjection
// proj : [0, p.degree()) -> [0, target_degree).  The result q satisfies
// q(proj(x)) = proj(p(x)) for every x; if two points of one fiber land in
// different fibers the input did not permute fibers as blocks.
inline Permutation block_projection(const Permutation& p,
                                    std::span<const Point> proj,
                                    Point target_degree) {
  if (proj.size() != p.degree())
    throw DegreeMismatch("block_projection: projection array length " +
                         std::to_string(proj.size()) + " != degree " +
                         std::to_string(p.degree()));
  constexpr Point kUnset = ~Point{0};
  std::vector<Point> images(target_degree, kUnset);
  for (Point x = 0; x < p.degree(); ++x) {
    Point from = proj[x];
    Point to = proj[p(x)];
    if (from >= target_degree || to >= target_degree)
      throw NotBlockCompatible("block_projection: projection value out of range");
    if (images[from] == kUnset) {
      images[from] = to;
    } else if (images[from] != to) {
      throw NotBlockCompatible("block_projection: fiber of " + std::to_string(from) +
                               " is split across fibers " + std::to_string(images[from]) +
                               " and " + std::to_string(to));
    }
  }
  for (Point i = 0; i < target_degree; ++i)
    if (images[i] == kUnset)
      throw NotBlockCompatible("block_projection: projection misses target point " +
                               std::to_string(i));
  return Permutation(std::move(images));
}

}  // namespace renormlab
