#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "renormlab/perm.hpp"

using namespace renormlab;
using oracles::cycle;

TEST_CASE("compose conventions") {
  Permutation id3 = Permutation::identity(3);
  Permutation p = cycle(3, {0, 1, 2});

  SECTION("identity is neutral") {
    CHECK(compose(id3, p) == p);
    CHECK(compose(p, id3) == p);
  }

  SECTION("involution squares to identity") {
    Permutation t = cycle(2, {0, 1});
    CHECK(compose(t, t) == Permutation::identity(2));
  }

  SECTION("result maps i to a(b(i))") {
    // (0 1 2) after (0 1): 0 -> 2, 1 -> 1, 2 -> 0.  This test fixes the
    // composition convention for the whole library.
    Permutation a = cycle(3, {0, 1, 2});
    Permutation b = cycle(3, {0, 1});
    Permutation c = compose(a, b);
    CHECK(c(0) == 2);
    CHECK(c(1) == 1);
    CHECK(c(2) == 0);
  }

  SECTION("degree mismatch is rejected") {
    CHECK_THROWS_AS(compose(Permutation::identity(2), id3), DegreeMismatch);
  }
}

TEST_CASE("inverse and identity") {
  Permutation p = cycle(5, {0, 3, 1});
  CHECK(compose(p, p.inverse()) == Permutation::identity(5));
  CHECK(compose(p.inverse(), p) == Permutation::identity(5));
  CHECK(Permutation::identity(4).is_identity());
  CHECK_FALSE(p.is_identity());
  CHECK(p.smallest_moved_point() == Point{0});
  CHECK_FALSE(Permutation::identity(4).smallest_moved_point().has_value());
}

TEST_CASE("image array validation") {
  CHECK_THROWS_AS(Permutation(std::vector<Point>{0, 0, 2}), Error);
  CHECK_THROWS_AS(Permutation(std::vector<Point>{0, 3}), Error);
}

TEST_CASE("block projection") {
  SECTION("identity projects to identity") {
    std::vector<Point> proj{0, 0, 1, 1};
    Permutation q = block_projection(Permutation::identity(4), proj, 2);
    CHECK(q.is_identity());
  }

  SECTION("bijective projection relabels") {
    // proj is a bijection: the result is the conjugate relabeling of p.
    std::vector<Point> proj{2, 0, 1};
    Permutation p = cycle(3, {0, 1});
    Permutation q = block_projection(p, proj, 3);
    for (Point x = 0; x < 3; ++x) CHECK(q(proj[x]) == proj[p(x)]);
  }

  SECTION("fiber-splitting input is rejected") {
    std::vector<Point> proj{0, 0, 1, 1};
    // Swapping one point of each fiber is not a block map.
    Permutation bad = cycle(4, {1, 2});
    CHECK_THROWS_AS(block_projection(bad, proj, 2), NotBlockCompatible);
  }

  SECTION("projection of a composition is the composition of projections") {
    std::vector<Point> proj{0, 0, 1, 1, 2, 2};
    Permutation p = Permutation(std::vector<Point>{2, 3, 0, 1, 4, 5});  // swaps fibers 0,1
    Permutation q = Permutation(std::vector<Point>{1, 0, 4, 5, 2, 3});  // swaps fibers 1,2
    Permutation lhs = block_projection(compose(p, q), proj, 3);
    Permutation rhs = compose(block_projection(p, proj, 3), block_projection(q, proj, 3));
    CHECK(lhs == rhs);
  }
}
