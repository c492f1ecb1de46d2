#include <catch2/catch_amalgamated.hpp>
#include <set>

#include "renormlab/tree.hpp"

using namespace renormlab;

namespace {

TowerAnalysis<WreathBackend> odometer_tower(int depth) {
  return analyze_tower(
      ChainSpec<WreathBackend>{binary_odometer(), ChainKind::kRenormalization, depth}, depth);
}

TowerAnalysis<HeisenbergBackend> heis_tower(int depth) {
  return analyze_tower(ChainSpec<HeisenbergBackend>{HeisenbergBackend(2, 3),
                                                    ChainKind::kRenormalization, depth},
                       depth);
}

}  // namespace

TEST_CASE("coset tree construction") {
  SECTION("odometer depth 3 is the complete binary tree") {
    auto t = odometer_tower(3);
    CosetTree tree = build_tree(t, 3);
    CHECK(tree.sizes == std::vector<Point>{1, 2, 4, 8});
    std::size_t vertices = 0;
    for (Point s : tree.sizes) vertices += s;
    CHECK(vertices == 15);
    CHECK(tree.children(1, 0).size() == 2);
  }

  SECTION("heisenberg depth 2 is 36-regular") {
    auto t = heis_tower(2);
    CosetTree tree = build_tree(t, 2);
    CHECK(tree.sizes == std::vector<Point>{1, 36, 1296});
    for (Point v = 0; v < 36; ++v) CHECK(tree.children(1, v).size() == 36);
  }

  SECTION("generators act as tree automorphisms") {
    auto t = odometer_tower(3);
    CosetTree tree = build_tree(t, 3);
    // For every edge (v, w) and generator g, (g v, g w) is again an edge.
    for (int l = 1; l <= 3; ++l) {
      for (std::size_t gi = 0; gi < tree.generator_perms[l].size(); ++gi) {
        const Permutation& up = tree.generator_perms[l][gi];
        const Permutation& down = tree.generator_perms[l - 1][gi];
        for (Point w = 0; w < tree.sizes[l]; ++w)
          CHECK(tree.parents[l][up(w)] == down(tree.parents[l][w]));
      }
    }
  }
}

TEST_CASE("adapted sets") {
  SECTION("every basis cylinder is adapted with orbit size n_k") {
    auto t = heis_tower(2);
    CosetTree tree = build_tree(t, 2);
    for (int k = 1; k <= 2; ++k) {
      AdaptedReport r = adapted_check(tree, ClopenSet::cylinder(k, 0));
      CHECK(r.adapted);
      CHECK(r.orbit_size == tree.sizes[k]);
    }
  }

  SECTION("the full level is adapted with orbit size 1") {
    auto t = odometer_tower(3);
    CosetTree tree = build_tree(t, 3);
    AdaptedReport r = adapted_check(tree, ClopenSet::full_level(2, 4));
    CHECK(r.adapted);
    CHECK(r.orbit_size == 1);
  }

  SECTION("odometer unions: the level-1 cylinder block is adapted, a skew pair is not") {
    auto t = odometer_tower(2);
    CosetTree tree = build_tree(t, 2);
    // Indices at level 2 in BFS order correspond to residues 0, 1, 3, 2.
    // The refinement of the level-1 basepoint cylinder (residues {0, 2}) is
    // adapted; the pair of residues {0, 1} = indices {0, 1} is split by the
    // rotation and is not.
    ClopenSet block = refine(tree, ClopenSet::cylinder(1, 0), 1);
    AdaptedReport r1 = adapted_check(tree, block);
    CHECK(r1.adapted);
    CHECK(r1.orbit_size == 2);

    AdaptedReport r2 = adapted_check(tree, ClopenSet{2, {0, 1}});
    CHECK_FALSE(r2.adapted);
  }
}

TEST_CASE("lambda orbit") {
  SECTION("first image is the level-1 basepoint cylinder") {
    auto t = heis_tower(2);
    auto orbit = lambda_orbit(t, 0, 2);
    REQUIRE(orbit.size() == 3);
    CHECK(orbit[0] == ClopenSet::full_level(0, 1));
    CHECK(orbit[1] == ClopenSet::cylinder(1, 0));
    // Two steps in: the basepoint cylinder two levels deep, a single vertex.
    CHECK(orbit[2] == ClopenSet::cylinder(2, 0));
  }

  SECTION("basepoint path is fixed at every step") {
    auto t = odometer_tower(4);
    auto orbit = lambda_orbit(t, 1, 3);
    for (const ClopenSet& s : orbit)
      CHECK(std::find(s.vertices.begin(), s.vertices.end(), 0) != s.vertices.end());
  }

  SECTION("cylinder depth strictly increases") {
    auto t = odometer_tower(4);
    auto orbit = lambda_orbit(t, 0, 4);
    for (std::size_t j = 0; j < orbit.size(); ++j) {
      CHECK(orbit[j].depth == static_cast<int>(j));
      // Each image is the fiber of the level-j basepoint.
      auto fiber = t.basepoint_fiber(static_cast<int>(j), static_cast<int>(j));
      CHECK(orbit[j].vertices == std::vector<Point>{0});
      (void)fiber;
    }
  }

  SECTION("image sets match the basepoint fibers") {
    auto t = odometer_tower(4);
    auto orbit = lambda_orbit(t, 1, 3);
    for (std::size_t j = 1; j < orbit.size(); ++j) {
      auto fiber = t.basepoint_fiber(1 + static_cast<int>(j), static_cast<int>(j));
      std::set<Point> expect(fiber.begin(), fiber.end());
      CHECK(std::set<Point>(orbit[j].vertices.begin(), orbit[j].vertices.end()) == expect);
    }
  }

  SECTION("vertex chains are rejected") {
    auto t = analyze_tower(
        ChainSpec<WreathBackend>{grigorchuk(), ChainKind::kVertexStabilizer, 2}, 2);
    CHECK_THROWS_AS(lambda_orbit(t, 0, 2), UnsupportedForChainKind);
  }
}

TEST_CASE("dot export") {
  SECTION("depth-1 binary tree: 3 nodes, 2 edges") {
    auto t = odometer_tower(1);
    CosetTree tree = build_tree(t, 1);
    std::string dot = export_dot(tree);
    std::size_t nodes = 0, edges = 0, pos = 0;
    while ((pos = dot.find("[label=", pos)) != std::string::npos) ++nodes, ++pos;
    pos = 0;
    while ((pos = dot.find(" -> ", pos)) != std::string::npos) ++edges, ++pos;
    CHECK(nodes == 3);
    CHECK(edges == 2);
    CHECK(dot.find("digraph") == 0);
  }

  SECTION("heisenberg depth 1 has 37 nodes") {
    auto t = heis_tower(1);
    CosetTree tree = build_tree(t, 1);
    std::string dot = export_dot(tree);
    std::size_t nodes = 0, pos = 0;
    while ((pos = dot.find("[label=", pos)) != std::string::npos) ++nodes, ++pos;
    CHECK(nodes == 37);
  }

  SECTION("export is deterministic") {
    auto t = odometer_tower(2);
    CosetTree tree = build_tree(t, 2);
    CHECK(export_dot(tree) == export_dot(tree));
  }
}
