#include "bergman/dyadic.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

using namespace bergman;

namespace {

BergmanTree arc_tree(int shift, int depth) {
  auto sys = std::make_shared<ArcSystem>(2, shift, depth);
  return BergmanTree::build(sys, kDefaultTheta, measure_sandwich(*sys, 200, 1).c1, depth);
}

}  // namespace

TEST_SUITE("dyadic") {

TEST_CASE("arc systems: partition and nesting at every level") {
  for (int shift = 0; shift < 3; ++shift) {
    const ArcSystem sys(2, shift, 10);
    for (int k = 0; k <= 10; ++k) CHECK(sys.cell_count(k) == (std::size_t{1} << k));
    const SandwichConstants sc = measure_sandwich(sys, 2000, 3);
    CHECK(sc.partition_violations == 0);
    CHECK(sc.nesting_violations == 0);
    CHECK(sc.c1 > 0.0);
    CHECK(sc.C2 < 10.0);
  }
  CHECK_THROWS(build_boundary_systems(1, 0.3, 4));
}

TEST_CASE("nets on S^3: partition, nesting, centers in their own cells") {
  auto systems = build_boundary_systems(2, 0.5, 5, 2, 2);
  REQUIRE(systems.size() == 2);
  for (const auto& s : systems) {
    for (int k = 0; k <= 5; ++k) {
      CHECK(s->cell_count(k) == (std::size_t{1} << (2 * k)));
      for (std::size_t i = 0; i < s->cell_count(k); ++i) CHECK(s->cell_of(s->center(k, i), k) == i);
    }
    const SandwichConstants sc = measure_sandwich(*s, 1000, 4);
    CHECK(sc.partition_violations == 0);
    CHECK(sc.nesting_violations == 0);
  }
}

TEST_CASE("tree structure: child bound, locate, kubes and dyadic tents") {
  const BergmanTree tree = arc_tree(1, 8);
  CHECK(child_count_bound(1, kDefaultTheta) == 2);
  for (const auto& nd : tree.nodes()) {
    CHECK(nd.children.size() <= 2);
    for (int c : nd.children) CHECK(tree.node(c).parent == nd.id);
    CHECK(tree.kube_contains(nd.id, nd.center));
  }
  Rng rng(8);
  for (int i = 0; i < 2000; ++i) {
    const BallPoint z(random_sphere_point(1, rng) * (tree.outer_radius() * std::sqrt(uniform01(rng))));
    const TreeNode& k = tree.locate(z);
    CHECK(k.generation == tree.shell_of(z));
    CHECK(tree.kube_contains(k.id, z));
    // z lies in the dyadic tent of each ancestor and nowhere else along its generation 2 level
    for (int a = k.id; a >= 0; a = tree.node(a).parent) CHECK(tree.dyadic_tent_contains(a, z));
    if (k.generation >= 2) {
      const int anc = tree.ancestor_at(k.id, 2);
      for (std::size_t c = 0; c < tree.level_size(2); ++c) {
        const int id = tree.node_id(2, c);
        CHECK(tree.dyadic_tent_contains(id, z) == (id == anc));
      }
    }
  }
  const BallPoint far(CVec{0.999999});
  CHECK(tree.locate_id(far) == -1);
}

TEST_CASE("tree audit at moderate depth") {
  const BergmanTree tree = arc_tree(0, 6);
  Resolution res = default_resolution(1);
  res.shells = 8;
  res.angular = 12 * 64;
  const auto grid = build_grid(1, 0.0, res);
  const TreeReport rep = verify_tree(tree, grid, 3000, 2);
  CHECK(rep.partition_violations == 0);
  CHECK(rep.max_children <= rep.child_bound);
  CHECK(rep.hat_ratio_min >= 1.0 - 1e-9);
  CHECK(rep.volume_band_max / rep.volume_band_min < 64.0);
}

TEST_CASE("dyadic sums add up along the tree") {
  const BergmanTree tree = arc_tree(2, 5);
  Resolution res = default_resolution(1);
  res.shells = 7;
  res.angular = 384;
  const auto grid = build_grid(1, 1.0, res);
  const auto assign = assign_nodes(tree, grid);
  const DyadicSums v = dyadic_volumes(tree, grid, assign);
  for (const auto& nd : tree.nodes()) {
    double s = v.kube[nd.id];
    for (int c : nd.children) s += v.tent[c];
    CHECK(v.tent[nd.id] == doctest::Approx(s).epsilon(1e-12));
  }
  // the root tent is all of the ball within the tree depth
  CHECK(v.tent[0] == doctest::Approx(1.0 - std::pow(1.0 - std::pow(tree.outer_radius(), 2), 2)).epsilon(1e-9));
}

TEST_CASE("tree JSON round trip") {
  for (int n : {1, 2}) {
    BergmanTree t = n == 1 ? arc_tree(1, 5) : [] {
      auto s = build_boundary_systems(2, 0.5, 3, 5, 1).front();
      return BergmanTree::build(s, kDefaultTheta, 0.2, 3);
    }();
    const BergmanTree u = BergmanTree::from_json(t.to_json());
    REQUIRE(u.size() == t.size());
    CHECK(u.to_json() == t.to_json());
    Rng rng(6);
    for (int i = 0; i < 300; ++i) {
      const BallPoint z(random_sphere_point(n, rng) * (t.outer_radius() * uniform01(rng)));
      CHECK(u.locate_id(z) == t.locate_id(z));
    }
  }
}

TEST_CASE("covering forest: containment and a recorded constant, n = 1") {
  ForestOptions fo;
  fo.test_apexes = 300;
  const auto forest = CoveringForest::build(1, kDefaultTheta, 8, fo);
  CHECK(forest.size() == 3);
  Rng rng(12);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const BallPoint z = random_apex(1, generation_gap(8, kDefaultTheta), rng);
    const CoverHit h = covering_lookup(forest, z);
    const BergmanTree& t = forest.trees()[h.tree];
    for (const auto& w : sample_tent(z, 100, t.outer_radius(), rng)) CHECK(t.dyadic_tent_contains(h.node, w));
    worst = std::max(worst, forest.tent_volume(h.tree, h.node) / tent_volume_exact(z, 0.0));
  }
  CHECK(worst >= 1.0);
  CHECK(worst < 100.0);
}

TEST_CASE("sampled tent points lie in the tent") {
  Rng rng(13);
  for (int n : {1, 2}) {
    const BallPoint apex(random_sphere_point(n, rng) * 0.9);
    for (const auto& w : sample_tent(apex, 500, 0.999, rng)) CHECK(tent_contains(TentSpec{apex}, w));
  }
}

}
