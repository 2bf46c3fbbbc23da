#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "mtc/merge_tree.hpp"
#include "mtc/synthetic.hpp"

using namespace mtc;
using namespace oracles;

TEST_CASE("join tree of a 1x5 profile") {
  const ScalarField f(1, 5, {3, 1, 2, 0, 4});
  const MergeTree t = build_join_tree(f);
  CHECK(t.kind() == TreeKind::Join);
  CHECK(t.size() == 4);
  std::multiset<double> leaves;
  for (VertexId l : t.leaves()) leaves.insert(t.value(l));
  CHECK(leaves == std::multiset<double>{0.0, 1.0});
  CHECK(t.value(t.root()) == 4.0);
  CHECK(t.value(t.lca(t.leaves()[0], t.leaves()[1])) == 2.0);
  for (VertexId v = 0; v < t.size(); ++v) {
    REQUIRE(t.vertex(v).domain_index);
    CHECK(t.vertex(v).coords == f.coords(*t.vertex(v).domain_index));
  }
}

TEST_CASE("split tree of a 1x5 profile") {
  const ScalarField f(1, 5, {3, 1, 2, 0, 4});
  const MergeTree t = build_split_tree(f);
  CHECK(t.kind() == TreeKind::Split);
  CHECK(t.value(t.root()) == 0.0);
  std::multiset<double> leaves;
  for (VertexId l : t.leaves()) leaves.insert(t.value(l));
  // Maxima under four-connectivity: 3 (left end), 2 (between the two dips) and 4.
  CHECK(leaves == std::multiset<double>{2.0, 3.0, 4.0});
  // Values decrease towards the root.
  for (VertexId v = 0; v < t.size(); ++v)
    if (auto p = t.parent(v)) CHECK(t.value(*p) < t.value(v));
}

TEST_CASE("split tree is the re-negated join tree of the negated field") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const ScalarField f = random_field(rng, 5, 6, trial % 2 == 0);
    const MergeTree s = build_split_tree(f);
    const MergeTree j = build_join_tree(negate(f));
    REQUIRE(s.size() == j.size());
    for (VertexId v = 0; v < s.size(); ++v) {
      CHECK(s.value(v) == -j.value(v));
      CHECK(s.parent(v) == j.parent(v));
      CHECK(s.vertex(v).domain_index == j.vertex(v).domain_index);
    }
  }
}

TEST_CASE("constant and unimodal fields give one leaf") {
  const MergeTree c = build_join_tree(ScalarField(3, 3, std::vector<double>(9, 5.0)));
  CHECK(c.leaf_count() == 1);
  for (VertexId u = 0; u < c.size(); ++u)
    for (VertexId v = 0; v < c.size(); ++v) CHECK(c.tree_distance(u, v) == 0.0);

  const synthetic::Bump peak[] = {{15.0, 17.0, 1.0, 5.0}};
  CHECK(build_split_tree(synthetic::gaussian_mixture(32, 32, peak)).leaf_count() == 1);
}

TEST_CASE("lca and tree distance on the three-leaf example") {
  const MergeTree t = fixtures::three_leaf_a();
  CHECK(t.lca(0, 0) == 0);
  CHECK(t.value(t.lca(0, 1)) == 4.7);
  CHECK(t.lca(2, t.root()) == t.root());
  CHECK(t.tree_distance(0, 0) == 0.0);
  CHECK(t.tree_distance(0, 1) == doctest::Approx(4.4).epsilon(1e-12));
  CHECK(t.tree_distance(2, t.root()) == doctest::Approx(4.2).epsilon(1e-12));
  CHECK_THROWS_AS(t.lca(0, 99), TreeError);
}

TEST_CASE("euclidean distance") {
  const MergeTree t = fixtures::tree(TreeKind::Join, {{0.0, 2, Point2{0, 0}}, {1.0, 2, Point2{3, 4}},
                                                      {2.0, std::nullopt, Point2{0, 0}}});
  CHECK(t.euclidean_distance(0, 1) == 5.0);
  CHECK(t.euclidean_distance(1, 0) == 5.0);
  CHECK(t.euclidean_distance(0, 2) == 0.0);
  const MergeTree bare = fixtures::three_leaf_a();
  CHECK_THROWS_AS(bare.euclidean_distance(0, 1), TreeError);
}

TEST_CASE("tree distance is a metric on small trees") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const MergeTree t = build_join_tree(random_field(rng, 1, 11));
    REQUIRE(t.leaf_count() <= 6);
    for (VertexId u = 0; u < t.size(); ++u)
      for (VertexId v = 0; v < t.size(); ++v) {
        CHECK((t.tree_distance(u, v) == 0.0) == (u == v));
        CHECK(t.tree_distance(u, v) == t.tree_distance(v, u));
        for (VertexId w = 0; w < t.size(); ++w)
          CHECK(t.tree_distance(u, w) <= t.tree_distance(u, v) + t.tree_distance(v, w) + 1e-12);
      }
  }
}

TEST_CASE("structural invariants are enforced") {
  using fixtures::Node;
  CHECK_THROWS_AS(fixtures::tree(TreeKind::Join, {{1.0, std::nullopt}, {2.0, std::nullopt}}), TreeError);
  CHECK_THROWS_AS(fixtures::tree(TreeKind::Join, {{3.0, 1}, {2.0, std::nullopt}}), TreeError);
  CHECK_THROWS_AS(fixtures::tree(TreeKind::Split, {{1.0, 1}, {2.0, std::nullopt}}), TreeError);
  // Degree-2 chain: leaf -> middle -> root where middle has one child.
  CHECK_THROWS_AS(fixtures::tree(TreeKind::Join, {{0.0, 1}, {1.0, 2}, {2.0, std::nullopt}}), TreeError);
  CHECK_THROWS_AS(fixtures::tree(TreeKind::Join, {{0.0, 1}, {1.0, 0}, {2.0, std::nullopt}}), TreeError);
}

TEST_CASE("oracle: leaves are brute-force local minima") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + trial % 8, cols = 1 + (trial / 8) % 8;
    const ScalarField f = random_field(rng, rows, cols, trial % 3 == 0);
    for (Connectivity c : {Connectivity::Four, Connectivity::Eight}) {
      const MergeTree t = build_join_tree(f, c);
      std::set<std::size_t> leaves;
      for (VertexId l : t.leaves()) leaves.insert(*t.vertex(l).domain_index);
      CHECK(leaves == brute_minima(f, c));
    }
  }
}

TEST_CASE("oracle: sublevel components equal level crossings") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 60; ++trial) {
    const ScalarField f = random_field(rng, 6, 6, trial % 4 == 0);
    for (Connectivity c : {Connectivity::Four, Connectivity::Eight}) {
      const MergeTree t = build_join_tree(f, c);
      for (double a : f.values()) CHECK(sublevel_components(f, a, c) == edges_crossing(t, a));
    }
  }
}

TEST_CASE("persistence pairs") {
  const MergeTree single = fixtures::tree(TreeKind::Join, {{0.0, 1}, {4.0, std::nullopt}});
  CHECK(persistence_pairs(single).pairs == std::vector<PersistencePair>{{0.0, 4.0}});

  const MergeTree j = build_join_tree(ScalarField(1, 5, {3, 1, 2, 0, 4}));
  CHECK(persistence_pairs(j).pairs == std::vector<PersistencePair>{{0.0, 4.0}, {1.0, 2.0}});

  CHECK(persistence_pairs(fixtures::three_leaf_a()).pairs ==
        std::vector<PersistencePair>{{1.0, 5.2}, {2.0, 5.2}, {3.0, 4.7}});

  // Split orientation: values are reported as (min, max).
  const MergeTree s = build_split_tree(ScalarField(1, 5, {3, 1, 2, 0, 4}));
  CHECK(persistence_pairs(s).pairs == std::vector<PersistencePair>{{0.0, 3.0}, {0.0, 4.0}, {1.0, 2.0}});
}

TEST_CASE("oracle: pairs equal union-find persistence of the tree") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const ScalarField f = random_field(rng, 6, 6, trial % 3 == 0);
    const TreeKind kind = trial % 2 ? TreeKind::Join : TreeKind::Split;
    const MergeTree t = build_merge_tree(f, kind);
    const auto pairs = persistence_pairs(t).pairs;
    CHECK(pairs == brute_pairs(t));
    CHECK(pairs.size() == t.leaf_count());
  }
}

TEST_CASE("simplification") {
  const MergeTree j = build_join_tree(ScalarField(1, 5, {3, 1, 2, 0, 4}));
  const MergeTree same = simplify(j, 0.0);
  CHECK(same.size() == j.size());
  const MergeTree cut = simplify(j, 1.5);
  CHECK(cut.leaf_count() == 1);
  CHECK(cut.value(cut.leaves()[0]) == 0.0);
  CHECK(cut.value(cut.root()) == 4.0);
  CHECK(simplify(j, std::numeric_limits<double>::infinity()).leaf_count() == 1);
  CHECK_THROWS(simplify(j, -1.0));
}

TEST_CASE("simplification is idempotent and composes") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 0.6);
  auto same = [](const MergeTree& a, const MergeTree& b) {
    return persistence_pairs(a).pairs == persistence_pairs(b).pairs && a.size() == b.size();
  };
  for (int trial = 0; trial < 60; ++trial) {
    const MergeTree t = build_join_tree(random_field(rng, 6, 6));
    const double t1 = u(rng), t2 = t1 + u(rng);
    const MergeTree s1 = simplify(t, t1);
    CHECK(same(simplify(s1, t1), s1));
    CHECK(same(simplify(s1, t2), simplify(t, t2)));
    for (const auto& p : persistence_pairs(s1).pairs)
      if (p.death != s1.value(s1.root())) CHECK(p.persistence() >= t1);
  }
}

TEST_CASE("persistence graph") {
  // Pairs (1,2), (3,4) and the essential (0,4): persistences 1, 1, 4.
  const MergeTree t = fixtures::tree(TreeKind::Join, {{0.0, 3}, {1.0, 3}, {3.0, 4}, {2.0, 4}, {4.0, std::nullopt}});
  const double thresholds[] = {0.0, 2.0, 5.0};
  const auto g = persistence_graph(t, thresholds);
  REQUIRE(g.points.size() == 3);
  CHECK(g.points[0].pair_count == 3);
  CHECK(g.points[1].pair_count == 1);
  CHECK(g.points[2].pair_count == 0);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const MergeTree r = build_join_tree(random_field(rng, 6, 6));
    std::vector<double> ts{0.0};
    for (int k = 1; k <= 10; ++k) ts.push_back(0.1 * k);
    const auto pg = persistence_graph(r, ts);
    CHECK(pg.points.front().pair_count == r.leaf_count());
    for (std::size_t k = 1; k < pg.points.size(); ++k) CHECK(pg.points[k].pair_count <= pg.points[k - 1].pair_count);
  }
}

TEST_CASE("dummy subdivision keeps ids and lca values") {
  const MergeTree t = fixtures::three_leaf_a();
  const MergeTree d = t.with_dummy(2, 3.0, Point2{1, 1});
  CHECK(d.size() == t.size() + 1);
  const VertexId dummy = d.size() - 1;
  CHECK(d.vertex(dummy).dummy);
  CHECK(d.parent(2) == dummy);
  CHECK(d.parent(dummy) == t.root());
  for (VertexId u = 0; u < t.size(); ++u)
    for (VertexId v = 0; v < t.size(); ++v) CHECK(d.value(d.lca(u, v)) == t.value(t.lca(u, v)));
  CHECK_THROWS_AS(t.with_dummy(2, 9.0, std::nullopt), TreeError);
}
