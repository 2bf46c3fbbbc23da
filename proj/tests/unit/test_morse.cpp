#include <doctest.h>

#include <random>
#include <set>

#include "mtc/metrics.hpp"
#include "mtc/morse.hpp"
#include "mtc/synthetic.hpp"

using namespace mtc;
using synthetic::Bump;

namespace {

ScalarField pits(std::initializer_list<Bump> bumps) {
  std::vector<Bump> b(bumps);
  for (Bump& x : b) x.amplitude = -x.amplitude;
  return synthetic::gaussian_mixture(24, 24, b, 5.0);
}

VertexId leaf_at(const MergeTree& t, const ScalarField& f, double row, double col) {
  for (VertexId l : t.leaves()) {
    const std::size_t g = *t.vertex(l).domain_index;
    if (std::abs(static_cast<double>(f.row_of(g)) - row) <= 1.0 && std::abs(static_cast<double>(f.col_of(g)) - col) <= 1.0)
      return l;
  }
  FAIL("no leaf near (" << row << ", " << col << ")");
  return 0;
}

}  // namespace

TEST_CASE("descent basins of a 1x5 profile") {
  const BasinMap b = descent_basins(ScalarField(1, 5, {3, 1, 2, 0, 4}));
  CHECK(b.assignment == std::vector<std::size_t>{1, 1, 3, 3, 3});
  CHECK(b.extrema == std::vector<std::size_t>{1, 3});
}

TEST_CASE("basin invariants") {
  const Bump one[] = {{10.0, 12.0, 1.0, 4.0}};
  const BasinMap uni = descent_basins(negate(synthetic::gaussian_mixture(20, 20, one)));
  CHECK(uni.extrema.size() == 1);
  for (std::size_t a : uni.assignment) CHECK(a == uni.extrema[0]);

  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> v(49);
    for (double& x : v) x = u(rng);
    const ScalarField f(7, 7, v);
    for (Connectivity c : {Connectivity::Four, Connectivity::Eight}) {
      const BasinMap b = descent_basins(f, c);
      std::set<std::size_t> leaves;
      const MergeTree t = build_join_tree(f, c);
      for (VertexId l : t.leaves()) leaves.insert(*t.vertex(l).domain_index);
      CHECK(std::set<std::size_t>(b.extrema.begin(), b.extrema.end()) == leaves);
      for (std::size_t m : b.extrema) CHECK(b.assignment[m] == m);
      for (std::size_t a : b.assignment) CHECK(b.assignment[a] == a);  // idempotent
    }
  }
}

TEST_CASE("ascent basins are descent basins of the negated field") {
  const ScalarField f(1, 5, {3, 1, 2, 0, 4});
  CHECK(leaf_basins(f, TreeKind::Split).assignment == descent_basins(negate(f)).assignment);
  CHECK(leaf_basins(f, TreeKind::Join).assignment == descent_basins(f).assignment);
}

TEST_CASE("identical fields map every leaf to itself") {
  const ScalarField f = pits({{5, 5, 2, 2.5}, {16, 8, 1.5, 2.5}, {10, 18, 1.8, 2.5}});
  const MergeTree t = build_join_tree(f);
  const MorseMapping m = morse_mapping(t, f, t, f);
  CHECK(m.double_pairs.size() == t.leaf_count());
  for (auto [x, y] : m.double_pairs) CHECK(x == y);
  CHECK(m.forward_only.empty());
  CHECK(m.backward_only.empty());

  const LabeledPair p = morse_labels(t, f, t, f);
  CHECK(p.first.labels == p.second.labels);
  CHECK(interleaving_distance(induced_matrix(p.first.tree, p.first.labels),
                              induced_matrix(p.second.tree, p.second.labels)) == 0.0);
}

TEST_CASE("three displaced minima form three double-connected pairs") {
  // Second field: the left and right pits trade depths and drift, the middle one stays.
  const ScalarField f1 = pits({{12, 4, 2.0, 2.5}, {12, 12, 1.5, 2.5}, {12, 20, 1.0, 2.5}});
  const ScalarField f2 = pits({{13, 5, 1.0, 2.5}, {11, 12, 1.5, 2.5}, {13, 19, 2.0, 2.5}});
  const MergeTree t1 = build_join_tree(f1), t2 = build_join_tree(f2);
  REQUIRE(t1.leaf_count() == 3);
  REQUIRE(t2.leaf_count() == 3);
  const VertexId x = leaf_at(t1, f1, 12, 4), y = leaf_at(t1, f1, 12, 12), z = leaf_at(t1, f1, 12, 20);
  const VertexId zp = leaf_at(t2, f2, 13, 5), yp = leaf_at(t2, f2, 11, 12), xp = leaf_at(t2, f2, 13, 19);
  const MorseMapping m = morse_mapping(t1, f1, t2, f2);
  const std::set<LeafPair> got(m.double_pairs.begin(), m.double_pairs.end());
  CHECK(got == std::set<LeafPair>{{x, zp}, {y, yp}, {z, xp}});
  CHECK(m.forward_only.empty());
  CHECK(m.backward_only.empty());

  const LabeledPair p = morse_labels(t1, f1, t2, f2);
  CHECK(p.first.labels.size() == 3);
  CHECK(p.first.labels.dummy_labels.empty());
  CHECK(p.second.labels.dummy_labels.empty());
}

TEST_CASE("an extra minimum becomes a fresh label with one dummy") {
  const ScalarField f1 = pits({{6, 6, 2.0, 2.5}, {17, 17, 1.6, 2.5}});
  const ScalarField f2 = pits({{6, 6, 2.0, 2.5}, {17, 17, 1.6, 2.5}, {5, 18, 1.2, 2.0}});
  const MergeTree t1 = build_join_tree(f1), t2 = build_join_tree(f2);
  REQUIRE(t1.leaf_count() == 2);
  REQUIRE(t2.leaf_count() == 3);
  const MorseMapping m = morse_mapping(t1, f1, t2, f2);
  CHECK(m.double_pairs.size() == 2);
  CHECK(m.forward_only.empty());
  REQUIRE(m.backward_only.size() == 1);
  CHECK(m.backward_only[0].second == leaf_at(t2, f2, 5, 18));
  // The classes are disjoint.
  std::set<LeafPair> all;
  for (const auto* cls : {&m.double_pairs, &m.forward_only, &m.backward_only})
    for (const auto& p : *cls) CHECK(all.insert(p).second);

  const LabeledPair p = morse_labels(t1, f1, t2, f2);
  CHECK(p.first.labels.size() == 3);
  CHECK(p.second.labels.size() == 3);
  CHECK(p.first.labels.dummy_labels == std::set<std::size_t>{2});
  CHECK(p.second.labels.dummy_labels.empty());
  CHECK(p.second.tree.size() == t2.size());
  CHECK(p.first.tree.size() == t1.size() + 1);
}

TEST_CASE("simplified trees forward removed basins to the surviving leaf") {
  const ScalarField f = pits({{6, 6, 2.0, 2.5}, {17, 17, 1.6, 2.5}, {20, 3, 0.1, 1.5}});
  const MergeTree full = build_join_tree(f);
  const MergeTree simple = simplify(full, 0.2);
  REQUIRE(simple.leaf_count() < full.leaf_count());
  const MorseMapping m = morse_mapping(simple, f, simple, f);
  CHECK(m.double_pairs.size() == simple.leaf_count());
  CHECK(m.forward_only.empty());
  CHECK(m.backward_only.empty());
}

TEST_CASE("shape mismatch is rejected") {
  const ScalarField a(2, 2, {0, 1, 2, 3}), b(1, 4, {0, 1, 2, 3});
  CHECK_THROWS_AS(morse_mapping(build_join_tree(a), a, build_join_tree(b), b), InputError);
}
