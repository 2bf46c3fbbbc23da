#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "mtc/analysis.hpp"
#include "mtc/synthetic.hpp"

using namespace mtc;

namespace {

DistanceMatrix from_profile(const std::vector<double>& profile) {
  const auto l = static_cast<Eigen::Index>(profile.size() + 1);
  DistanceMatrix m = DistanceMatrix::Zero(l, l);
  for (Eigen::Index k = 0; k + 1 < l; ++k) m(k, k + 1) = m(k + 1, k) = profile[static_cast<std::size_t>(k)];
  return m;
}

std::vector<MergeTree> trees_of(const std::vector<ScalarField>& fields, TreeKind kind) {
  std::vector<MergeTree> out;
  for (const auto& f : fields) out.push_back(build_merge_tree(f, kind));
  return out;
}

std::vector<ScalarField> random_fields(std::mt19937_64& rng, std::size_t count) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ScalarField> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> v(25);
    for (double& x : v) x = u(rng);
    out.emplace_back(5, 5, v);
  }
  return out;
}

}  // namespace

TEST_CASE("metric names round-trip") {
  for (SeriesMetric m : {SeriesMetric::Interleaving, SeriesMetric::CopheneticL1, SeriesMetric::CopheneticL2,
                         SeriesMetric::Bottleneck, SeriesMetric::Wasserstein1, SeriesMetric::Field})
    CHECK(parse_metric(metric_name(m)) == m);
  CHECK(parse_metric("interleaving") == SeriesMetric::Interleaving);
  CHECK_THROWS(parse_metric("dX"));
}

TEST_CASE("pairwise matrices") {
  SeriesLabeling pair;
  pair.trees = {fixtures::three_leaf_a(), fixtures::three_leaf_b()};
  pair.labelings = {leaf_labeling(pair.trees[0]), leaf_labeling(pair.trees[0])};
  const DistanceMatrix m = pairwise_matrix(pair, SeriesMetric::Interleaving, MappingConfig{});
  CHECK(m(0, 0) == 0.0);
  CHECK(m(0, 1) == 0.5);
  CHECK(m(1, 0) == 0.5);

  SeriesLabeling same;
  same.trees = {fixtures::three_leaf_a(), fixtures::three_leaf_a()};
  same.labelings = {leaf_labeling(same.trees[0]), leaf_labeling(same.trees[0])};
  CHECK(pairwise_matrix(same, SeriesMetric::Interleaving, MappingConfig{}).isZero(0.0));

  CHECK_THROWS(pairwise_matrix(pair, SeriesMetric::Field, MappingConfig{}));
}

TEST_CASE("property: matrices are symmetric, zero-diagonal and cell-exact") {
  std::mt19937_64 rng(97);
  const auto fields = random_fields(rng, 5);
  const auto trees = trees_of(fields, TreeKind::Join);
  for (PivotMode mode : {PivotMode::TimeVarying, PivotMode::PivotFree}) {
    MappingConfig cfg;
    cfg.pivot_mode = mode;
    const SeriesLabeling s = label_series(trees, cfg);
    for (SeriesMetric metric : {SeriesMetric::Interleaving, SeriesMetric::CopheneticL1, SeriesMetric::CopheneticL2,
                                SeriesMetric::Bottleneck, SeriesMetric::Wasserstein1, SeriesMetric::Field}) {
      const DistanceMatrix m = pairwise_matrix(s, metric, cfg, fields);
      CHECK(m.rows() == 5);
      CHECK((m - m.transpose()).isZero(0.0));
      CHECK(m.diagonal().isZero(0.0));
      CHECK(m.minCoeff() >= 0.0);
      for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i + 1; j < 5; ++j) {
          double d = 0.0;
          if (metric == SeriesMetric::Field) {
            d = field_distance(fields[i], fields[j]);
          } else if (mode == PivotMode::PivotFree && is_label_metric(metric)) {
            const LabeledPair p = label_pair(trees[i], trees[j], cfg);
            d = pair_distance(p.first.tree, p.first.labels, p.second.tree, p.second.labels, metric);
          } else {
            const Labeling none;
            const bool labelled = is_label_metric(metric);
            d = pair_distance(s.trees[i], labelled ? s.labelings[i] : none, s.trees[j],
                              labelled ? s.labelings[j] : none, metric);
          }
          CHECK(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) == d);
        }
    }
  }
}

TEST_CASE("transition rules") {
  CHECK(detect_transitions(from_profile({0.1, 0.1, 5.0, 0.1}), AbsoluteThreshold{1.0}) ==
        std::vector<std::size_t>{2});
  CHECK(detect_transitions(from_profile({0.3, 0.3, 0.3, 0.3}), RobustZScore{3.0}).empty());
  CHECK(detect_transitions(from_profile({0.1, 0.12, 0.09, 3.0, 0.11, 0.1}), RobustZScore{3.0}) ==
        std::vector<std::size_t>{3});
  // Zero spread: anything strictly above the median is flagged.
  CHECK(detect_transitions(from_profile({0, 0, 0, 1, 0}), RobustZScore{3.0}) == std::vector<std::size_t>{3});
}

TEST_CASE("segments between transitions") {
  const std::size_t t[] = {0, 3, 6, 9};
  const auto s = segments(t, 12);
  REQUIRE(s.size() == 5);
  CHECK(s[0] == std::pair<std::size_t, std::size_t>{0, 0});
  CHECK(s[1] == std::pair<std::size_t, std::size_t>{1, 3});
  CHECK(s[4] == std::pair<std::size_t, std::size_t>{10, 11});
  CHECK(segments({}, 4).size() == 1);
}

TEST_CASE("diagnosis of the three-leaf pair") {
  const MergeTree a = fixtures::three_leaf_a(), b = fixtures::three_leaf_b();
  const Labeling l = leaf_labeling(a);
  const Diagnosis d = diagnose_pair(a, l, b, l);
  CHECK(d.transition);
  CHECK(d.distance == 0.5);
  REQUIRE(d.culprits.size() == 2);
  CHECK(d.culprits[0].label_i == 0);
  CHECK(d.culprits[0].label_j == 1);
  CHECK(d.culprits[1].label_i == 1);
  CHECK(d.culprits[1].label_j == 2);
  for (const auto& c : d.culprits) {
    CHECK(c.delta == 0.5);
    CHECK(std::abs(a.value(a.lca(c.vertex_a_i, c.vertex_a_j)) - b.value(b.lca(c.vertex_b_i, c.vertex_b_j))) ==
          d.distance);
  }

  const Diagnosis same = diagnose_pair(a, l, a, l);
  CHECK_FALSE(same.transition);
  CHECK(same.distance == 0.0);
  CHECK(same.culprits.empty());
}

TEST_CASE("vanishing bump: one transition, culprit at the bump") {
  const std::size_t k = 3;
  const auto s = synthetic::vanishing_series(6, k);
  const auto trees = trees_of(s.fields, TreeKind::Split);
  const MappingConfig cfg;
  const SeriesLabeling l = label_series(trees, cfg);
  const DistanceMatrix m = pairwise_matrix(l, SeriesMetric::Interleaving, cfg);
  CHECK(detect_transitions(m, RobustZScore{3.0}) == std::vector<std::size_t>{k - 1});

  const Diagnosis d = diagnose_pair(l.trees[k - 1], l.labelings[k - 1], l.trees[k], l.labelings[k]);
  REQUIRE_FALSE(d.culprits.empty());
  const synthetic::Bump& bump = s.moving[k - 1];
  bool located = false;
  for (const auto& c : d.culprits)
    for (const auto& p : {c.coords_a_i, c.coords_a_j})
      if (p && std::abs(p->x - bump.col) <= 1.0 && std::abs(p->y - bump.row) <= 1.0) located = true;
  CHECK(located);
}

TEST_CASE("lag profile") {
  const auto s = synthetic::periodic_series(8);
  const DistanceMatrix m = pairwise_matrix(SeriesLabeling{}, SeriesMetric::Field, MappingConfig{}, s.fields);
  const auto lags = lag_profile(m);
  REQUIRE(lags.size() == 31);
  for (std::size_t lag : {8, 16, 24}) CHECK(lags[lag - 1].mean <= 1e-9);
  CHECK(lags[0].lag == 1);

  CHECK(lag_profile(DistanceMatrix::Zero(5, 5))[2].mean == 0.0);

  // Linear drift f_t = t * g: d(i, i + k) = k * |g|, increasing in k.
  std::vector<ScalarField> drift;
  for (int t = 0; t < 6; ++t) drift.emplace_back(1, 3, std::vector<double>{1.0 * t, 2.0 * t, -1.0 * t});
  const auto dl = lag_profile(pairwise_matrix(SeriesLabeling{}, SeriesMetric::Field, MappingConfig{}, drift));
  for (std::size_t k = 0; k < dl.size(); ++k) {
    CHECK(dl[k].mean > 0.0);
    if (k) CHECK(dl[k].mean > dl[k - 1].mean);
  }
}

TEST_CASE("period detection") {
  std::vector<LagValue> p;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> noise(0.9, 1.1);
  for (std::size_t k = 1; k < 32; ++k) p.push_back({k, k % 8 == 0 ? 0.0 : noise(rng)});
  CHECK(detect_period(p) == std::optional<std::size_t>{8});

  std::vector<LagValue> mono;
  for (std::size_t k = 1; k < 20; ++k) mono.push_back({k, static_cast<double>(k)});
  CHECK_FALSE(detect_period(mono));
}

TEST_CASE("classical MDS") {
  DistanceMatrix line(3, 3);
  line << 0, 1, 2, 1, 0, 1, 2, 1, 0;
  const Eigen::MatrixXd e = mds_embed(line);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) CHECK(std::abs((e.row(i) - e.row(j)).norm() - line(i, j)) <= 1e-9);

  CHECK(mds_embed(DistanceMatrix::Zero(4, 4)).isZero(0.0));

  std::mt19937_64 rng(103);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd pts(7, 4);
    for (Eigen::Index i = 0; i < pts.rows(); ++i)
      for (Eigen::Index j = 0; j < pts.cols(); ++j) pts(i, j) = n(rng);
    DistanceMatrix d(7, 7);
    for (Eigen::Index i = 0; i < 7; ++i)
      for (Eigen::Index j = 0; j < 7; ++j) d(i, j) = (pts.row(i) - pts.row(j)).norm();
    const Eigen::MatrixXd y = mds_embed(d);
    CHECK(y.colwise().mean().norm() <= 1e-9);
    for (Eigen::Index i = 0; i < 7; ++i)
      for (Eigen::Index j = 0; j < 7; ++j) CHECK((y.row(i) - y.row(j)).norm() <= d(i, j) + 1e-6);
  }
  CHECK_THROWS(mds_embed(DistanceMatrix::Zero(2, 2)));
}

TEST_CASE("series report") {
  const auto s = synthetic::orbit_series();
  const auto trees = trees_of(s.fields, TreeKind::Split);
  const MappingConfig cfg;
  const SeriesLabeling l = label_series(trees, cfg);
  const SeriesReport r = analyze_series(l, SeriesMetric::Interleaving, cfg);
  REQUIRE(r.adjacent_profile.size() == 11);
  for (std::size_t k = 0; k < 11; ++k)
    CHECK(r.adjacent_profile[k] == r.distance_matrix(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k + 1)));
  for (std::size_t t = 1; t < r.transitions.size(); ++t) CHECK(r.transitions[t - 1].index < r.transitions[t].index);
  for (const auto& t : r.transitions) CHECK_FALSE(t.culprits.empty());
  REQUIRE(r.mds);
  CHECK(r.mds->rows() == 12);
}
