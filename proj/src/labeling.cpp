#include "mtc/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mtc/assignment.hpp"

namespace mtc {

Labeling leaf_labeling(const MergeTree& tree) {
  Labeling l;
  l.assignment = tree.leaves();
  return l;
}

void check_labeling(const MergeTree& tree, const Labeling& labeling) {
  for (std::size_t i = 0; i < labeling.size(); ++i)
    if (labeling.assignment[i] >= tree.size())
      throw TreeError("label " + std::to_string(i) + " maps to missing vertex " +
                      std::to_string(labeling.assignment[i]));
  for (std::size_t d : labeling.dummy_labels)
    if (d >= labeling.size()) throw TreeError("dummy label " + std::to_string(d) + " is out of range");
}

bool covers_leaves(const MergeTree& tree, const Labeling& labeling) {
  for (VertexId leaf : tree.leaves())
    if (std::find(labeling.assignment.begin(), labeling.assignment.end(), leaf) == labeling.assignment.end())
      return false;
  return true;
}

void MappingConfig::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be non-negative");
}

DistanceScales DistanceScales::of_pair(const MergeTree& a, const MergeTree& b) {
  double max_tree = 0.0, max_euclid = 0.0;
  for (const MergeTree* t : {&a, &b}) {
    for (VertexId u = 0; u < t->size(); ++u) {
      for (VertexId v = u + 1; v < t->size(); ++v) {
        max_tree = std::max(max_tree, t->tree_distance(u, v));
        if (t->vertex(u).coords && t->vertex(v).coords) max_euclid = std::max(max_euclid, t->euclidean_distance(u, v));
      }
    }
  }
  DistanceScales s;
  if (max_tree > 0.0) s.tree = max_tree;
  if (max_euclid > 0.0) s.euclidean = max_euclid;
  return s;
}

HybridMetric::HybridMetric(double lambda, DistanceScales scales) : lambda_(lambda), scales_(scales) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
}

double HybridMetric::combine(double tree_distance, double euclidean_distance) const {
  if (lambda_ == 1.0) return tree_distance;
  if (lambda_ == 0.0) return euclidean_distance;
  return lambda_ * tree_distance / scales_.tree + (1.0 - lambda_) * euclidean_distance / scales_.euclidean;
}

double HybridMetric::operator()(const MergeTree& tree, VertexId u, VertexId v) const {
  const double dt = uses_tree() ? tree.tree_distance(u, v) : 0.0;
  const double de = uses_euclidean() ? tree.euclidean_distance(u, v) : 0.0;
  return combine(dt, de);
}

double hybrid_distance(const MergeTree& tree, VertexId u, VertexId v, double lambda, DistanceScales scales) {
  return HybridMetric(lambda, scales)(tree, u, v);
}

std::vector<std::size_t> LabelTransfer::matched_labels() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < target.size(); ++i)
    if (target[i]) out.push_back(i);
  return out;
}

std::vector<std::size_t> LabelTransfer::unmatched_labels() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < target.size(); ++i)
    if (!target[i]) out.push_back(i);
  return out;
}

LabelTransfer initial_assignment(const MergeTree& pivot, const Labeling& pivot_labels, const MergeTree& target,
                                 double epsilon) {
  const auto& leaves = target.leaves();
  const std::size_t n = pivot_labels.size();
  Eigen::MatrixXd w(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(leaves.size()));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = pivot.vertex(pivot_labels[i]).coords;
    for (std::size_t j = 0; j < leaves.size(); ++j) {
      const auto& b = target.vertex(leaves[j]).coords;
      if (!a || !b) throw TreeError("initial assignment needs coordinates on all labelled vertices and leaves");
      const double d = std::hypot(a->x - b->x, a->y - b->y);
      w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          d <= epsilon ? d : std::numeric_limits<double>::infinity();
    }
  }
  LabelTransfer t;
  t.target.assign(n, std::nullopt);
  for (auto [label, col] : min_cost_assignment(w).pairs) t.target[label] = leaves[col];
  return t;
}

Eigen::MatrixXd signature_rows(const MergeTree& tree, std::span<const VertexId> queries,
                               std::span<const VertexId> anchors, const HybridMetric& metric) {
  Eigen::MatrixXd d(static_cast<Eigen::Index>(queries.size()), static_cast<Eigen::Index>(anchors.size()));
  for (std::size_t i = 0; i < queries.size(); ++i)
    for (std::size_t j = 0; j < anchors.size(); ++j)
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = metric(tree, queries[i], anchors[j]);
  return d;
}

Eigen::MatrixXd row_distances(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd w(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.rows(); ++j) w(i, j) = (a.row(i) - b.row(j)).squaredNorm();
  return w;
}

namespace {

struct Anchors {
  std::vector<VertexId> pivot;
  std::vector<VertexId> target;
};

Anchors anchors_of(const Labeling& pivot_labels, const LabelTransfer& transfer) {
  Anchors a;
  for (std::size_t label : transfer.matched_labels()) {
    a.pivot.push_back(pivot_labels[label]);
    a.target.push_back(*transfer.target[label]);
  }
  return a;
}

std::vector<VertexId> pivot_vertices(const Labeling& pivot_labels, const std::vector<std::size_t>& labels) {
  std::vector<VertexId> out;
  for (std::size_t l : labels) out.push_back(pivot_labels[l]);
  return out;
}

std::size_t argmin_row(const Eigen::RowVectorXd& reference, const Eigen::MatrixXd& candidates) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < candidates.rows(); ++j) {
    const double d = (reference - candidates.row(j)).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<std::size_t>(j);
    }
  }
  return best;
}

}  // namespace

LabelTransfer intermediate_assignment(const MergeTree& pivot, const Labeling& pivot_labels, const MergeTree& target,
                                      const LabelTransfer& transfer, const HybridMetric& metric) {
  std::vector<VertexId> free_leaves;
  for (VertexId leaf : target.leaves())
    if (std::find(transfer.target.begin(), transfer.target.end(), std::optional<VertexId>(leaf)) ==
        transfer.target.end())
      free_leaves.push_back(leaf);
  const auto free_labels = transfer.unmatched_labels();
  if (free_leaves.empty() || free_labels.empty()) return transfer;

  const Anchors anchors = anchors_of(pivot_labels, transfer);
  const auto queries = pivot_vertices(pivot_labels, free_labels);
  const Eigen::MatrixXd d1 = signature_rows(pivot, queries, anchors.pivot, metric);
  const Eigen::MatrixXd d2 = signature_rows(target, free_leaves, anchors.target, metric);

  LabelTransfer out = transfer;
  for (auto [row, col] : min_cost_assignment(row_distances(d1, d2)).pairs) out.target[free_labels[row]] = free_leaves[col];
  return out;
}

Labeling attach_dummy_leaves(const MergeTree& pivot, const Labeling& pivot_labels, const MergeTree& target,
                             const LabelTransfer& transfer, const HybridMetric& metric) {
  Labeling out;
  out.assignment.resize(transfer.target.size());
  const auto free_labels = transfer.unmatched_labels();
  for (std::size_t l : transfer.matched_labels()) out.assignment[l] = *transfer.target[l];
  if (free_labels.empty()) return out;

  const Anchors anchors = anchors_of(pivot_labels, transfer);
  const auto& leaves = target.leaves();
  const Eigen::MatrixXd d1 = signature_rows(pivot, pivot_vertices(pivot_labels, free_labels), anchors.pivot, metric);
  const Eigen::MatrixXd d2 = signature_rows(target, leaves, anchors.target, metric);
  for (std::size_t k = 0; k < free_labels.size(); ++k) {
    out.assignment[free_labels[k]] = leaves[argmin_row(d1.row(static_cast<Eigen::Index>(k)), d2)];
    out.dummy_labels.insert(free_labels[k]);
  }
  return out;
}

std::vector<DummyPlacement> dummy_candidates(const MergeTree& tree, double value) {
  const double h = tree.kind() == TreeKind::Join ? value : -value;
  std::vector<DummyPlacement> out;
  auto add_existing = [&](VertexId child, VertexId v) {
    for (const auto& c : out)
      if (c.existing == v) return;
    out.push_back({child, tree.value(v), v});
  };

  if (tree.size() == 1) {
    out.push_back({tree.root(), tree.value(tree.root()), tree.root()});
    return out;
  }
  for (VertexId c = 0; c < tree.size(); ++c) {
    const auto p = tree.parent(c);
    if (!p) continue;
    const double lo = tree.height(c), hi = tree.height(*p);
    if (h < lo || h > hi) continue;
    if (h == lo)
      add_existing(c, c);
    else if (h == hi)
      add_existing(c, *p);
    else
      out.push_back({c, value, std::nullopt});
  }
  if (!out.empty()) return out;

  // Outside every edge span: clamp to the nearest edge endpoints.
  double best_gap = std::numeric_limits<double>::infinity();
  for (VertexId c = 0; c < tree.size(); ++c) {
    const auto p = tree.parent(c);
    if (!p) continue;
    const double lo = tree.height(c), hi = tree.height(*p);
    best_gap = std::min(best_gap, h < lo ? lo - h : h - hi);
  }
  for (VertexId c = 0; c < tree.size(); ++c) {
    const auto p = tree.parent(c);
    if (!p) continue;
    const double lo = tree.height(c), hi = tree.height(*p);
    if (h < lo && lo - h == best_gap) add_existing(c, c);
    if (h > hi && h - hi == best_gap) add_existing(c, *p);
  }
  return out;
}

Eigen::RowVectorXd placement_signature(const MergeTree& tree, const DummyPlacement& placement,
                                       std::optional<Point2> coords, std::span<const VertexId> anchors,
                                       const HybridMetric& metric) {
  Eigen::RowVectorXd row(static_cast<Eigen::Index>(anchors.size()));
  for (std::size_t j = 0; j < anchors.size(); ++j) {
    const VertexId a = anchors[j];
    double value;
    if (placement.existing) {
      value = metric(tree, *placement.existing, a);
    } else {
      double dt = 0.0, de = 0.0;
      if (metric.uses_tree()) {
        if (tree.is_ancestor(placement.edge_child, a)) {
          dt = std::abs(placement.value - tree.value(a));
        } else {
          const VertexId top = tree.lca(*tree.parent(placement.edge_child), a);
          dt = std::abs(placement.value - tree.value(top)) + std::abs(tree.value(a) - tree.value(top));
        }
      }
      if (metric.uses_euclidean()) {
        const auto& b = tree.vertex(a).coords;
        if (!coords || !b) throw TreeError("hybrid distance with lambda < 1 needs coordinates");
        de = std::hypot(coords->x - b->x, coords->y - b->y);
      }
      value = metric.combine(dt, de);
    }
    row(static_cast<Eigen::Index>(j)) = value;
  }
  return row;
}

std::pair<MergeTree, VertexId> place_dummy(const MergeTree& tree, double value, std::optional<Point2> coords,
                                           const Eigen::RowVectorXd& reference_row, std::span<const VertexId> anchors,
                                           const HybridMetric& metric) {
  const auto candidates = dummy_candidates(tree, value);
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(candidates.size()), static_cast<Eigen::Index>(anchors.size()));
  for (std::size_t k = 0; k < candidates.size(); ++k)
    rows.row(static_cast<Eigen::Index>(k)) = placement_signature(tree, candidates[k], coords, anchors, metric);
  const DummyPlacement& best = candidates[argmin_row(reference_row, rows)];
  if (best.existing) return {tree, *best.existing};
  MergeTree out = tree.with_dummy(best.edge_child, best.value, coords);
  const VertexId inserted = out.size() - 1;
  return {std::move(out), inserted};
}

LabeledTree attach_dummy_vertices(const MergeTree& pivot, const Labeling& pivot_labels, const MergeTree& target,
                                  const LabelTransfer& transfer, const HybridMetric& metric) {
  Labeling labels;
  labels.assignment.resize(transfer.target.size());
  for (std::size_t l : transfer.matched_labels()) labels.assignment[l] = *transfer.target[l];
  const auto free_labels = transfer.unmatched_labels();
  if (free_labels.empty()) return {target, labels};

  const Anchors anchors = anchors_of(pivot_labels, transfer);
  const Eigen::MatrixXd d1 = signature_rows(pivot, pivot_vertices(pivot_labels, free_labels), anchors.pivot, metric);
  MergeTree current = target;
  for (std::size_t k = 0; k < free_labels.size(); ++k) {
    const VertexId source = pivot_labels[free_labels[k]];
    auto [next, vertex] = place_dummy(current, pivot.value(source), pivot.vertex(source).coords,
                                      d1.row(static_cast<Eigen::Index>(k)), anchors.target, metric);
    current = std::move(next);
    labels.assignment[free_labels[k]] = vertex;
    labels.dummy_labels.insert(free_labels[k]);
  }
  return {std::move(current), std::move(labels)};
}

LabeledTree label_against(const MergeTree& pivot, const Labeling& pivot_labels, const MergeTree& target,
                          const MappingConfig& config) {
  config.validate();
  check_labeling(pivot, pivot_labels);
  if (target.leaf_count() > pivot_labels.size())
    throw TreeError("target has " + std::to_string(target.leaf_count()) + " leaves but the pivot only " +
                    std::to_string(pivot_labels.size()) + " labels");
  const bool blended = config.lambda > 0.0 && config.lambda < 1.0;
  const HybridMetric metric(config.lambda, blended ? DistanceScales::of_pair(pivot, target) : DistanceScales{});

  LabelTransfer transfer = initial_assignment(pivot, pivot_labels, target, config.epsilon);
  transfer = intermediate_assignment(pivot, pivot_labels, target, transfer, metric);
  if (config.dummy_mode == DummyMode::Leaf)
    return {target, attach_dummy_leaves(pivot, pivot_labels, target, transfer, metric)};
  return attach_dummy_vertices(pivot, pivot_labels, target, transfer, metric);
}

LabeledPair label_pair(const MergeTree& first, const MergeTree& second, const MappingConfig& config) {
  const bool first_pivot = first.leaf_count() >= second.leaf_count();
  const MergeTree& pivot = first_pivot ? first : second;
  const MergeTree& other = first_pivot ? second : first;
  LabeledTree pivot_side{pivot, leaf_labeling(pivot)};
  LabeledTree other_side = label_against(pivot, pivot_side.labels, other, config);
  if (first_pivot) return {std::move(pivot_side), std::move(other_side), true};
  return {std::move(other_side), std::move(pivot_side), false};
}

LabeledPair SeriesLabeling::labeled_pair(std::size_t i, std::size_t j, const MappingConfig& config) const {
  if (pair_labeler) return pair_labeler(i, j);
  return label_pair(trees.at(i), trees.at(j), config);
}

SeriesLabeling label_series(const std::vector<MergeTree>& trees, const MappingConfig& config) {
  if (trees.empty()) throw std::invalid_argument("empty series");
  config.validate();
  SeriesLabeling out;
  out.trees = trees;
  std::size_t pivot = 0;
  for (std::size_t i = 1; i < trees.size(); ++i)
    if (trees[i].leaf_count() > trees[pivot].leaf_count()) pivot = i;
  out.pivot = pivot;
  if (config.pivot_mode == PivotMode::PivotFree) return out;

  out.labelings.resize(trees.size());
  out.labelings[pivot] = leaf_labeling(trees[pivot]);
  auto assign = [&](std::size_t from, std::size_t to) {
    LabeledTree lt = label_against(out.trees[from], out.labelings[from], trees[to], config);
    out.trees[to] = std::move(lt.tree);
    out.labelings[to] = std::move(lt.labels);
  };
  if (config.pivot_mode == PivotMode::Global) {
    for (std::size_t j = 0; j < trees.size(); ++j)
      if (j != pivot) assign(pivot, j);
    return out;
  }
  for (std::size_t j = pivot + 1; j < trees.size(); ++j) assign(j - 1, j);
  for (std::size_t j = pivot; j-- > 0;) assign(j + 1, j);
  return out;
}

}  // namespace mtc
