#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "mtc/merge_tree.hpp"

namespace mtc {

/// Map from labels 0..n-1 onto tree vertices.
///
/// Several labels may share a vertex. `dummy_labels` records the labels that
/// were completed by a duplicated leaf or an inserted dummy vertex.
struct Labeling {
  std::vector<VertexId> assignment;
  std::set<std::size_t> dummy_labels;

  std::size_t size() const { return assignment.size(); }
  VertexId operator[](std::size_t label) const { return assignment.at(label); }
  bool operator==(const Labeling&) const = default;
};

/// One label per leaf, in increasing vertex-id order.
Labeling leaf_labeling(const MergeTree& tree);

/// Throws TreeError unless every label maps to a vertex of `tree`.
void check_labeling(const MergeTree& tree, const Labeling& labeling);

/// True when every leaf carries at least one label.
bool covers_leaves(const MergeTree& tree, const Labeling& labeling);

enum class DummyMode { Leaf, Vertex };
enum class PivotMode { Global, TimeVarying, PivotFree };

struct MappingConfig {
  double lambda = 0.5;  // 1: tree mapping, 0: Euclidean mapping
  double epsilon = std::numeric_limits<double>::infinity();
  DummyMode dummy_mode = DummyMode::Vertex;
  PivotMode pivot_mode = PivotMode::TimeVarying;

  void validate() const;
};

/// Normalisers applied to the tree and Euclidean distances before blending.
struct DistanceScales {
  double tree = 1.0;
  double euclidean = 1.0;

  /// Maximum of each distance over all vertex pairs of both trees; a zero
  /// maximum leaves the corresponding scale at 1.
  static DistanceScales of_pair(const MergeTree& a, const MergeTree& b);
};

/// Blend of tree and Euclidean vertex distances.
///
/// At the endpoints lambda = 1 and lambda = 0 the raw distances are used;
/// strictly inside (0, 1) both are divided by their pair scales first.
class HybridMetric {
 public:
  HybridMetric(double lambda, DistanceScales scales = {});

  double lambda() const { return lambda_; }
  bool uses_tree() const { return lambda_ > 0.0; }
  bool uses_euclidean() const { return lambda_ < 1.0; }

  double combine(double tree_distance, double euclidean_distance) const;
  double operator()(const MergeTree& tree, VertexId u, VertexId v) const;

 private:
  double lambda_;
  DistanceScales scales_;
};

double hybrid_distance(const MergeTree& tree, VertexId u, VertexId v, double lambda, DistanceScales scales = {});

/// Per-label target vertex; unset labels are still unmatched.
struct LabelTransfer {
  std::vector<std::optional<VertexId>> target;

  std::vector<std::size_t> matched_labels() const;
  std::vector<std::size_t> unmatched_labels() const;
};

/// Euclidean bipartite assignment between the pivot's labelled vertices and
/// the target's leaves; pairs farther apart than `epsilon` are forbidden.
LabelTransfer initial_assignment(const MergeTree& pivot, const Labeling& pivot_labels, const MergeTree& target,
                                 double epsilon);

/// Row per query vertex, column per anchor vertex.
Eigen::MatrixXd signature_rows(const MergeTree& tree, std::span<const VertexId> queries,
                               std::span<const VertexId> anchors, const HybridMetric& metric);

/// Squared Euclidean distance between every row of `a` and every row of `b`.
Eigen::MatrixXd row_distances(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Assigns the remaining target leaves to unmatched pivot labels by
/// comparing their distance signatures to the already matched anchors.
LabelTransfer intermediate_assignment(const MergeTree& pivot, const Labeling& pivot_labels, const MergeTree& target,
                                      const LabelTransfer& transfer, const HybridMetric& metric);

/// Completes the labelling by giving each unmatched pivot label to the
/// target leaf with the closest signature.
Labeling attach_dummy_leaves(const MergeTree& pivot, const Labeling& pivot_labels, const MergeTree& target,
                             const LabelTransfer& transfer, const HybridMetric& metric);

struct LabeledTree {
  MergeTree tree;
  Labeling labels;
};

/// Where a dummy would sit: either on an existing vertex, or strictly
/// inside the edge above `edge_child` at `value`.
struct DummyPlacement {
  VertexId edge_child = 0;
  double value = 0.0;
  std::optional<VertexId> existing;
};

/// Candidate placements for a dummy of the given value: one per edge whose
/// value span contains it, or, when none does, the nearest clamped edge
/// endpoints.
std::vector<DummyPlacement> dummy_candidates(const MergeTree& tree, double value);

/// Distance signature of a candidate placement against anchor vertices.
Eigen::RowVectorXd placement_signature(const MergeTree& tree, const DummyPlacement& placement,
                                       std::optional<Point2> coords, std::span<const VertexId> anchors,
                                       const HybridMetric& metric);

/// Inserts a dummy of `value` on the candidate whose signature is closest
/// to `reference_row`. Returns the modified tree and the labelled vertex.
std::pair<MergeTree, VertexId> place_dummy(const MergeTree& tree, double value, std::optional<Point2> coords,
                                           const Eigen::RowVectorXd& reference_row, std::span<const VertexId> anchors,
                                           const HybridMetric& metric);

/// Completes the labelling by inserting a dummy vertex for every unmatched
/// pivot label at that label's pivot value.
LabeledTree attach_dummy_vertices(const MergeTree& pivot, const Labeling& pivot_labels, const MergeTree& target,
                                  const LabelTransfer& transfer, const HybridMetric& metric);

/// Labels `target` with the pivot's label set: initial, intermediate, then
/// dummy completion.
LabeledTree label_against(const MergeTree& pivot, const Labeling& pivot_labels, const MergeTree& target,
                          const MappingConfig& config);

struct LabeledPair {
  LabeledTree first;
  LabeledTree second;
  bool first_is_pivot = true;
};

/// Shared labelling of two trees; the tree with more leaves (ties: the
/// first) is the pivot.
LabeledPair label_pair(const MergeTree& first, const MergeTree& second, const MappingConfig& config);

struct SeriesLabeling {
  std::vector<MergeTree> trees;      // possibly with dummy vertices
  std::vector<Labeling> labelings;   // empty for the pivot-free mode
  std::size_t pivot = 0;             // initial pivot index
  // Pivot-free mode only: labels instances (i, j) on demand. Unset means
  // label_pair with the run's MappingConfig.
  std::function<LabeledPair(std::size_t, std::size_t)> pair_labeler;

  LabeledPair labeled_pair(std::size_t i, std::size_t j, const MappingConfig& config) const;
};

SeriesLabeling label_series(const std::vector<MergeTree>& trees, const MappingConfig& config);

}  // namespace mtc
