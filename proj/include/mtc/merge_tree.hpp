#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mtc/field.hpp"

namespace mtc {

enum class TreeKind { Join, Split };
enum class Connectivity { Four, Eight };

using VertexId = std::size_t;

struct TreeVertex {
  double value = 0.0;
  std::optional<VertexId> parent;
  std::optional<std::size_t> domain_index;
  std::optional<Point2> coords;
  // Inserted by label completion; may have a single child.
  bool dummy = false;
};

/// Rooted merge tree with per-vertex function values.
///
/// Values are stored in the original field's units for both kinds. A join
/// tree increases towards the root, a split tree decreases towards it;
/// `height()` folds the orientation so that every algorithm can treat the
/// tree as a join tree. Equal heights are ordered by domain index (falling
/// back to the vertex id), which realises a simulation-of-simplicity total
/// order on field-built trees.
class MergeTree {
 public:
  MergeTree(TreeKind kind, std::vector<TreeVertex> vertices);

  TreeKind kind() const { return kind_; }
  VertexId root() const { return root_; }
  std::size_t size() const { return vertices_.size(); }
  std::span<const TreeVertex> vertices() const { return vertices_; }
  const TreeVertex& vertex(VertexId v) const;

  double value(VertexId v) const { return vertex(v).value; }
  double height(VertexId v) const { return kind_ == TreeKind::Join ? value(v) : -value(v); }
  std::optional<VertexId> parent(VertexId v) const { return vertex(v).parent; }
  std::span<const VertexId> children(VertexId v) const;
  bool is_leaf(VertexId v) const { return children(v).empty(); }
  std::size_t depth(VertexId v) const;

  /// Leaves in increasing vertex-id order.
  const std::vector<VertexId>& leaves() const { return leaves_; }
  std::size_t leaf_count() const { return leaves_.size(); }

  /// Strict total order on vertices: by height, then domain index / id.
  bool lower(VertexId a, VertexId b) const;

  VertexId lca(VertexId u, VertexId v) const;
  bool is_ancestor(VertexId ancestor, VertexId v) const;
  double tree_distance(VertexId u, VertexId v) const;
  double euclidean_distance(VertexId u, VertexId v) const;

  /// Returns a copy with a degree-2 dummy vertex subdividing the edge
  /// (child, parent(child)). `value` must lie strictly between the edge's
  /// endpoint values.
  MergeTree with_dummy(VertexId child, double value, std::optional<Point2> coords) const;

 private:
  void check(VertexId v) const;
  std::size_t tie_rank(VertexId v) const;

  TreeKind kind_;
  std::vector<TreeVertex> vertices_;
  VertexId root_ = 0;
  std::vector<std::vector<VertexId>> children_;
  std::vector<VertexId> leaves_;
  std::vector<std::size_t> depth_;
  std::vector<std::vector<VertexId>> up_;  // binary-lifting ancestor table
};

class TreeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

MergeTree build_join_tree(const ScalarField& field, Connectivity connectivity = Connectivity::Four);
MergeTree build_split_tree(const ScalarField& field, Connectivity connectivity = Connectivity::Four);
MergeTree build_merge_tree(const ScalarField& field, TreeKind kind, Connectivity connectivity = Connectivity::Four);

/// Grid neighbours of `index` under the given connectivity.
std::vector<std::size_t> grid_neighbors(std::size_t rows, std::size_t cols, std::size_t index,
                                        Connectivity connectivity);

struct PersistencePair {
  double birth = 0.0;
  double death = 0.0;
  double persistence() const { return death - birth; }
  bool operator==(const PersistencePair&) const = default;
  auto operator<=>(const PersistencePair&) const = default;
};

/// 0-dimensional diagram; pairs are stored as (min, max) of the two values.
struct PersistenceDiagram {
  std::vector<PersistencePair> pairs;
};

/// A leaf branch of the elder-rule decomposition.
struct Branch {
  VertexId leaf;
  VertexId saddle;  // where the branch dies; the root for the essential branch
  bool essential = false;
  double persistence = 0.0;
};

std::vector<Branch> branch_decomposition(const MergeTree& tree);
PersistenceDiagram persistence_pairs(const MergeTree& tree);

/// Removes the least persistent non-essential leaf branch, one at a time,
/// while its persistence is below `threshold`.
MergeTree simplify(const MergeTree& tree, double threshold);

struct PersistenceGraph {
  struct Point {
    double threshold;
    std::size_t pair_count;
  };
  std::vector<Point> points;
};

PersistenceGraph persistence_graph(const MergeTree& tree, std::span<const double> thresholds);

}  // namespace mtc
