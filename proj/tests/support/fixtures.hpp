#pragma once

#include <optional>
#include <vector>

#include "mtc/labeling.hpp"
#include "mtc/merge_tree.hpp"

namespace fixtures {

struct Node {
  double f;
  std::optional<mtc::VertexId> parent;
  std::optional<mtc::Point2> at = std::nullopt;
};

inline mtc::MergeTree tree(mtc::TreeKind kind, const std::vector<Node>& nodes) {
  std::vector<mtc::TreeVertex> vs;
  for (const auto& n : nodes) {
    mtc::TreeVertex v;
    v.value = n.f;
    v.parent = n.parent;
    v.coords = n.at;
    vs.push_back(v);
  }
  return mtc::MergeTree(kind, std::move(vs));
}

// Three-leaf pair whose leaves 0 and 1 merge first in `a`, leaves 1 and 2 in `b`.
// Vertex ids: 0..2 leaves, 3 inner merge, 4 root.
inline mtc::MergeTree three_leaf_a() {
  return tree(mtc::TreeKind::Join, {{2.0, 3}, {3.0, 3}, {1.0, 4}, {4.7, 4}, {5.2, std::nullopt}});
}
inline mtc::MergeTree three_leaf_b() {
  return tree(mtc::TreeKind::Join, {{2.0, 4}, {3.0, 3}, {1.0, 3}, {4.7, 4}, {5.2, std::nullopt}});
}

// Four-leaf pivot and three-leaf target on a line; see the labeling tests.
// Pivot ids: 0..3 leaves, 4 = merge(0,1), 5 = merge(2,3), 6 root.
inline mtc::MergeTree four_leaf_pivot() {
  return tree(mtc::TreeKind::Join, {{1.0, 4, mtc::Point2{0, 0}},
                                    {1.0, 4, mtc::Point2{2, 0}},
                                    {2.0, 5, mtc::Point2{4, 0}},
                                    {1.0, 5, mtc::Point2{6, 0}},
                                    {3.0, 6, mtc::Point2{1, 0}},
                                    {3.0, 6, mtc::Point2{5, 0}},
                                    {4.0, std::nullopt, mtc::Point2{3, 0}}});
}
// Target ids: 0 = A, 1 = B, 2 = C, 3 = merge(A,B), 4 root.
inline mtc::MergeTree three_leaf_target() {
  return tree(mtc::TreeKind::Join, {{1.0, 3, mtc::Point2{0.1, 0}},
                                    {2.0, 3, mtc::Point2{3, 1}},
                                    {1.0, 4, mtc::Point2{6.2, 0}},
                                    {3.0, 4, mtc::Point2{1.5, 0.5}},
                                    {4.0, std::nullopt, mtc::Point2{3, 0}}});
}

inline mtc::MappingConfig worked_config(mtc::DummyMode mode) {
  mtc::MappingConfig c;
  c.lambda = 1.0;
  c.epsilon = 0.5;
  c.dummy_mode = mode;
  return c;
}

}  // namespace fixtures
