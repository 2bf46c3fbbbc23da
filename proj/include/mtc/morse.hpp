#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "mtc/field.hpp"
#include "mtc/labeling.hpp"
#include "mtc/merge_tree.hpp"

namespace mtc {

/// Discrete steepest-descent partition of a grid.
struct BasinMap {
  std::vector<std::size_t> assignment;  // grid index of the minimum each vertex drains to
  std::vector<std::size_t> extrema;     // local minima, ascending grid index
};

/// Each vertex repeatedly steps to its lowest neighbour (ties by grid index)
/// while that neighbour is lower, and is assigned the minimum it reaches.
BasinMap descent_basins(const ScalarField& field, Connectivity connectivity = Connectivity::Four);

/// Basins of the leaves of a tree of the given kind: descent basins for join
/// trees, descent basins of the negated field for split trees.
BasinMap leaf_basins(const ScalarField& field, TreeKind kind, Connectivity connectivity = Connectivity::Four);

using LeafPair = std::pair<VertexId, VertexId>;  // (leaf of first tree, leaf of second tree)

struct MorseMapping {
  std::vector<LeafPair> double_pairs;
  std::vector<LeafPair> forward_only;
  std::vector<LeafPair> backward_only;
};

/// Leaf x of `first` maps forward to the leaf of `second` whose basin in
/// `second_field` contains x's grid position; backward symmetric. Trees may
/// be simplified: a grid minimum whose branch was removed belongs to the leaf
/// its branch merged into.
MorseMapping morse_mapping(const MergeTree& first, const ScalarField& first_field, const MergeTree& second,
                           const ScalarField& second_field, Connectivity connectivity = Connectivity::Four);

/// Shared labels from a Morse mapping: one label per double-connected pair,
/// plus a fresh label and a counterpart dummy vertex for every other leaf.
LabeledPair morse_labels(const MergeTree& first, const ScalarField& first_field, const MergeTree& second,
                         const ScalarField& second_field, Connectivity connectivity = Connectivity::Four,
                         double lambda = 0.5);

}  // namespace mtc
