#include "mtc/morse.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

namespace mtc {

BasinMap descent_basins(const ScalarField& field, Connectivity connectivity) {
  const std::size_t n = field.size();
  auto lower = [&](std::size_t a, std::size_t b) { return field[a] != field[b] ? field[a] < field[b] : a < b; };

  std::vector<std::size_t> next(n);
  BasinMap map;
  for (std::size_t g = 0; g < n; ++g) {
    std::size_t best = g;
    for (std::size_t nb : grid_neighbors(field.rows(), field.cols(), g, connectivity))
      if (lower(nb, best)) best = nb;
    next[g] = best;
    if (best == g) map.extrema.push_back(g);
  }
  // Follow descent chains with memoisation; chains strictly decrease so they terminate.
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  map.assignment.assign(n, kUnset);
  std::vector<std::size_t> path;
  for (std::size_t g = 0; g < n; ++g) {
    std::size_t cur = g;
    path.clear();
    while (map.assignment[cur] == kUnset && next[cur] != cur) {
      path.push_back(cur);
      cur = next[cur];
    }
    const std::size_t sink = map.assignment[cur] == kUnset ? cur : map.assignment[cur];
    map.assignment[cur] = sink;
    for (std::size_t p : path) map.assignment[p] = sink;
  }
  return map;
}

BasinMap leaf_basins(const ScalarField& field, TreeKind kind, Connectivity connectivity) {
  return kind == TreeKind::Join ? descent_basins(field, connectivity) : descent_basins(negate(field), connectivity);
}

namespace {

// Resolves grid minima to leaves of a (possibly simplified) tree of `field`.
class LeafResolver {
 public:
  LeafResolver(const MergeTree& tree, const ScalarField& field, Connectivity connectivity)
      : tree_(tree), full_(build_merge_tree(field, tree.kind(), connectivity)) {
    for (VertexId leaf : tree.leaves()) {
      const auto g = tree.vertex(leaf).domain_index;
      if (!g) throw TreeError("Morse mapping needs domain indices on all leaves");
      leaf_of_grid_[*g] = leaf;
    }
    // Oldest leaf of every subtree of the unsimplified tree.
    std::vector<VertexId> order(full_.size());
    std::iota(order.begin(), order.end(), VertexId{0});
    std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) { return full_.lower(a, b); });
    elder_.assign(full_.size(), 0);
    for (VertexId v : order) {
      elder_[v] = v;
      for (VertexId c : full_.children(v))
        if (elder_[v] == v || full_.lower(elder_[c], elder_[v])) elder_[v] = elder_[c];
    }
    for (VertexId v = 0; v < full_.size(); ++v) full_of_grid_[*full_.vertex(v).domain_index] = v;
  }

  VertexId leaf_for_minimum(std::size_t grid_index) const {
    const auto it = full_of_grid_.find(grid_index);
    if (it == full_of_grid_.end()) throw TreeError("grid minimum is not a vertex of the merge tree");
    std::optional<VertexId> v = it->second;
    while (v) {
      const std::size_t g = *full_.vertex(elder_[*v]).domain_index;
      if (const auto found = leaf_of_grid_.find(g); found != leaf_of_grid_.end()) return found->second;
      v = full_.parent(*v);
    }
    throw TreeError("tree leaves do not belong to the given field");
  }

 private:
  const MergeTree& tree_;
  MergeTree full_;
  std::vector<VertexId> elder_;
  std::map<std::size_t, VertexId> leaf_of_grid_;
  std::map<std::size_t, VertexId> full_of_grid_;
};

}  // namespace

MorseMapping morse_mapping(const MergeTree& first, const ScalarField& first_field, const MergeTree& second,
                           const ScalarField& second_field, Connectivity connectivity) {
  if (!first_field.same_shape(second_field)) throw InputError("Morse mapping needs fields of identical shape");
  if (first.kind() != second.kind()) throw TreeError("Morse mapping needs trees of the same kind");
  const BasinMap basins1 = leaf_basins(first_field, first.kind(), connectivity);
  const BasinMap basins2 = leaf_basins(second_field, second.kind(), connectivity);
  const LeafResolver resolve1(first, first_field, connectivity);
  const LeafResolver resolve2(second, second_field, connectivity);

  std::map<VertexId, VertexId> forward, backward;
  for (VertexId x : first.leaves())
    forward[x] = resolve2.leaf_for_minimum(basins2.assignment[*first.vertex(x).domain_index]);
  for (VertexId y : second.leaves())
    backward[y] = resolve1.leaf_for_minimum(basins1.assignment[*second.vertex(y).domain_index]);

  MorseMapping m;
  for (auto [x, y] : forward) {
    if (backward.at(y) == x)
      m.double_pairs.emplace_back(x, y);
    else
      m.forward_only.emplace_back(x, y);
  }
  for (auto [y, x] : backward)
    if (forward.at(x) != y) m.backward_only.emplace_back(x, y);
  return m;
}

LabeledPair morse_labels(const MergeTree& first, const ScalarField& first_field, const MergeTree& second,
                         const ScalarField& second_field, Connectivity connectivity, double lambda) {
  const MorseMapping mapping = morse_mapping(first, first_field, second, second_field, connectivity);
  const HybridMetric metric(lambda, lambda > 0.0 && lambda < 1.0 ? DistanceScales::of_pair(first, second)
                                                                 : DistanceScales{});

  std::vector<VertexId> anchors1, anchors2;
  for (auto [x, y] : mapping.double_pairs) {
    anchors1.push_back(x);
    anchors2.push_back(y);
  }
  LabeledPair out{{first, {}}, {second, {}}, true};
  out.first.labels.assignment = anchors1;
  out.second.labels.assignment = anchors2;

  // Leaves of `from` without a double partner get a fresh label and a dummy in `to`.
  auto add_fresh = [&](const std::vector<LeafPair>& pairs, bool from_first) {
    for (const auto& pair : pairs) {
      const VertexId leaf = from_first ? pair.first : pair.second;
      const MergeTree& source = from_first ? first : second;
      LabeledTree& target = from_first ? out.second : out.first;
      LabeledTree& own = from_first ? out.first : out.second;
      const std::vector<VertexId>& source_anchors = from_first ? anchors1 : anchors2;
      const std::vector<VertexId>& target_anchors = from_first ? anchors2 : anchors1;

      const VertexId leaf_list[] = {leaf};
      const Eigen::MatrixXd row = signature_rows(source, leaf_list, source_anchors, metric);
      auto [tree, vertex] = place_dummy(target.tree, source.value(leaf), source.vertex(leaf).coords, row.row(0),
                                        target_anchors, metric);
      target.tree = std::move(tree);
      const std::size_t label = own.labels.assignment.size();
      own.labels.assignment.push_back(leaf);
      target.labels.assignment.push_back(vertex);
      target.labels.dummy_labels.insert(label);
    }
  };
  add_fresh(mapping.forward_only, true);
  add_fresh(mapping.backward_only, false);
  return out;
}

}  // namespace mtc
