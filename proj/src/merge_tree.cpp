#include "mtc/merge_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace mtc {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Attaches a's set under b's representative.
  void attach(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

MergeTree::MergeTree(TreeKind kind, std::vector<TreeVertex> vertices) : kind_(kind), vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n == 0) throw TreeError("merge tree must have at least one vertex");

  children_.assign(n, {});
  std::optional<VertexId> root;
  for (VertexId v = 0; v < n; ++v) {
    const auto& vx = vertices_[v];
    if (!std::isfinite(vx.value)) throw TreeError("vertex " + std::to_string(v) + " has a non-finite value");
    if (!vx.parent) {
      if (root) throw TreeError("merge tree has more than one root");
      root = v;
      continue;
    }
    if (*vx.parent >= n || *vx.parent == v)
      throw TreeError("vertex " + std::to_string(v) + " has an invalid parent");
    children_[*vx.parent].push_back(v);
  }
  if (!root) throw TreeError("merge tree has no root");
  root_ = *root;

  // Depths by walking down from the root; unreachable vertices mean a cycle.
  depth_.assign(n, std::numeric_limits<std::size_t>::max());
  std::vector<VertexId> stack{root_};
  depth_[root_] = 0;
  std::size_t seen = 0;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    ++seen;
    for (VertexId c : children_[v]) {
      depth_[c] = depth_[v] + 1;
      stack.push_back(c);
    }
  }
  if (seen != n) throw TreeError("merge tree parent links contain a cycle");

  for (VertexId v = 0; v < n; ++v) {
    if (children_[v].empty() && (v != root_ || n == 1)) leaves_.push_back(v);
    if (vertices_[v].parent && !lower(v, *vertices_[v].parent))
      throw TreeError("vertex " + std::to_string(v) + " is not ordered below its parent");
    if (v != root_ && !vertices_[v].dummy && children_[v].size() == 1)
      throw TreeError("vertex " + std::to_string(v) + " is an uncollapsed degree-2 vertex");
  }

  std::size_t levels = 1;
  while ((std::size_t{1} << levels) < n) ++levels;
  up_.assign(levels, std::vector<VertexId>(n));
  for (VertexId v = 0; v < n; ++v) up_[0][v] = vertices_[v].parent.value_or(v);
  for (std::size_t k = 1; k < levels; ++k)
    for (VertexId v = 0; v < n; ++v) up_[k][v] = up_[k - 1][up_[k - 1][v]];
}

void MergeTree::check(VertexId v) const {
  if (v >= vertices_.size()) throw TreeError("unknown vertex id " + std::to_string(v));
}

const TreeVertex& MergeTree::vertex(VertexId v) const {
  check(v);
  return vertices_[v];
}

std::span<const VertexId> MergeTree::children(VertexId v) const {
  check(v);
  return children_[v];
}

std::size_t MergeTree::depth(VertexId v) const {
  check(v);
  return depth_[v];
}

std::size_t MergeTree::tie_rank(VertexId v) const { return vertices_[v].domain_index.value_or(v); }

bool MergeTree::lower(VertexId a, VertexId b) const {
  const double ha = height(a), hb = height(b);
  if (ha != hb) return ha < hb;
  return tie_rank(a) < tie_rank(b);
}

VertexId MergeTree::lca(VertexId u, VertexId v) const {
  check(u);
  check(v);
  if (depth_[u] < depth_[v]) std::swap(u, v);
  std::size_t diff = depth_[u] - depth_[v];
  for (std::size_t k = 0; diff; ++k, diff >>= 1)
    if (diff & 1) u = up_[k][u];
  if (u == v) return u;
  for (std::size_t k = up_.size(); k-- > 0;) {
    if (up_[k][u] != up_[k][v]) {
      u = up_[k][u];
      v = up_[k][v];
    }
  }
  return up_[0][u];
}

bool MergeTree::is_ancestor(VertexId ancestor, VertexId v) const { return lca(ancestor, v) == ancestor; }

double MergeTree::tree_distance(VertexId u, VertexId v) const {
  const double top = value(lca(u, v));
  return std::abs(value(u) - top) + std::abs(value(v) - top);
}

double MergeTree::euclidean_distance(VertexId u, VertexId v) const {
  const auto& a = vertex(u).coords;
  const auto& b = vertex(v).coords;
  if (!a || !b)
    throw TreeError("euclidean distance needs coordinates on vertices " + std::to_string(u) + " and " +
                    std::to_string(v));
  return std::hypot(a->x - b->x, a->y - b->y);
}

MergeTree MergeTree::with_dummy(VertexId child, double value, std::optional<Point2> coords) const {
  check(child);
  const auto parent = vertices_[child].parent;
  if (!parent) throw TreeError("cannot subdivide above the root");
  const double h = kind_ == TreeKind::Join ? value : -value;
  if (!(height(child) < h && h < height(*parent)))
    throw TreeError("dummy value must lie strictly inside the subdivided edge");
  std::vector<TreeVertex> vs = vertices_;
  TreeVertex dummy;
  dummy.value = value;
  dummy.parent = parent;
  dummy.coords = coords;
  dummy.dummy = true;
  vs.push_back(dummy);
  vs[child].parent = vs.size() - 1;
  return MergeTree(kind_, std::move(vs));
}

std::vector<std::size_t> grid_neighbors(std::size_t rows, std::size_t cols, std::size_t index,
                                        Connectivity connectivity) {
  std::vector<std::size_t> out;
  const long r = static_cast<long>(index / cols);
  const long c = static_cast<long>(index % cols);
  for (long dr = -1; dr <= 1; ++dr) {
    for (long dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      if (connectivity == Connectivity::Four && dr != 0 && dc != 0) continue;
      const long nr = r + dr, nc = c + dc;
      if (nr < 0 || nc < 0 || nr >= static_cast<long>(rows) || nc >= static_cast<long>(cols)) continue;
      out.push_back(static_cast<std::size_t>(nr) * cols + static_cast<std::size_t>(nc));
    }
  }
  return out;
}

MergeTree build_join_tree(const ScalarField& field, Connectivity connectivity) {
  const std::size_t n = field.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return field[a] != field[b] ? field[a] < field[b] : a < b;
  });

  UnionFind components(n);
  std::vector<bool> processed(n, false);
  // Per component representative: the tree vertex currently on top of it.
  std::vector<VertexId> top(n, 0);
  std::vector<TreeVertex> vs;
  auto add_node = [&](std::size_t grid_index) {
    TreeVertex tv;
    tv.value = field[grid_index];
    tv.domain_index = grid_index;
    tv.coords = field.coords(grid_index);
    vs.push_back(tv);
    return vs.size() - 1;
  };

  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t g = order[step];
    std::vector<std::size_t> reps;
    for (std::size_t nb : grid_neighbors(field.rows(), field.cols(), g, connectivity)) {
      if (!processed[nb]) continue;
      const std::size_t rep = components.find(nb);
      if (std::find(reps.begin(), reps.end(), rep) == reps.end()) reps.push_back(rep);
    }
    processed[g] = true;
    const bool last = step + 1 == n;

    if (reps.empty()) {
      top[g] = add_node(g);
      continue;
    }
    if (reps.size() == 1 && !last) {
      components.attach(g, reps[0]);
      continue;
    }
    const VertexId node = add_node(g);
    for (std::size_t rep : reps) {
      vs[top[rep]].parent = node;
      components.attach(rep, g);
    }
    top[components.find(g)] = node;
  }
  return MergeTree(TreeKind::Join, std::move(vs));
}

MergeTree build_split_tree(const ScalarField& field, Connectivity connectivity) {
  const MergeTree negated = build_join_tree(negate(field), connectivity);
  std::vector<TreeVertex> vs(negated.vertices().begin(), negated.vertices().end());
  for (auto& v : vs) v.value = -v.value;
  return MergeTree(TreeKind::Split, std::move(vs));
}

MergeTree build_merge_tree(const ScalarField& field, TreeKind kind, Connectivity connectivity) {
  return kind == TreeKind::Join ? build_join_tree(field, connectivity) : build_split_tree(field, connectivity);
}

std::vector<Branch> branch_decomposition(const MergeTree& tree) {
  const std::size_t n = tree.size();
  // Children always precede parents in the total order.
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});
  std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) { return tree.lower(a, b); });

  std::vector<VertexId> elder(n);
  std::vector<Branch> branches;
  for (VertexId v : order) {
    auto kids = tree.children(v);
    if (kids.empty()) {
      elder[v] = v;
    } else {
      VertexId oldest = elder[kids[0]];
      for (VertexId c : kids)
        if (tree.lower(elder[c], oldest)) oldest = elder[c];
      elder[v] = oldest;
      for (VertexId c : kids) {
        if (elder[c] == oldest) continue;
        branches.push_back({elder[c], v, false, std::abs(tree.value(v) - tree.value(elder[c]))});
      }
    }
  }
  const VertexId r = tree.root();
  branches.push_back({elder[r], r, true, std::abs(tree.value(r) - tree.value(elder[r]))});
  std::sort(branches.begin(), branches.end(), [](const Branch& a, const Branch& b) { return a.leaf < b.leaf; });
  return branches;
}

PersistenceDiagram persistence_pairs(const MergeTree& tree) {
  PersistenceDiagram d;
  for (const auto& b : branch_decomposition(tree)) {
    const double a = tree.value(b.leaf), s = tree.value(b.saddle);
    d.pairs.push_back({std::min(a, s), std::max(a, s)});
  }
  std::sort(d.pairs.begin(), d.pairs.end());
  return d;
}

namespace {

// Drops `leaf` and collapses its parent if that leaves a regular vertex.
MergeTree remove_leaf(const MergeTree& tree, VertexId leaf) {
  const std::size_t n = tree.size();
  std::vector<TreeVertex> vs(tree.vertices().begin(), tree.vertices().end());
  std::vector<bool> keep(n, true);
  keep[leaf] = false;
  const VertexId p = *vs[leaf].parent;
  if (p != tree.root() && !vs[p].dummy && tree.children(p).size() == 2) {
    const VertexId sibling = tree.children(p)[0] == leaf ? tree.children(p)[1] : tree.children(p)[0];
    vs[sibling].parent = vs[p].parent;
    keep[p] = false;
  }
  std::vector<VertexId> remap(n, 0);
  std::vector<TreeVertex> out;
  for (VertexId v = 0; v < n; ++v) {
    if (!keep[v]) continue;
    remap[v] = out.size();
    out.push_back(vs[v]);
  }
  for (auto& v : out)
    if (v.parent) v.parent = remap[*v.parent];
  return MergeTree(tree.kind(), std::move(out));
}

}  // namespace

MergeTree simplify(const MergeTree& tree, double threshold) {
  if (!(threshold >= 0.0)) throw TreeError("simplification threshold must be non-negative");
  MergeTree current = tree;
  while (true) {
    std::optional<Branch> victim;
    for (const auto& b : branch_decomposition(current)) {
      if (b.essential || !(b.persistence < threshold)) continue;
      if (!victim || b.persistence < victim->persistence ||
          (b.persistence == victim->persistence && current.lower(b.leaf, victim->leaf)))
        victim = b;
    }
    if (!victim) return current;
    current = remove_leaf(current, victim->leaf);
  }
}

PersistenceGraph persistence_graph(const MergeTree& tree, std::span<const double> thresholds) {
  if (!std::is_sorted(thresholds.begin(), thresholds.end()))
    throw TreeError("persistence graph thresholds must be sorted ascending");
  std::vector<double> pers;
  for (const auto& p : persistence_pairs(tree).pairs) pers.push_back(p.persistence());
  std::sort(pers.begin(), pers.end());
  PersistenceGraph g;
  for (double t : thresholds) {
    const auto it = std::lower_bound(pers.begin(), pers.end(), t);
    g.points.push_back({t, static_cast<std::size_t>(pers.end() - it)});
  }
  return g;
}

}  // namespace mtc
