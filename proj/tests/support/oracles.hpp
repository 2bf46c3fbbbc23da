#pragma once

// Brute-force reference implementations shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "mtc/field.hpp"
#include "mtc/merge_tree.hpp"

namespace oracles {

inline mtc::ScalarField random_field(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                                     bool integer_valued = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> small(0, 4);
  std::vector<double> v(rows * cols);
  for (double& x : v) x = integer_valued ? small(rng) : u(rng);
  return mtc::ScalarField(rows, cols, v);
}

inline bool sos_lower(const mtc::ScalarField& f, std::size_t a, std::size_t b) {
  return f[a] != f[b] ? f[a] < f[b] : a < b;
}

// Local minima by direct neighbourhood scan.
inline std::set<std::size_t> brute_minima(const mtc::ScalarField& f, mtc::Connectivity c) {
  std::set<std::size_t> out;
  for (std::size_t g = 0; g < f.size(); ++g) {
    bool minimum = true;
    for (std::size_t r = 0; r < f.rows(); ++r)
      for (std::size_t col = 0; col < f.cols(); ++col) {
        const std::size_t h = r * f.cols() + col;
        const long dr = std::labs(static_cast<long>(r) - static_cast<long>(f.row_of(g)));
        const long dc = std::labs(static_cast<long>(col) - static_cast<long>(f.col_of(g)));
        const bool adjacent = c == mtc::Connectivity::Four ? dr + dc == 1 : (std::max(dr, dc) == 1);
        if (adjacent && sos_lower(f, h, g)) minimum = false;
      }
    if (minimum) out.insert(g);
  }
  return out;
}

// Components of {f <= a} by flood fill.
inline std::size_t sublevel_components(const mtc::ScalarField& f, double a, mtc::Connectivity c) {
  std::vector<char> seen(f.size(), false);
  std::size_t count = 0;
  for (std::size_t s = 0; s < f.size(); ++s) {
    if (seen[s] || f[s] > a) continue;
    ++count;
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      const std::size_t g = stack.back();
      stack.pop_back();
      for (std::size_t h : mtc::grid_neighbors(f.rows(), f.cols(), g, c))
        if (!seen[h] && f[h] <= a) {
          seen[h] = true;
          stack.push_back(h);
        }
    }
  }
  return count;
}

inline std::size_t edges_crossing(const mtc::MergeTree& t, double a) {
  std::size_t count = 0;
  for (mtc::VertexId v = 0; v < t.size(); ++v) {
    const auto p = t.parent(v);
    if (t.value(v) <= a && (!p || t.value(*p) > a)) ++count;
  }
  return count;
}

// 0-dimensional persistence of the tree's own sublevel filtration, by plain
// union-find over tree edges with the elder rule.
inline std::vector<mtc::PersistencePair> brute_pairs(const mtc::MergeTree& t) {
  using mtc::VertexId;
  std::vector<VertexId> order(t.size());
  std::iota(order.begin(), order.end(), VertexId{0});
  std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) { return t.lower(a, b); });
  std::vector<VertexId> parent(t.size()), birth(t.size());
  std::iota(parent.begin(), parent.end(), VertexId{0});
  auto find = [&](VertexId v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  auto pair_of = [&](double x, double y) { return mtc::PersistencePair{std::min(x, y), std::max(x, y)}; };
  std::vector<mtc::PersistencePair> out;
  for (VertexId v : order) {
    birth[v] = v;
    if (t.is_leaf(v)) continue;
    std::vector<VertexId> roots;
    for (VertexId c : t.children(v)) roots.push_back(find(c));
    const VertexId eldest = *std::min_element(
        roots.begin(), roots.end(), [&](VertexId a, VertexId b) { return t.lower(birth[a], birth[b]); });
    for (VertexId r : roots) {
      if (r != eldest) out.push_back(pair_of(t.value(birth[r]), t.value(v)));
      parent[r] = v;
    }
    birth[v] = birth[eldest];
  }
  out.push_back(pair_of(t.value(birth[find(t.root())]), t.value(t.root())));
  std::sort(out.begin(), out.end());
  return out;
}

// Exhaustive augmented matching: each point is matched to a point of the
// other diagram or to the diagonal. Returns (bottleneck, 1-Wasserstein).
inline std::pair<double, double> brute_diagram_distances(const mtc::PersistenceDiagram& a,
                                                         const mtc::PersistenceDiagram& b) {
  const std::size_t n = a.pairs.size(), m = b.pairs.size(), k = n + m;
  auto half = [](const mtc::PersistencePair& p) { return (p.death - p.birth) / 2.0; };
  auto cost = [&](std::size_t i, std::size_t j) {
    if (i < n && j < m)
      return std::max(std::abs(a.pairs[i].birth - b.pairs[j].birth), std::abs(a.pairs[i].death - b.pairs[j].death));
    if (i < n) return half(a.pairs[i]);
    if (j < m) return half(b.pairs[j]);
    return 0.0;
  };
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best_b = std::numeric_limits<double>::infinity(), best_w = best_b;
  do {
    double mx = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double c = cost(i, perm[i]);
      mx = std::max(mx, c);
      sum += c;
    }
    best_b = std::min(best_b, mx);
    best_w = std::min(best_w, sum);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {k == 0 ? 0.0 : best_b, k == 0 ? 0.0 : best_w};
}

inline mtc::PersistenceDiagram random_diagram(std::mt19937_64& rng, std::size_t max_points) {
  std::uniform_int_distribution<std::size_t> count(0, max_points);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  mtc::PersistenceDiagram d;
  const std::size_t n = count(rng);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = u(rng), y = u(rng);
    d.pairs.push_back({std::min(x, y), std::max(x, y)});
  }
  return d;
}

}  // namespace oracles
