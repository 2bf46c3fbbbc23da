#include "mtc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mtc/assignment.hpp"

namespace mtc {

InducedMatrix::InducedMatrix(std::size_t n) : n_(n), entries_(n * (n + 1) / 2, 0.0) {}

InducedMatrix::InducedMatrix(std::size_t n, std::vector<double> upper) : n_(n), entries_(std::move(upper)) {
  if (entries_.size() != n * (n + 1) / 2)
    throw MetricError("induced matrix of size " + std::to_string(n) + " needs " + std::to_string(n * (n + 1) / 2) +
                      " entries");
}

std::size_t InducedMatrix::offset(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  if (j >= n_) throw MetricError("induced matrix index out of range");
  // Rows 0..i-1 hold n, n-1, ..., n-i+1 entries.
  return i * n_ - i * (i - 1) / 2 + (j - i);
}

InducedMatrix induced_matrix(const MergeTree& tree, const Labeling& labeling) {
  check_labeling(tree, labeling);
  const std::size_t n = labeling.size();
  InducedMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = tree.value(tree.lca(labeling[i], labeling[j]));
  return m;
}

double cophenetic_distance(const InducedMatrix& a, const InducedMatrix& b, CopheneticNorm norm) {
  if (a.size() != b.size())
    throw MetricError("induced matrices differ in size: " + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()));
  const auto& x = a.cophenetic_vector();
  const auto& y = b.cophenetic_vector();
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = std::abs(x[k] - y[k]);
    switch (norm) {
      case CopheneticNorm::Inf: acc = std::max(acc, d); break;
      case CopheneticNorm::One: acc += d; break;
      case CopheneticNorm::Two: acc += d * d; break;
    }
  }
  return norm == CopheneticNorm::Two ? std::sqrt(acc) : acc;
}

double interleaving_distance(const InducedMatrix& a, const InducedMatrix& b) {
  return cophenetic_distance(a, b, CopheneticNorm::Inf);
}

std::vector<LabelPairDelta> max_discrepancy_entries(const InducedMatrix& a, const InducedMatrix& b) {
  const double worst = interleaving_distance(a, b);
  std::vector<LabelPairDelta> out;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i; j < a.size(); ++j)
      if (std::abs(a(i, j) - b(i, j)) == worst) out.push_back({i, j, worst});
  return out;
}

PersistenceDiagram diagram_of_tree(const MergeTree& tree) { return persistence_pairs(tree); }

namespace {

double linf(const PersistencePair& p, const PersistencePair& q) {
  return std::max(std::abs(p.birth - q.birth), std::abs(p.death - q.death));
}

double to_diagonal(const PersistencePair& p) { return (p.death - p.birth) / 2.0; }

// Square cost matrix of the diagonal-augmented matching problem. Rows are
// A's points then B's diagonal copies; columns are B's points then A's
// diagonal copies.
Eigen::MatrixXd augmented_costs(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  const std::size_t na = a.pairs.size(), nb = b.pairs.size(), n = na + nb;
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n), inf);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j)
      c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = linf(a.pairs[i], b.pairs[j]);
    c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(nb + i)) = to_diagonal(a.pairs[i]);
  }
  for (std::size_t j = 0; j < nb; ++j) {
    c(static_cast<Eigen::Index>(na + j), static_cast<Eigen::Index>(j)) = to_diagonal(b.pairs[j]);
    for (std::size_t i = 0; i < na; ++i) c(static_cast<Eigen::Index>(na + j), static_cast<Eigen::Index>(nb + i)) = 0.0;
  }
  return c;
}

}  // namespace

double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  const Eigen::MatrixXd c = augmented_costs(a, b);
  const std::size_t n = static_cast<std::size_t>(c.rows());
  if (n == 0) return 0.0;
  std::vector<double> candidates;
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j)
      if (std::isfinite(c(i, j))) candidates.push_back(c(i, j));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  auto feasible = [&](double t) {
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) <= t) adj[i].push_back(j);
    return max_bipartite_matching(n, n, adj) == n;
  };
  std::size_t lo = 0, hi = candidates.size() - 1;  // the largest candidate is always feasible
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (feasible(candidates[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return candidates[lo];
}

double wasserstein_distance(const PersistenceDiagram& a, const PersistenceDiagram& b, double q) {
  if (!(q >= 1.0)) throw MetricError("Wasserstein order q must be at least 1");
  Eigen::MatrixXd c = augmented_costs(a, b);
  if (c.rows() == 0) return 0.0;
  if (q != 1.0)
    c = c.unaryExpr([q](double x) { return std::isfinite(x) ? std::pow(x, q) : x; });
  const Matching m = min_cost_assignment(c, static_cast<std::size_t>(c.rows()), false);
  return q == 1.0 ? m.cost : std::pow(m.cost, 1.0 / q);
}

double field_distance(const ScalarField& a, const ScalarField& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw MetricError("fields differ in shape");
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace mtc
