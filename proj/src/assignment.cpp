#include "mtc/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mtc {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Shortest-augmenting-path Hungarian method on a square matrix. Returns the
// column assigned to each row together with optimal dual potentials.
struct HungarianResult {
  std::vector<std::size_t> row_to_col;
  std::vector<double> u, v;
};

HungarianResult hungarian(const Eigen::MatrixXd& cost) {
  const std::size_t n = static_cast<std::size_t>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  HungarianResult r;
  r.row_to_col.assign(n, kNone);
  for (std::size_t j = 1; j <= n; ++j)
    if (p[j]) r.row_to_col[p[j] - 1] = j - 1;
  r.u.assign(u.begin() + 1, u.end());
  r.v.assign(v.begin() + 1, v.end());
  return r;
}

// Rewrites an optimal perfect matching into the lexicographically smallest
// one that only uses tight (zero reduced cost) edges.
class LexRefiner {
 public:
  LexRefiner(const std::vector<std::vector<char>>& tight, std::vector<std::size_t>& row_to_col)
      : tight_(tight), row_to_col_(row_to_col), n_(row_to_col.size()) {
    col_to_row_.assign(n_, kNone);
    for (std::size_t r = 0; r < n_; ++r) col_to_row_[row_to_col_[r]] = r;
  }

  void run() {
    fixed_col_.assign(n_, false);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t c = 0; c < row_to_col_[i]; ++c) {
        if (!tight_[i][c] || fixed_col_[c]) continue;
        if (try_force(i, c)) break;
      }
      fixed_col_[row_to_col_[i]] = true;
      first_free_row_ = i + 1;
    }
  }

 private:
  bool try_force(std::size_t i, std::size_t c) {
    const std::size_t displaced = col_to_row_[c];
    const std::size_t freed = row_to_col_[i];
    auto saved_r2c = row_to_col_;
    auto saved_c2r = col_to_row_;
    row_to_col_[i] = c;
    col_to_row_[c] = i;
    col_to_row_[freed] = kNone;
    row_to_col_[displaced] = kNone;
    blocked_col_ = c;
    visited_.assign(n_, false);
    if (augment(displaced)) return true;
    row_to_col_ = std::move(saved_r2c);
    col_to_row_ = std::move(saved_c2r);
    return false;
  }

  bool augment(std::size_t row) {
    for (std::size_t c = 0; c < n_; ++c) {
      if (!tight_[row][c] || fixed_col_[c] || c == blocked_col_ || visited_[c]) continue;
      visited_[c] = true;
      const std::size_t holder = col_to_row_[c];
      if (holder == kNone || (holder >= first_free_row_ + 1 && augment(holder))) {
        row_to_col_[row] = c;
        col_to_row_[c] = row;
        return true;
      }
    }
    return false;
  }

  const std::vector<std::vector<char>>& tight_;
  std::vector<std::size_t>& row_to_col_;
  std::size_t n_;
  std::vector<std::size_t> col_to_row_;
  std::vector<char> fixed_col_;
  std::vector<char> visited_;
  std::size_t blocked_col_ = kNone;
  std::size_t first_free_row_ = 0;
};

}  // namespace

Matching min_cost_assignment(const Eigen::MatrixXd& weights, std::optional<std::size_t> required,
                             bool canonical_ties) {
  const std::size_t rows = static_cast<std::size_t>(weights.rows());
  const std::size_t cols = static_cast<std::size_t>(weights.cols());
  Matching result;
  if (rows == 0 || cols == 0) {
    if (required && *required > 0) throw AssignmentError("assignment infeasible: empty weight matrix");
    return result;
  }
  const std::size_t n = std::max(rows, cols);

  double total = 0.0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const double w = weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (std::isnan(w) || w == -std::numeric_limits<double>::infinity())
        throw AssignmentError("assignment weights must be finite or +infinity");
      if (std::isfinite(w)) total += std::abs(w);
    }
  // A non-edge costs more than any difference in finite totals, so the
  // optimum first minimises the number of non-edges used.
  const double big = 2.0 * total + 1.0;
  Eigen::MatrixXd cost = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n), big);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const double w = weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (std::isfinite(w)) cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w;
    }

  auto solved = hungarian(cost);
  if (canonical_ties) {
    const double tol = 1e-9 * (1.0 + big);
    std::vector<std::vector<char>> tight(n, std::vector<char>(n, false));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        tight[i][j] =
            cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - solved.u[i] - solved.v[j] <= tol;
    LexRefiner(tight, solved.row_to_col).run();
  }

  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t j = solved.row_to_col[i];
    if (j >= cols) continue;
    const double w = weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    if (!std::isfinite(w)) continue;
    result.pairs.emplace_back(i, j);
    result.cost += w;
  }
  if (required && result.pairs.size() < *required)
    throw AssignmentError("assignment infeasible: only " + std::to_string(result.pairs.size()) + " of " +
                          std::to_string(*required) + " required edges can be matched");
  return result;
}

std::size_t max_bipartite_matching(std::size_t rows, std::size_t cols,
                                   const std::vector<std::vector<std::size_t>>& adjacency) {
  std::vector<std::size_t> col_to_row(cols, kNone);
  std::vector<char> visited;
  auto augment = [&](auto&& self, std::size_t r) -> bool {
    for (std::size_t c : adjacency[r]) {
      if (visited[c]) continue;
      visited[c] = true;
      if (col_to_row[c] == kNone || self(self, col_to_row[c])) {
        col_to_row[c] = r;
        return true;
      }
    }
    return false;
  };
  std::size_t matched = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    visited.assign(cols, false);
    if (augment(augment, r)) ++matched;
  }
  return matched;
}

}  // namespace mtc
