#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mtc {

struct Matching {
  // (row, column) pairs sorted by row.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  double cost = 0.0;
};

class AssignmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact rectangular assignment.
///
/// Entries equal to +infinity are forbidden edges. Among all matchings the
/// solver first maximises the number of matched (finite) edges, then
/// minimises their total weight. Ties between optimal matchings are broken
/// lexicographically: lowest row first, then lowest column.
///
/// If `required` is given and fewer edges can be matched, throws
/// AssignmentError. Callers that only need the optimal cost can skip the
/// tie-breaking pass with `canonical_ties = false`.
Matching min_cost_assignment(const Eigen::MatrixXd& weights, std::optional<std::size_t> required = std::nullopt,
                             bool canonical_ties = true);

/// Maximum bipartite matching size; `adjacency[r]` lists the columns row r may take.
std::size_t max_bipartite_matching(std::size_t rows, std::size_t cols,
                                   const std::vector<std::vector<std::size_t>>& adjacency);

}  // namespace mtc
