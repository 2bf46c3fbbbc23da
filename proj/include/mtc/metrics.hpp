#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <utility>
#include <vector>

#include "mtc/field.hpp"
#include "mtc/labeling.hpp"
#include "mtc/merge_tree.hpp"

namespace mtc {

/// Upper-triangular matrix of lowest-common-ancestor values over a label set.
class InducedMatrix {
 public:
  explicit InducedMatrix(std::size_t n = 0);
  InducedMatrix(std::size_t n, std::vector<double> upper);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[offset(i, j)]; }
  double& operator()(std::size_t i, std::size_t j) { return entries_[offset(i, j)]; }

  /// Row-major upper triangle, diagonal included: the cophenetic vector.
  const std::vector<double>& cophenetic_vector() const { return entries_; }

 private:
  std::size_t offset(std::size_t i, std::size_t j) const;

  std::size_t n_;
  std::vector<double> entries_;
};

InducedMatrix induced_matrix(const MergeTree& tree, const Labeling& labeling);

enum class CopheneticNorm { Inf, One, Two };

/// L-inf / L1 / L2 norm of the difference of the upper triangles. The L-inf
/// case is the labelled interleaving distance.
double cophenetic_distance(const InducedMatrix& a, const InducedMatrix& b, CopheneticNorm norm);
double interleaving_distance(const InducedMatrix& a, const InducedMatrix& b);

struct LabelPairDelta {
  std::size_t i;
  std::size_t j;
  double delta;
};

/// Every upper-triangle entry attaining the L-inf difference, sorted by (i, j).
std::vector<LabelPairDelta> max_discrepancy_entries(const InducedMatrix& a, const InducedMatrix& b);

PersistenceDiagram diagram_of_tree(const MergeTree& tree);

/// Exact bottleneck distance with diagonal augmentation and L-inf ground cost.
double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b);

/// q-Wasserstein distance with diagonal augmentation and L-inf ground cost.
double wasserstein_distance(const PersistenceDiagram& a, const PersistenceDiagram& b, double q = 1.0);

double field_distance(const ScalarField& a, const ScalarField& b);

class MetricError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Symmetric non-negative matrix with a zero diagonal.
using DistanceMatrix = Eigen::MatrixXd;

}  // namespace mtc
