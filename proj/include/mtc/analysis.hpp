#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mtc/field.hpp"
#include "mtc/labeling.hpp"
#include "mtc/metrics.hpp"

namespace mtc {

enum class SeriesMetric { Interleaving, CopheneticL1, CopheneticL2, Bottleneck, Wasserstein1, Field };

/// Short CLI names: dI, dL1, dL2, dB, dW, dF.
std::string metric_name(SeriesMetric metric);
SeriesMetric parse_metric(const std::string& name);
bool is_label_metric(SeriesMetric metric);

/// All pairwise distances of a series. Label-based metrics use the shared
/// labelling in `series`; when it holds no labelings (pivot-free mode) each
/// pair is labelled on demand with `config`.
DistanceMatrix pairwise_matrix(const SeriesLabeling& series, SeriesMetric metric, const MappingConfig& config,
                               std::span<const ScalarField> fields = {});

double pair_distance(const MergeTree& a, const Labeling& la, const MergeTree& b, const Labeling& lb,
                     SeriesMetric metric);

/// d(k, k+1) for k = 0..l-2.
std::vector<double> adjacent_profile(const DistanceMatrix& matrix);

struct AbsoluteThreshold {
  double threshold;
};
struct RobustZScore {
  double k = 3.0;
};
using TransitionRule = std::variant<AbsoluteThreshold, RobustZScore>;

/// Indices k whose adjacent distance d(k, k+1) is flagged by `rule`.
///
/// The z-score rule scores (x - median) / (1.4826 * MAD) and flags scores
/// above k. With a zero MAD it flags values strictly above the median.
std::vector<std::size_t> detect_transitions(const DistanceMatrix& matrix, const TransitionRule& rule);

/// Contiguous [first, last] instance ranges between detected transitions.
std::vector<std::pair<std::size_t, std::size_t>> segments(std::span<const std::size_t> transitions, std::size_t count);

struct Culprit {
  std::size_t label_i;
  std::size_t label_j;
  double delta;
  VertexId vertex_a_i, vertex_a_j, vertex_b_i, vertex_b_j;
  std::optional<Point2> coords_a_i, coords_a_j, coords_b_i, coords_b_j;
  double value_a_i, value_a_j, value_b_i, value_b_j;
};

struct Diagnosis {
  double distance = 0.0;
  bool transition = false;  // false when the trees are indistinguishable
  std::vector<Culprit> culprits;
};

/// Maps the entries responsible for d_I back to vertices of both trees.
Diagnosis diagnose_pair(const MergeTree& a, const Labeling& la, const MergeTree& b, const Labeling& lb);

struct LagValue {
  std::size_t lag;
  double mean;
};

/// Mean k-th super-diagonal for every lag k = 1..l-1.
std::vector<LagValue> lag_profile(const DistanceMatrix& matrix);

/// Smallest lag whose value is a local minimum below median - 2 * MAD.
std::optional<std::size_t> detect_period(std::span<const LagValue> profile);

/// Classical multidimensional scaling into `dim` dimensions.
Eigen::MatrixXd mds_embed(const DistanceMatrix& matrix, std::size_t dim = 2);

struct Transition {
  std::size_t index;
  double distance;
  std::vector<Culprit> culprits;
};

struct SeriesReport {
  std::string metric;
  DistanceMatrix distance_matrix;
  std::vector<double> adjacent_profile;
  std::vector<Transition> transitions;
  std::vector<std::pair<std::size_t, std::size_t>> segments;
  std::vector<LagValue> lags;
  std::optional<std::size_t> period;
  std::optional<Eigen::MatrixXd> mds;
};

/// Distance matrix plus every derived series summary. Culprits are only
/// filled in for label-based metrics.
SeriesReport analyze_series(const SeriesLabeling& series, SeriesMetric metric, const MappingConfig& config,
                            std::span<const ScalarField> fields = {}, const TransitionRule& rule = RobustZScore{});

double median(std::vector<double> values);

}  // namespace mtc
