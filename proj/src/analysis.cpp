#include "mtc/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mtc {

std::string metric_name(SeriesMetric metric) {
  switch (metric) {
    case SeriesMetric::Interleaving: return "dI";
    case SeriesMetric::CopheneticL1: return "dL1";
    case SeriesMetric::CopheneticL2: return "dL2";
    case SeriesMetric::Bottleneck: return "dB";
    case SeriesMetric::Wasserstein1: return "dW";
    case SeriesMetric::Field: return "dF";
  }
  return "?";
}

SeriesMetric parse_metric(const std::string& name) {
  if (name == "dI" || name == "interleaving") return SeriesMetric::Interleaving;
  if (name == "dL1" || name == "coph_l1") return SeriesMetric::CopheneticL1;
  if (name == "dL2" || name == "coph_l2") return SeriesMetric::CopheneticL2;
  if (name == "dB" || name == "bottleneck") return SeriesMetric::Bottleneck;
  if (name == "dW" || name == "wasserstein1") return SeriesMetric::Wasserstein1;
  if (name == "dF" || name == "field") return SeriesMetric::Field;
  throw std::invalid_argument("unknown metric '" + name + "'");
}

bool is_label_metric(SeriesMetric metric) {
  return metric == SeriesMetric::Interleaving || metric == SeriesMetric::CopheneticL1 ||
         metric == SeriesMetric::CopheneticL2;
}

double pair_distance(const MergeTree& a, const Labeling& la, const MergeTree& b, const Labeling& lb,
                     SeriesMetric metric) {
  switch (metric) {
    case SeriesMetric::Interleaving:
      return cophenetic_distance(induced_matrix(a, la), induced_matrix(b, lb), CopheneticNorm::Inf);
    case SeriesMetric::CopheneticL1:
      return cophenetic_distance(induced_matrix(a, la), induced_matrix(b, lb), CopheneticNorm::One);
    case SeriesMetric::CopheneticL2:
      return cophenetic_distance(induced_matrix(a, la), induced_matrix(b, lb), CopheneticNorm::Two);
    case SeriesMetric::Bottleneck: return bottleneck_distance(diagram_of_tree(a), diagram_of_tree(b));
    case SeriesMetric::Wasserstein1: return wasserstein_distance(diagram_of_tree(a), diagram_of_tree(b), 1.0);
    case SeriesMetric::Field: break;
  }
  throw std::invalid_argument("field distance is not defined on trees");
}

DistanceMatrix pairwise_matrix(const SeriesLabeling& series, SeriesMetric metric, const MappingConfig& config,
                               std::span<const ScalarField> fields) {
  const std::size_t l = series.trees.size();
  if (metric == SeriesMetric::Field && (fields.empty() || (l != 0 && fields.size() != l)))
    throw std::invalid_argument("field distance needs one field per instance");
  const std::size_t count = metric == SeriesMetric::Field ? fields.size() : l;
  const bool pivot_free = series.labelings.empty();
  std::vector<InducedMatrix> induced;
  std::vector<PersistenceDiagram> diagrams;
  if (is_label_metric(metric) && !pivot_free)
    for (std::size_t i = 0; i < l; ++i) induced.push_back(induced_matrix(series.trees[i], series.labelings[i]));
  if (metric == SeriesMetric::Bottleneck || metric == SeriesMetric::Wasserstein1)
    for (const auto& t : series.trees) diagrams.push_back(diagram_of_tree(t));

  DistanceMatrix m = DistanceMatrix::Zero(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      double d = 0.0;
      switch (metric) {
        case SeriesMetric::Field: d = field_distance(fields[i], fields[j]); break;
        case SeriesMetric::Bottleneck: d = bottleneck_distance(diagrams[i], diagrams[j]); break;
        case SeriesMetric::Wasserstein1: d = wasserstein_distance(diagrams[i], diagrams[j], 1.0); break;
        default: {
          const CopheneticNorm norm = metric == SeriesMetric::Interleaving   ? CopheneticNorm::Inf
                                      : metric == SeriesMetric::CopheneticL1 ? CopheneticNorm::One
                                                                             : CopheneticNorm::Two;
          if (!pivot_free) {
            d = cophenetic_distance(induced[i], induced[j], norm);
          } else {
            const LabeledPair p = series.labeled_pair(i, j, config);
            d = cophenetic_distance(induced_matrix(p.first.tree, p.first.labels),
                                    induced_matrix(p.second.tree, p.second.labels), norm);
          }
        }
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d;
      m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = d;
    }
  }
  return m;
}

std::vector<double> adjacent_profile(const DistanceMatrix& matrix) {
  std::vector<double> out;
  for (Eigen::Index k = 0; k + 1 < matrix.rows(); ++k) out.push_back(matrix(k, k + 1));
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty list");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

double mad(const std::vector<double>& values, double center) {
  std::vector<double> dev;
  for (double v : values) dev.push_back(std::abs(v - center));
  return median(std::move(dev));
}

}  // namespace

std::vector<std::size_t> detect_transitions(const DistanceMatrix& matrix, const TransitionRule& rule) {
  if (matrix.rows() < 2) throw std::invalid_argument("transition detection needs at least two instances");
  const auto profile = adjacent_profile(matrix);
  std::vector<std::size_t> out;
  if (const auto* abs_rule = std::get_if<AbsoluteThreshold>(&rule)) {
    for (std::size_t k = 0; k < profile.size(); ++k)
      if (profile[k] > abs_rule->threshold) out.push_back(k);
    return out;
  }
  const double k_sigma = std::get<RobustZScore>(rule).k;
  const double center = median(profile);
  const double spread = 1.4826 * mad(profile, center);
  const double scale = std::max(1.0, std::abs(center));
  for (std::size_t k = 0; k < profile.size(); ++k) {
    if (spread > 1e-12 * scale) {
      if ((profile[k] - center) / spread > k_sigma) out.push_back(k);
    } else if (profile[k] - center > 1e-12 * scale) {
      out.push_back(k);
    }
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> segments(std::span<const std::size_t> transitions, std::size_t count) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (count == 0) return out;
  std::size_t start = 0;
  for (std::size_t t : transitions) {
    if (t + 1 >= count || t < start) continue;
    out.emplace_back(start, t);
    start = t + 1;
  }
  out.emplace_back(start, count - 1);
  return out;
}

Diagnosis diagnose_pair(const MergeTree& a, const Labeling& la, const MergeTree& b, const Labeling& lb) {
  const InducedMatrix ma = induced_matrix(a, la);
  const InducedMatrix mb = induced_matrix(b, lb);
  Diagnosis d;
  d.distance = interleaving_distance(ma, mb);
  d.transition = d.distance > 0.0;
  if (!d.transition) return d;
  for (const auto& e : max_discrepancy_entries(ma, mb)) {
    Culprit c{};
    c.label_i = e.i;
    c.label_j = e.j;
    c.delta = e.delta;
    c.vertex_a_i = la[e.i];
    c.vertex_a_j = la[e.j];
    c.vertex_b_i = lb[e.i];
    c.vertex_b_j = lb[e.j];
    c.coords_a_i = a.vertex(c.vertex_a_i).coords;
    c.coords_a_j = a.vertex(c.vertex_a_j).coords;
    c.coords_b_i = b.vertex(c.vertex_b_i).coords;
    c.coords_b_j = b.vertex(c.vertex_b_j).coords;
    c.value_a_i = a.value(c.vertex_a_i);
    c.value_a_j = a.value(c.vertex_a_j);
    c.value_b_i = b.value(c.vertex_b_i);
    c.value_b_j = b.value(c.vertex_b_j);
    d.culprits.push_back(c);
  }
  return d;
}

std::vector<LagValue> lag_profile(const DistanceMatrix& matrix) {
  const Eigen::Index l = matrix.rows();
  std::vector<LagValue> out;
  for (Eigen::Index k = 1; k < l; ++k) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i + k < l; ++i) sum += matrix(i, i + k);
    out.push_back({static_cast<std::size_t>(k), sum / static_cast<double>(l - k)});
  }
  return out;
}

std::optional<std::size_t> detect_period(std::span<const LagValue> profile) {
  if (profile.size() < 3) return std::nullopt;
  std::vector<double> v;
  for (const auto& p : profile) v.push_back(p.mean);
  const double center = median(v);
  const double threshold = center - 2.0 * mad(v, center);
  // Interior lags only: a boundary value has no neighbour on one side.
  for (std::size_t k = 1; k + 1 < v.size(); ++k)
    if (v[k] < threshold && v[k] <= v[k - 1] && v[k] <= v[k + 1]) return profile[k].lag;
  return std::nullopt;
}

Eigen::MatrixXd mds_embed(const DistanceMatrix& matrix, std::size_t dim) {
  const Eigen::Index l = matrix.rows();
  if (matrix.cols() != l) throw std::invalid_argument("MDS needs a square distance matrix");
  if (static_cast<std::size_t>(l) < dim + 1) throw std::invalid_argument("MDS needs at least dim + 1 instances");
  const Eigen::MatrixXd sq = matrix.array().square().matrix();
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(l, l) - Eigen::MatrixXd::Constant(l, l, 1.0 / static_cast<double>(l));
  const Eigen::MatrixXd gram = -0.5 * centering * sq * centering;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (gram + gram.transpose()));
  // Eigenvalues come back ascending.
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(l, static_cast<Eigen::Index>(dim));
  for (std::size_t d = 0; d < dim; ++d) {
    const Eigen::Index idx = l - 1 - static_cast<Eigen::Index>(d);
    const double lambda = std::max(0.0, eig.eigenvalues()(idx));
    Eigen::VectorXd vec = eig.eigenvectors().col(idx);
    // Fix the sign so the largest-magnitude component is positive.
    Eigen::Index arg = 0;
    vec.cwiseAbs().maxCoeff(&arg);
    if (vec(arg) < 0) vec = -vec;
    out.col(static_cast<Eigen::Index>(d)) = std::sqrt(lambda) * vec;
  }
  const Eigen::RowVectorXd mean = out.colwise().mean();
  out.rowwise() -= mean;
  return out;
}

SeriesReport analyze_series(const SeriesLabeling& series, SeriesMetric metric, const MappingConfig& config,
                            std::span<const ScalarField> fields, const TransitionRule& rule) {
  SeriesReport r;
  r.metric = metric_name(metric);
  r.distance_matrix = pairwise_matrix(series, metric, config, fields);
  const std::size_t l = static_cast<std::size_t>(r.distance_matrix.rows());
  r.adjacent_profile = adjacent_profile(r.distance_matrix);
  if (l >= 2) {
    for (std::size_t k : detect_transitions(r.distance_matrix, rule)) {
      Transition t{k, r.adjacent_profile[k], {}};
      if (is_label_metric(metric)) {
        if (!series.labelings.empty()) {
          t.culprits = diagnose_pair(series.trees[k], series.labelings[k], series.trees[k + 1],
                                     series.labelings[k + 1])
                           .culprits;
        } else {
          const LabeledPair p = series.labeled_pair(k, k + 1, config);
          t.culprits = diagnose_pair(p.first.tree, p.first.labels, p.second.tree, p.second.labels).culprits;
        }
      }
      r.transitions.push_back(std::move(t));
    }
  }
  std::vector<std::size_t> idx;
  for (const auto& t : r.transitions) idx.push_back(t.index);
  r.segments = segments(idx, l);
  r.lags = lag_profile(r.distance_matrix);
  r.period = detect_period(r.lags);
  if (l >= 3) r.mds = mds_embed(r.distance_matrix, 2);
  return r;
}

}  // namespace mtc
