#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mtc/analysis.hpp"
#include "mtc/io.hpp"
#include "mtc/morse.hpp"
#include "mtc/synthetic.hpp"

namespace py = pybind11;
using namespace mtc;

namespace {

ScalarField to_field(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw InputError("field must be a 2D array");
  const auto rows = static_cast<std::size_t>(a.shape(0)), cols = static_cast<std::size_t>(a.shape(1));
  return ScalarField(rows, cols, std::vector<double>(a.data(), a.data() + a.size()));
}

py::array_t<double> to_array(const ScalarField& f) {
  py::array_t<double> out({f.rows(), f.cols()});
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

TreeKind to_kind(const std::string& s) {
  if (s == "join") return TreeKind::Join;
  if (s == "split") return TreeKind::Split;
  throw InputError("tree kind must be 'join' or 'split'");
}

Connectivity to_connectivity(int c) {
  if (c == 4) return Connectivity::Four;
  if (c == 8) return Connectivity::Eight;
  throw InputError("connectivity must be 4 or 8");
}

PivotMode to_pivot(const std::string& s) {
  if (s == "global") return PivotMode::Global;
  if (s == "tv") return PivotMode::TimeVarying;
  if (s == "none") return PivotMode::PivotFree;
  throw InputError("pivot must be 'global', 'tv' or 'none'");
}

MappingConfig make_config(double lambda, double epsilon, const std::string& dummy, const std::string& pivot) {
  MappingConfig c;
  c.lambda = lambda;
  c.epsilon = epsilon;
  if (dummy != "leaf" && dummy != "vertex") throw InputError("dummy must be 'leaf' or 'vertex'");
  c.dummy_mode = dummy == "leaf" ? DummyMode::Leaf : DummyMode::Vertex;
  c.pivot_mode = to_pivot(pivot);
  c.validate();
  return c;
}

using Pairs = std::vector<std::pair<double, double>>;

PersistenceDiagram to_diagram(const Pairs& pairs) {
  PersistenceDiagram d;
  for (auto [b, e] : pairs) d.pairs.push_back({std::min(b, e), std::max(b, e)});
  return d;
}

Pairs from_diagram(const PersistenceDiagram& d) {
  Pairs out;
  for (const auto& p : d.pairs) out.emplace_back(p.birth, p.death);
  return out;
}

Eigen::MatrixXd dense(const InducedMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = m(static_cast<std::size_t>(std::min(i, j)), static_cast<std::size_t>(std::max(i, j)));
  return out;
}

InducedMatrix induced(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InputError("induced matrix must be square");
  InducedMatrix out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i; j < m.cols(); ++j) out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
  return out;
}

py::dict report_dict(const SeriesReport& r) {
  py::dict d;
  d["metric"] = r.metric;
  d["distance_matrix"] = r.distance_matrix;
  d["adjacent_profile"] = r.adjacent_profile;
  std::vector<std::size_t> transitions;
  for (const auto& t : r.transitions) transitions.push_back(t.index);
  d["transitions"] = transitions;
  d["segments"] = r.segments;
  std::vector<std::pair<std::size_t, double>> lags;
  for (const auto& l : r.lags) lags.emplace_back(l.lag, l.mean);
  d["lag_profile"] = lags;
  d["period"] = r.period ? py::cast(*r.period) : py::none();
  d["mds"] = r.mds ? py::cast(*r.mds) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_mtcompare, m) {
  m.doc() = "Merge-tree comparison of time-varying scalar fields";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<TreeError>(m, "TreeError", PyExc_ValueError);
  py::register_exception<MetricError>(m, "MetricError", PyExc_ValueError);

  py::class_<MergeTree>(m, "MergeTree")
      .def_property_readonly("kind", [](const MergeTree& t) { return t.kind() == TreeKind::Join ? "join" : "split"; })
      .def_property_readonly("root", &MergeTree::root)
      .def_property_readonly("leaves", &MergeTree::leaves)
      .def("__len__", &MergeTree::size)
      .def("value", &MergeTree::value, py::arg("v"))
      .def("parent", &MergeTree::parent, py::arg("v"))
      .def("children", [](const MergeTree& t, VertexId v) {
        const auto c = t.children(v);
        return std::vector<VertexId>(c.begin(), c.end());
      }, py::arg("v"))
      .def("coords", [](const MergeTree& t, VertexId v) -> std::optional<std::pair<double, double>> {
        const auto& p = t.vertex(v).coords;
        if (!p) return std::nullopt;
        return std::make_pair(p->x, p->y);
      }, py::arg("v"))
      .def("domain_index", [](const MergeTree& t, VertexId v) { return t.vertex(v).domain_index; }, py::arg("v"))
      .def("is_dummy", [](const MergeTree& t, VertexId v) { return t.vertex(v).dummy; }, py::arg("v"))
      .def("lca", &MergeTree::lca, py::arg("u"), py::arg("v"))
      .def("to_json", [](const MergeTree& t) { return io::tree_to_json(t).dump(); })
      .def_static("from_json", [](const std::string& s) {
        try {
          return io::tree_from_json(io::Json::parse(s));
        } catch (const io::Json::exception& e) {
          throw InputError(e.what());
        }
      }, py::arg("text"))
      .def("__repr__", [](const MergeTree& t) {
        return "<MergeTree " + std::string(t.kind() == TreeKind::Join ? "join" : "split") + ", " +
               std::to_string(t.size()) + " vertices, " + std::to_string(t.leaf_count()) + " leaves>";
      });

  py::class_<Labeling>(m, "Labeling")
      .def(py::init<>())
      .def(py::init([](std::vector<VertexId> a, std::set<std::size_t> d) { return Labeling{std::move(a), std::move(d)}; }),
           py::arg("assignment"), py::arg("dummy_labels") = std::set<std::size_t>{})
      .def_readonly("assignment", &Labeling::assignment)
      .def_readonly("dummy_labels", &Labeling::dummy_labels)
      .def("__len__", &Labeling::size)
      .def("__getitem__", &Labeling::operator[])
      .def("__eq__", [](const Labeling& a, const Labeling& b) { return a == b; });

  m.def("build_merge_tree", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& f,
                               const std::string& kind, int connectivity) {
    return build_merge_tree(to_field(f), to_kind(kind), to_connectivity(connectivity));
  }, py::arg("field"), py::arg("kind") = "join", py::arg("connectivity") = 4);
  m.def("persistence_pairs", [](const MergeTree& t) { return from_diagram(persistence_pairs(t)); }, py::arg("tree"));
  m.def("simplify", &simplify, py::arg("tree"), py::arg("threshold"));
  m.def("leaf_labeling", &leaf_labeling, py::arg("tree"));

  m.def("label_pair", [](const MergeTree& a, const MergeTree& b, double lambda, double epsilon, const std::string& dummy) {
    const LabeledPair p = label_pair(a, b, make_config(lambda, epsilon, dummy, "tv"));
    return py::make_tuple(p.first.tree, p.first.labels, p.second.tree, p.second.labels);
  }, py::arg("a"), py::arg("b"), py::arg("lambda_") = 0.5,
     py::arg("epsilon") = std::numeric_limits<double>::infinity(), py::arg("dummy") = "vertex");

  m.def("morse_labels", [](const MergeTree& a, const py::array_t<double, py::array::c_style | py::array::forcecast>& fa,
                           const MergeTree& b, const py::array_t<double, py::array::c_style | py::array::forcecast>& fb,
                           int connectivity, double lambda) {
    const LabeledPair p = morse_labels(a, to_field(fa), b, to_field(fb), to_connectivity(connectivity), lambda);
    return py::make_tuple(p.first.tree, p.first.labels, p.second.tree, p.second.labels);
  }, py::arg("a"), py::arg("field_a"), py::arg("b"), py::arg("field_b"), py::arg("connectivity") = 4,
     py::arg("lambda_") = 0.5);

  m.def("induced_matrix", [](const MergeTree& t, const Labeling& l) { return dense(induced_matrix(t, l)); },
        py::arg("tree"), py::arg("labels"));
  m.def("interleaving_distance", [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return interleaving_distance(induced(a), induced(b));
  }, py::arg("m1"), py::arg("m2"));
  m.def("cophenetic_distance", [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const std::string& norm) {
    CopheneticNorm n;
    if (norm == "inf") n = CopheneticNorm::Inf;
    else if (norm == "l1") n = CopheneticNorm::One;
    else if (norm == "l2") n = CopheneticNorm::Two;
    else throw InputError("norm must be 'inf', 'l1' or 'l2'");
    return cophenetic_distance(induced(a), induced(b), n);
  }, py::arg("m1"), py::arg("m2"), py::arg("norm") = "inf");
  m.def("bottleneck_distance", [](const Pairs& a, const Pairs& b) {
    return bottleneck_distance(to_diagram(a), to_diagram(b));
  }, py::arg("d1"), py::arg("d2"));
  m.def("wasserstein_distance", [](const Pairs& a, const Pairs& b) {
    return wasserstein_distance(to_diagram(a), to_diagram(b));
  }, py::arg("d1"), py::arg("d2"));

  m.def("analyze_series", [](const std::vector<py::array_t<double, py::array::c_style | py::array::forcecast>>& arrays,
                             const std::string& metric, const std::string& kind, int connectivity, double lambda,
                             double epsilon, const std::string& dummy, const std::string& pivot, double zscore,
                             std::optional<double> threshold) {
    std::vector<ScalarField> fields;
    for (const auto& a : arrays) fields.push_back(to_field(a));
    if (fields.empty()) throw InputError("empty series");
    std::vector<MergeTree> trees;
    for (const auto& f : fields) trees.push_back(build_merge_tree(f, to_kind(kind), to_connectivity(connectivity)));
    const MappingConfig config = make_config(lambda, epsilon, dummy, pivot);
    const SeriesLabeling s = label_series(trees, config);
    const TransitionRule rule = threshold ? TransitionRule{AbsoluteThreshold{*threshold}} : RobustZScore{zscore};
    return report_dict(analyze_series(s, parse_metric(metric), config, fields, rule));
  }, py::arg("fields"), py::arg("metric") = "dI", py::arg("kind") = "join", py::arg("connectivity") = 4,
     py::arg("lambda_") = 0.5, py::arg("epsilon") = std::numeric_limits<double>::infinity(),
     py::arg("dummy") = "vertex", py::arg("pivot") = "tv", py::arg("zscore") = 3.0,
     py::arg("threshold") = std::nullopt);

  m.def("synthetic_series", [](const std::string& kind) {
    synthetic::Series s;
    if (kind == "orbit") s = synthetic::orbit_series();
    else if (kind == "periodic") s = synthetic::periodic_series(8);
    else if (kind == "mirror") s = synthetic::mirror_periodic_series();
    else if (kind == "vanishing") s = synthetic::vanishing_series();
    else throw InputError("kind must be orbit, periodic, mirror or vanishing");
    std::vector<py::array_t<double>> fields;
    for (const auto& f : s.fields) fields.push_back(to_array(f));
    return py::make_tuple(fields, s.events);
  }, py::arg("kind"));
}
