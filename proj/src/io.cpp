#include "mtc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mtc::io {

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v == 0.0 ? 0.0 : v;
}

Json point(const std::optional<Point2>& p) {
  if (!p) return nullptr;
  return Json::array({number(p->x), number(p->y)});
}

std::string kind_name(TreeKind kind) { return kind == TreeKind::Join ? "join" : "split"; }

}  // namespace

Json tree_to_json(const MergeTree& tree) {
  Json doc;
  doc["kind"] = kind_name(tree.kind());
  doc["root"] = tree.root();
  Json vertices = Json::array();
  for (VertexId v = 0; v < tree.size(); ++v) {
    const TreeVertex& tv = tree.vertex(v);
    Json j;
    j["id"] = v;
    j["f"] = number(tv.value);
    j["parent"] = tv.parent ? Json(*tv.parent) : Json(nullptr);
    j["domain_index"] = tv.domain_index ? Json(*tv.domain_index) : Json(nullptr);
    j["coords"] = point(tv.coords);
    if (tv.dummy) j["dummy"] = true;
    vertices.push_back(std::move(j));
  }
  doc["vertices"] = std::move(vertices);
  return doc;
}

Json labeled_tree_to_json(const MergeTree& tree, const Labeling& labels) {
  Json doc = tree_to_json(tree);
  Json map = Json::object();
  for (std::size_t l = 0; l < labels.size(); ++l) map[std::to_string(l)] = labels[l];
  doc["labels"] = std::move(map);
  doc["dummy_labels"] = Json(std::vector<std::size_t>(labels.dummy_labels.begin(), labels.dummy_labels.end()));
  return doc;
}

MergeTree tree_from_json(const Json& doc) {
  try {
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind != "join" && kind != "split") throw InputError("tree kind must be 'join' or 'split'");
    const auto& list = doc.at("vertices");
    std::vector<TreeVertex> vertices(list.size());
    std::vector<char> seen(list.size(), false);
    for (const auto& j : list) {
      const std::size_t id = j.at("id").get<std::size_t>();
      if (id >= vertices.size() || seen[id]) throw InputError("vertex ids must be 0..n-1 without repeats");
      seen[id] = true;
      TreeVertex& tv = vertices[id];
      tv.value = j.at("f").get<double>();
      if (j.contains("parent") && !j["parent"].is_null()) tv.parent = j["parent"].get<std::size_t>();
      if (j.contains("domain_index") && !j["domain_index"].is_null())
        tv.domain_index = j["domain_index"].get<std::size_t>();
      if (j.contains("coords") && !j["coords"].is_null())
        tv.coords = Point2{j["coords"].at(0).get<double>(), j["coords"].at(1).get<double>()};
      tv.dummy = j.value("dummy", false);
    }
    MergeTree tree(kind == "join" ? TreeKind::Join : TreeKind::Split, std::move(vertices));
    if (doc.contains("root") && doc["root"].get<std::size_t>() != tree.root())
      throw InputError("declared root does not match the parent structure");
    return tree;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed tree JSON: ") + e.what());
  }
}

LabeledTree labeled_tree_from_json(const Json& doc) {
  MergeTree tree = tree_from_json(doc);
  if (!doc.contains("labels")) {
    Labeling labels = leaf_labeling(tree);
    return {std::move(tree), std::move(labels)};
  }
  try {
    Labeling labels;
    const auto& map = doc["labels"];
    labels.assignment.resize(map.size());
    std::vector<char> seen(map.size(), false);
    for (const auto& [key, value] : map.items()) {
      std::size_t label = 0;
      const auto res = std::from_chars(key.data(), key.data() + key.size(), label);
      if (res.ec != std::errc{} || res.ptr != key.data() + key.size() || label >= map.size() || seen[label])
        throw InputError("labels must be keyed 0..n-1");
      seen[label] = true;
      labels.assignment[label] = value.get<VertexId>();
    }
    if (doc.contains("dummy_labels"))
      for (const auto& d : doc["dummy_labels"]) labels.dummy_labels.insert(d.get<std::size_t>());
    check_labeling(tree, labels);
    return {std::move(tree), std::move(labels)};
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed labels: ") + e.what());
  }
}

std::string diagram_csv(const PersistenceDiagram& diagram) {
  std::string out = "birth,death\n";
  for (const auto& p : diagram.pairs) out += format_number(p.birth) + "," + format_number(p.death) + "\n";
  return out;
}

std::string persistence_graph_csv(const PersistenceGraph& graph) {
  std::string out = "threshold,pairs\n";
  for (const auto& p : graph.points) out += format_number(p.threshold) + "," + std::to_string(p.pair_count) + "\n";
  return out;
}

std::string matrix_csv(const Eigen::MatrixXd& matrix) {
  std::string out;
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j) out += ',';
      out += format_number(matrix(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string induced_matrix_csv(const InducedMatrix& matrix) {
  const auto n = static_cast<Eigen::Index>(matrix.size());
  Eigen::MatrixXd full(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      full(i, j) = matrix(static_cast<std::size_t>(std::min(i, j)), static_cast<std::size_t>(std::max(i, j)));
  return matrix_csv(full);
}

std::string heatmap_pgm(const Eigen::MatrixXd& matrix, HeatmapScale* scale) {
  HeatmapScale s;
  if (matrix.size() > 0) {
    s.min = matrix.minCoeff();
    s.max = matrix.maxCoeff();
  }
  if (scale) *scale = s;
  std::string out = "P5\n" + std::to_string(matrix.cols()) + " " + std::to_string(matrix.rows()) + "\n255\n";
  const double range = s.max - s.min;
  for (Eigen::Index i = 0; i < matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      const double t = range > 0.0 ? (matrix(i, j) - s.min) / range : 0.0;
      out += static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(t, 0.0, 1.0) * 255.0)));
    }
  return out;
}

Json heatmap_metadata(const Eigen::MatrixXd& matrix, const HeatmapScale& scale) {
  Json doc;
  doc["format"] = "pgm-p5";
  doc["rows"] = matrix.rows();
  doc["cols"] = matrix.cols();
  doc["scaling"] = "linear min-max per matrix";
  doc["min"] = number(scale.min);
  doc["max"] = number(scale.max);
  doc["black"] = "min";
  doc["white"] = "max";
  return doc;
}

namespace {

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json culprit_json(const Culprit& c) {
  Json j;
  j["labels"] = {c.label_i, c.label_j};
  j["delta"] = number(c.delta);
  j["first"] = {{"vertices", {c.vertex_a_i, c.vertex_a_j}},
                {"values", {number(c.value_a_i), number(c.value_a_j)}},
                {"coords", {point(c.coords_a_i), point(c.coords_a_j)}}};
  j["second"] = {{"vertices", {c.vertex_b_i, c.vertex_b_j}},
                 {"values", {number(c.value_b_i), number(c.value_b_j)}},
                 {"coords", {point(c.coords_b_i), point(c.coords_b_j)}}};
  return j;
}

}  // namespace

Json report_to_json(const SeriesReport& report, std::span<const std::string> names) {
  Json doc;
  doc["metric"] = report.metric;
  if (!names.empty()) doc["instances"] = Json(std::vector<std::string>(names.begin(), names.end()));
  doc["distance_matrix"] = matrix_json(report.distance_matrix);
  Json profile = Json::array();
  for (double d : report.adjacent_profile) profile.push_back(number(d));
  doc["adjacent_profile"] = std::move(profile);
  Json transitions = Json::array();
  for (const auto& t : report.transitions) {
    Json j;
    j["from"] = t.index;
    j["to"] = t.index + 1;
    j["distance"] = number(t.distance);
    Json culprits = Json::array();
    for (const auto& c : t.culprits) culprits.push_back(culprit_json(c));
    j["culprits"] = std::move(culprits);
    transitions.push_back(std::move(j));
  }
  doc["transitions"] = std::move(transitions);
  Json segs = Json::array();
  for (auto [a, b] : report.segments) segs.push_back({a, b});
  doc["segments"] = std::move(segs);
  Json lags = Json::array();
  for (const auto& l : report.lags) lags.push_back({{"lag", l.lag}, {"mean", number(l.mean)}});
  doc["lag_profile"] = std::move(lags);
  doc["period"] = report.period ? Json(*report.period) : Json(nullptr);
  doc["mds"] = report.mds ? matrix_json(*report.mds) : Json(nullptr);
  return doc;
}

Json diagnosis_to_json(const Diagnosis& diagnosis, std::size_t i, std::size_t j) {
  Json doc;
  doc["first"] = i;
  doc["second"] = j;
  doc["distance"] = number(diagnosis.distance);
  doc["transition"] = diagnosis.transition;
  Json culprits = Json::array();
  for (const auto& c : diagnosis.culprits) culprits.push_back(culprit_json(c));
  doc["culprits"] = std::move(culprits);
  return doc;
}

std::string basin_map_text(const BasinMap& basins, std::size_t rows, std::size_t cols) {
  if (basins.assignment.size() != rows * cols) throw std::invalid_argument("basin map does not match grid shape");
  std::string out = std::to_string(rows) + " " + std::to_string(cols) + "\n";
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c) out += ' ';
      out += std::to_string(basins.assignment[r * cols + c]);
    }
    out += '\n';
  }
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace mtc::io
