#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "mtc/analysis.hpp"
#include "mtc/labeling.hpp"
#include "mtc/merge_tree.hpp"
#include "mtc/metrics.hpp"
#include "mtc/morse.hpp"

namespace mtc::io {

using Json = nlohmann::ordered_json;

/// Shortest decimal that round-trips to the same double.
std::string format_number(double value);

Json tree_to_json(const MergeTree& tree);
Json labeled_tree_to_json(const MergeTree& tree, const Labeling& labels);
MergeTree tree_from_json(const Json& doc);
/// Labels default to one per leaf when the document carries none.
LabeledTree labeled_tree_from_json(const Json& doc);

std::string diagram_csv(const PersistenceDiagram& diagram);
std::string persistence_graph_csv(const PersistenceGraph& graph);
std::string matrix_csv(const Eigen::MatrixXd& matrix);
/// Full symmetric square form of an induced matrix.
std::string induced_matrix_csv(const InducedMatrix& matrix);

struct HeatmapScale {
  double min = 0.0;
  double max = 0.0;
};

/// Binary 8-bit PGM, one pixel per entry, linear min-max scaling to 0..255.
std::string heatmap_pgm(const Eigen::MatrixXd& matrix, HeatmapScale* scale = nullptr);
Json heatmap_metadata(const Eigen::MatrixXd& matrix, const HeatmapScale& scale);

Json report_to_json(const SeriesReport& report, std::span<const std::string> names = {});
Json diagnosis_to_json(const Diagnosis& diagnosis, std::size_t i, std::size_t j);

/// grid_text with the extremum grid index of every vertex.
std::string basin_map_text(const BasinMap& basins, std::size_t rows, std::size_t cols);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& contents);

}  // namespace mtc::io
