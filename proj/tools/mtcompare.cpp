// mtcompare: merge-tree comparison of time-varying 2D scalar fields.
//
//   mtcompare trees    --input DIR --out DIR [--tree split] [--simplify T]
//   mtcompare compare  --input DIR --out DIR --metric dI --metric dF ...
//   mtcompare diagnose --input DIR --i 3 --j 4 [--out DIR]
//   mtcompare generate --kind orbit --out DIR
//
// Exit codes: 0 success, 1 computation error, 2 usage or input error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mtc/analysis.hpp"
#include "mtc/io.hpp"
#include "mtc/morse.hpp"
#include "mtc/synthetic.hpp"

namespace fs = std::filesystem;
using mtc::io::Json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mapping { Tree, Euclidean, Hybrid, Morse };

struct RunConfig {
  std::string input;
  std::string out;
  mtc::TreeKind tree = mtc::TreeKind::Join;
  mtc::Connectivity connectivity = mtc::Connectivity::Four;
  double simplify = 0.0;
  Mapping mapping = Mapping::Hybrid;
  double lambda = 0.5;
  double epsilon = std::numeric_limits<double>::infinity();
  mtc::DummyMode dummy = mtc::DummyMode::Vertex;
  mtc::PivotMode pivot = mtc::PivotMode::TimeVarying;
  std::vector<mtc::SeriesMetric> metrics{mtc::SeriesMetric::Interleaving};
  mtc::FieldFormat format = mtc::FieldFormat::GridText;
  std::optional<double> threshold;  // absolute transition rule instead of the z-score
  double zscore = 3.0;

  mtc::MappingConfig mapping_config() const {
    mtc::MappingConfig c;
    c.lambda = lambda;
    c.epsilon = epsilon;
    c.dummy_mode = dummy;
    c.pivot_mode = mapping == Mapping::Morse ? mtc::PivotMode::PivotFree : pivot;
    return c;
  }
  mtc::TransitionRule rule() const {
    if (threshold) return mtc::AbsoluteThreshold{*threshold};
    return mtc::RobustZScore{zscore};
  }
};

// Raw option values as strings, from the config file and then the flags.
using Settings = std::map<std::string, std::vector<std::string>>;

const std::map<std::string, Mapping> kMappings = {
    {"tree", Mapping::Tree}, {"euclidean", Mapping::Euclidean}, {"hybrid", Mapping::Hybrid}, {"morse", Mapping::Morse}};
const std::map<std::string, mtc::PivotMode> kPivots = {
    {"global", mtc::PivotMode::Global}, {"tv", mtc::PivotMode::TimeVarying}, {"none", mtc::PivotMode::PivotFree}};

std::string mapping_name(Mapping m) {
  for (const auto& [k, v] : kMappings)
    if (v == m) return k;
  return "?";
}
std::string pivot_name(mtc::PivotMode m) {
  for (const auto& [k, v] : kPivots)
    if (v == m) return k;
  return "?";
}

double to_double(const std::string& key, const std::string& text) {
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError("--" + key + " expects a number, got '" + text + "'");
  }
}

const std::string& single(const Settings& s, const std::string& key) {
  const auto& values = s.at(key);
  std::set<std::string> distinct(values.begin(), values.end());
  if (distinct.size() > 1) {
    std::string all;
    for (const auto& v : distinct) all += (all.empty() ? "" : ", ") + v;
    throw UsageError("--" + key + " given conflicting values: " + all);
  }
  return values.back();
}

Settings settings_from_json(const fs::path& path) {
  Json doc;
  try {
    doc = Json::parse(mtc::io::read_text(path));
  } catch (const Json::exception& e) {
    throw UsageError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw UsageError("config file must hold a JSON object");
  Settings s;
  for (const auto& [key, value] : doc.items()) {
    auto text = [&](const Json& v) -> std::string {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number_integer()) return std::to_string(v.get<long long>());
      if (v.is_number()) return mtc::io::format_number(v.get<double>());
      if (v.is_null()) return "inf";
      throw UsageError("config key '" + key + "' has an unsupported value");
    };
    if (value.is_array())
      for (const auto& v : value) s[key].push_back(text(v));
    else
      s[key].push_back(text(value));
  }
  return s;
}

RunConfig resolve(const Settings& s) {
  static const std::set<std::string> known = {"input", "out",     "tree",  "connectivity", "simplify",
                                              "mapping", "lambda", "epsilon", "dummy",      "pivot",
                                              "metric", "format",  "threshold", "zscore"};
  for (const auto& [key, _] : s)
    if (!known.contains(key)) throw UsageError("unknown setting '" + key + "'");

  RunConfig c;
  auto has = [&](const char* key) { return s.contains(key) && !s.at(key).empty(); };
  if (has("input")) c.input = single(s, "input");
  if (has("out")) c.out = single(s, "out");
  if (has("tree")) {
    const auto& t = single(s, "tree");
    if (t != "join" && t != "split") throw UsageError("--tree must be join or split");
    c.tree = t == "join" ? mtc::TreeKind::Join : mtc::TreeKind::Split;
  }
  if (has("connectivity")) {
    const auto& t = single(s, "connectivity");
    if (t != "4" && t != "8") throw UsageError("--connectivity must be 4 or 8");
    c.connectivity = t == "4" ? mtc::Connectivity::Four : mtc::Connectivity::Eight;
  }
  if (has("simplify")) {
    c.simplify = to_double("simplify", single(s, "simplify"));
    if (!(c.simplify >= 0.0)) throw UsageError("--simplify must be non-negative");
  }
  if (has("format")) {
    try {
      c.format = mtc::parse_field_format(single(s, "format"));
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }
  if (has("dummy")) {
    const auto& d = single(s, "dummy");
    if (d != "leaf" && d != "vertex") throw UsageError("--dummy must be leaf or vertex");
    c.dummy = d == "leaf" ? mtc::DummyMode::Leaf : mtc::DummyMode::Vertex;
  }
  if (has("pivot")) {
    const auto& p = single(s, "pivot");
    if (!kPivots.contains(p)) throw UsageError("--pivot must be global, tv or none");
    c.pivot = kPivots.at(p);
  }
  if (has("epsilon")) {
    c.epsilon = to_double("epsilon", single(s, "epsilon"));
    if (!(c.epsilon >= 0.0)) throw UsageError("--epsilon must be non-negative");
  }
  if (has("threshold")) c.threshold = to_double("threshold", single(s, "threshold"));
  if (has("zscore")) c.zscore = to_double("zscore", single(s, "zscore"));

  std::optional<double> lambda;
  if (has("lambda")) {
    lambda = to_double("lambda", single(s, "lambda"));
    if (!(*lambda >= 0.0 && *lambda <= 1.0)) throw UsageError("--lambda must lie in [0, 1]");
  }
  if (has("mapping")) {
    const auto& m = single(s, "mapping");
    if (!kMappings.contains(m)) throw UsageError("--mapping must be tree, euclidean, hybrid or morse");
    c.mapping = kMappings.at(m);
  } else if (lambda) {
    c.mapping = *lambda == 1.0 ? Mapping::Tree : *lambda == 0.0 ? Mapping::Euclidean : Mapping::Hybrid;
  }
  switch (c.mapping) {
    case Mapping::Tree:
      if (lambda && *lambda != 1.0) throw UsageError("--mapping tree requires --lambda 1");
      c.lambda = 1.0;
      break;
    case Mapping::Euclidean:
      if (lambda && *lambda != 0.0) throw UsageError("--mapping euclidean requires --lambda 0");
      c.lambda = 0.0;
      break;
    case Mapping::Hybrid:
    case Mapping::Morse: c.lambda = lambda.value_or(0.5); break;
  }
  if (c.mapping == Mapping::Morse && has("pivot") && c.pivot != mtc::PivotMode::PivotFree)
    throw UsageError("--mapping morse labels pairs independently; use --pivot none");

  if (has("metric")) {
    c.metrics.clear();
    for (const auto& m : s.at("metric")) {
      mtc::SeriesMetric parsed{};
      try {
        parsed = mtc::parse_metric(m);
      } catch (const std::exception& e) {
        throw UsageError(e.what());
      }
      if (std::find(c.metrics.begin(), c.metrics.end(), parsed) == c.metrics.end()) c.metrics.push_back(parsed);
    }
  }
  return c;
}

Json config_json(const RunConfig& c) {
  Json j;
  j["tree"] = c.tree == mtc::TreeKind::Join ? "join" : "split";
  j["connectivity"] = c.connectivity == mtc::Connectivity::Four ? 4 : 8;
  j["simplify"] = c.simplify;
  j["mapping"] = mapping_name(c.mapping);
  j["lambda"] = c.lambda;
  j["epsilon"] = std::isfinite(c.epsilon) ? Json(c.epsilon) : Json("inf");
  j["dummy"] = c.dummy == mtc::DummyMode::Leaf ? "leaf" : "vertex";
  j["pivot"] = pivot_name(c.mapping_config().pivot_mode);
  Json metrics = Json::array();
  for (auto m : c.metrics) metrics.push_back(mtc::metric_name(m));
  j["metric"] = std::move(metrics);
  if (c.threshold)
    j["transition_rule"] = {{"absolute_threshold", *c.threshold}};
  else
    j["transition_rule"] = {{"robust_zscore", c.zscore}};
  return j;
}

// ---------------------------------------------------------------------------
// Input

struct Dataset {
  std::vector<std::string> names;
  std::vector<mtc::ScalarField> fields;  // empty for tree input
  std::vector<mtc::MergeTree> trees;
  std::optional<std::vector<mtc::Labeling>> labels;  // set when every input tree carries a shared label set
};

std::string stem(const std::string& name) { return fs::path(name).stem().string(); }

Dataset load(const RunConfig& c) {
  if (c.input.empty()) throw UsageError("--input is required");
  if (!fs::is_directory(c.input)) throw mtc::InputError("input '" + c.input + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(c.input))
    if (e.is_regular_file() && e.path().filename().string()[0] != '.') files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw mtc::InputError("empty series: no input files in '" + c.input + "'");

  const bool json = std::all_of(files.begin(), files.end(), [](const fs::path& p) { return p.extension() == ".json"; });
  Dataset d;
  if (!json) {
    const mtc::FieldSeries series = mtc::load_series(c.input, c.format);
    d.names = series.names();
    d.fields = series.instances();
    for (const auto& f : d.fields) d.trees.push_back(mtc::simplify(mtc::build_merge_tree(f, c.tree, c.connectivity), c.simplify));
    return d;
  }

  std::vector<mtc::Labeling> labels;
  bool all_labelled = true;
  for (const auto& p : files) {
    Json doc;
    try {
      doc = Json::parse(mtc::io::read_text(p));
    } catch (const Json::exception& e) {
      throw mtc::InputError(p.filename().string() + ": " + e.what());
    }
    mtc::LabeledTree lt = [&] {
      try {
        return mtc::io::labeled_tree_from_json(doc);
      } catch (const mtc::TreeError& e) {
        throw mtc::InputError(p.filename().string() + ": " + e.what());
      }
    }();
    all_labelled = all_labelled && doc.contains("labels");
    d.names.push_back(p.filename().string());
    if (c.simplify > 0.0) {
      if (doc.contains("labels")) throw UsageError("cannot simplify pre-labelled trees");
      lt.tree = mtc::simplify(lt.tree, c.simplify);
    }
    d.trees.push_back(std::move(lt.tree));
    labels.push_back(std::move(lt.labels));
  }
  if (all_labelled) {
    for (const auto& l : labels)
      if (l.size() != labels.front().size()) throw mtc::InputError("pre-labelled trees must share one label set");
    d.labels = std::move(labels);
  }
  return d;
}

// Shared labels for the whole run.
mtc::SeriesLabeling labelling(const Dataset& d, const RunConfig& c) {
  if (d.labels) {
    mtc::SeriesLabeling s;
    s.trees = d.trees;
    s.labelings = *d.labels;
    return s;
  }
  const mtc::MappingConfig mc = c.mapping_config();
  if (c.mapping != Mapping::Morse) return mtc::label_series(d.trees, mc);
  if (d.fields.empty()) throw UsageError("--mapping morse needs scalar-field input");
  mtc::SeriesLabeling s = mtc::label_series(d.trees, mc);
  s.pair_labeler = [&d, &c](std::size_t i, std::size_t j) {
    return mtc::morse_labels(d.trees[i], d.fields[i], d.trees[j], d.fields[j], c.connectivity, c.lambda);
  };
  return s;
}

fs::path ensure_out(const RunConfig& c) {
  if (c.out.empty()) throw UsageError("--out is required");
  fs::create_directories(c.out);
  return c.out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Commands

void cmd_trees(const RunConfig& c) {
  const Dataset d = load(c);
  const fs::path out = ensure_out(c);
  for (const char* sub : {"trees", "diagrams", "graphs"}) fs::create_directories(out / sub);
  for (std::size_t i = 0; i < d.trees.size(); ++i) {
    const mtc::MergeTree& t = d.trees[i];
    const std::string name = stem(d.names[i]);
    const Json tree = d.labels ? mtc::io::labeled_tree_to_json(t, (*d.labels)[i]) : mtc::io::tree_to_json(t);
    mtc::io::write_text(out / "trees" / (name + ".json"), dump(tree));
    const mtc::PersistenceDiagram diagram = mtc::persistence_pairs(t);
    mtc::io::write_text(out / "diagrams" / (name + ".csv"), mtc::io::diagram_csv(diagram));
    // Sample the graph at 0 and at every persistence value of the tree.
    std::vector<double> ts{0.0};
    for (const auto& p : diagram.pairs) ts.push_back(p.persistence());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    mtc::io::write_text(out / "graphs" / (name + ".csv"),
                        mtc::io::persistence_graph_csv(mtc::persistence_graph(t, ts)));
    if (!d.fields.empty() && c.mapping == Mapping::Morse) {
      fs::create_directories(out / "basins");
      const auto& f = d.fields[i];
      mtc::io::write_text(out / "basins" / (name + ".txt"),
                          mtc::io::basin_map_text(mtc::leaf_basins(f, c.tree, c.connectivity), f.rows(), f.cols()));
    }
  }
  std::cout << "wrote " << d.trees.size() << " trees to " << out.string() << "\n";
}

void cmd_compare(const RunConfig& c) {
  const Dataset d = load(c);
  const fs::path out = ensure_out(c);
  const mtc::MappingConfig mc = c.mapping_config();
  const bool needs_labels = std::any_of(c.metrics.begin(), c.metrics.end(), mtc::is_label_metric);
  const mtc::SeriesLabeling s = needs_labels ? labelling(d, c) : mtc::SeriesLabeling{d.trees, {}, 0, {}};

  if (needs_labels && !s.labelings.empty()) {
    fs::create_directories(out / "labels");
    for (std::size_t i = 0; i < s.trees.size(); ++i)
      mtc::io::write_text(out / "labels" / (stem(d.names[i]) + ".json"),
                          dump(mtc::io::labeled_tree_to_json(s.trees[i], s.labelings[i])));
  }

  Json report;
  report["config"] = config_json(c);
  report["instances"] = d.names;
  report["pivot"] = s.labelings.empty() ? Json(nullptr) : Json(s.pivot);
  Json reports = Json::array();
  for (mtc::SeriesMetric m : c.metrics) {
    if (m == mtc::SeriesMetric::Field && d.fields.empty()) throw UsageError("dF needs scalar-field input");
    const mtc::SeriesReport r = mtc::analyze_series(s, m, mc, d.fields, c.rule());
    const std::string name = mtc::metric_name(m);
    mtc::io::write_text(out / (name + ".csv"), mtc::io::matrix_csv(r.distance_matrix));
    mtc::io::HeatmapScale scale;
    mtc::io::write_text(out / (name + ".pgm"), mtc::io::heatmap_pgm(r.distance_matrix, &scale));
    mtc::io::write_text(out / (name + ".pgm.json"), dump(mtc::io::heatmap_metadata(r.distance_matrix, scale)));
    reports.push_back(mtc::io::report_to_json(r));

    std::cout << name << ":";
    for (const auto& t : r.transitions) std::cout << " " << t.index << "->" << t.index + 1;
    if (r.transitions.empty()) std::cout << " no transitions";
    std::cout << "; " << r.segments.size() << " segment(s)";
    if (r.period) std::cout << "; period " << *r.period;
    std::cout << "\n";
  }
  report["reports"] = std::move(reports);
  mtc::io::write_text(out / "report.json", dump(report));
}

std::string point_text(const std::optional<mtc::Point2>& p) {
  if (!p) return "(-)";
  return "(" + mtc::io::format_number(p->x) + ", " + mtc::io::format_number(p->y) + ")";
}

void cmd_diagnose(const RunConfig& c, long i, long j) {
  const Dataset d = load(c);
  const long l = static_cast<long>(d.trees.size());
  if (i < 0 || j < 0 || i >= l || j >= l)
    throw UsageError("--i and --j must lie in [0, " + std::to_string(l - 1) + "]");
  const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
  const mtc::SeriesLabeling s = labelling(d, c);
  mtc::Diagnosis diag;
  if (!s.labelings.empty()) {
    diag = mtc::diagnose_pair(s.trees[ui], s.labelings[ui], s.trees[uj], s.labelings[uj]);
  } else {
    const mtc::LabeledPair p = s.labeled_pair(ui, uj, c.mapping_config());
    diag = mtc::diagnose_pair(p.first.tree, p.first.labels, p.second.tree, p.second.labels);
  }
  std::cout << "d_I(" << i << ", " << j << ") = " << mtc::io::format_number(diag.distance) << "\n";
  if (!diag.transition) std::cout << "no transition\n";
  for (const auto& k : diag.culprits) {
    std::cout << "labels (" << k.label_i << ", " << k.label_j << ") delta " << mtc::io::format_number(k.delta)
              << "\n  " << d.names[ui] << ": " << point_text(k.coords_a_i) << " f=" << mtc::io::format_number(k.value_a_i)
              << ", " << point_text(k.coords_a_j) << " f=" << mtc::io::format_number(k.value_a_j) << "\n  "
              << d.names[uj] << ": " << point_text(k.coords_b_i) << " f=" << mtc::io::format_number(k.value_b_i)
              << ", " << point_text(k.coords_b_j) << " f=" << mtc::io::format_number(k.value_b_j) << "\n";
  }
  if (!c.out.empty()) {
    const fs::path out = ensure_out(c);
    Json doc = mtc::io::diagnosis_to_json(diag, ui, uj);
    doc["config"] = config_json(c);
    mtc::io::write_text(out / ("diagnose_" + std::to_string(i) + "_" + std::to_string(j) + ".json"), dump(doc));
  }
}

void cmd_generate(const RunConfig& c, const std::string& kind) {
  mtc::synthetic::Series s;
  if (kind == "orbit")
    s = mtc::synthetic::orbit_series();
  else if (kind == "periodic")
    s = mtc::synthetic::periodic_series(8);
  else if (kind == "mirror")
    s = mtc::synthetic::mirror_periodic_series();
  else if (kind == "vanishing")
    s = mtc::synthetic::vanishing_series();
  else
    throw UsageError("--kind must be orbit, periodic, mirror or vanishing");
  const fs::path out = ensure_out(c);
  for (std::size_t t = 0; t < s.fields.size(); ++t) {
    char name[32];
    std::snprintf(name, sizeof name, "t%03zu.txt", t);
    mtc::save_field(s.fields[t], out / name, c.format);
  }
  std::cout << "wrote " << s.fields.size() << " fields to " << out.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compare merge trees of time-varying scalar fields"};
  app.require_subcommand(1);

  Settings flags;
  std::string config_file;
  auto text_option = [&](CLI::App& target, const std::string& key, const std::string& help) {
    return target.add_option_function<std::vector<std::string>>(
        "--" + key, [&flags, key](const std::vector<std::string>& v) { flags[key] = v; }, help);
  };
  text_option(app, "input", "directory of field files or tree JSON files");
  text_option(app, "out", "output directory");
  text_option(app, "tree", "join or split")->check(CLI::IsMember({"join", "split"}));
  text_option(app, "connectivity", "grid neighbourhood: 4 or 8")->check(CLI::IsMember({"4", "8"}));
  text_option(app, "simplify", "persistence simplification threshold");
  text_option(app, "mapping", "tree, euclidean, hybrid or morse")
      ->check(CLI::IsMember({"tree", "euclidean", "hybrid", "morse"}));
  text_option(app, "lambda", "hybrid mapping weight in [0, 1]");
  text_option(app, "epsilon", "initial-assignment distance cutoff (inf for none)");
  text_option(app, "dummy", "leaf or vertex")->check(CLI::IsMember({"leaf", "vertex"}));
  text_option(app, "pivot", "global, tv or none")->check(CLI::IsMember({"global", "tv", "none"}));
  text_option(app, "metric", "dI, dL1, dL2, dB, dW or dF; repeatable");
  text_option(app, "format", "field file format: grid_text or csv");
  text_option(app, "threshold", "flag adjacent distances above this value instead of the z-score rule");
  text_option(app, "zscore", "robust z-score cutoff for transitions (default 3)");
  app.add_option("--config", config_file, "JSON config; flags override its values")->check(CLI::ExistingFile);

  auto* trees = app.add_subcommand("trees", "write merge trees, persistence diagrams and persistence graphs");
  auto* compare = app.add_subcommand("compare", "write distance matrices, heatmaps and a series report");
  auto* diagnose = app.add_subcommand("diagnose", "report the label pairs responsible for d_I between two steps");
  long di = -1, dj = -1;
  diagnose->add_option("--i", di, "first time step")->required();
  diagnose->add_option("--j", dj, "second time step")->required();
  auto* generate = app.add_subcommand("generate", "write a synthetic field series");
  std::string kind = "orbit";
  generate->add_option("--kind", kind, "orbit, periodic, mirror or vanishing");
  for (auto* sub : {trees, compare, diagnose, generate}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Settings merged = config_file.empty() ? Settings{} : settings_from_json(config_file);
    for (const auto& [k, v] : flags) merged[k] = v;
    const RunConfig cfg = resolve(merged);
    if (*trees) cmd_trees(cfg);
    if (*compare) cmd_compare(cfg);
    if (*diagnose) cmd_diagnose(cfg, di, dj);
    if (*generate) cmd_generate(cfg, kind);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const mtc::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
