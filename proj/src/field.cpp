#include "mtc/field.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mtc {

namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  // Trailing blank lines carry no data.
  while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string_view::npos) lines.pop_back();
  return lines;
}

std::vector<Token> split_tokens(std::string_view line, char separator) {
  std::vector<Token> tokens;
  if (separator == ' ') {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      tokens.push_back({line.substr(i, j - i), i + 1});
      i = j;
    }
    return tokens;
  }
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find(separator, start);
    std::string_view raw = line.substr(start, end == std::string_view::npos ? line.size() - start : end - start);
    std::size_t lead = raw.find_first_not_of(" \t");
    std::size_t col = start + 1;
    if (lead == std::string_view::npos) {
      raw = {};
    } else {
      col += lead;
      raw.remove_prefix(lead);
      raw = raw.substr(0, raw.find_last_not_of(" \t") + 1);
    }
    tokens.push_back({raw, col});
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return tokens;
}

double parse_number(const Token& token, std::size_t line) {
  std::string_view s = token.text;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec == std::errc::invalid_argument || ptr != s.data() + s.size())
    throw ParseError("non-numeric token '" + std::string(token.text) + "'", line, token.column);
  if (ec == std::errc::result_out_of_range || !std::isfinite(value))
    throw ParseError("non-finite value '" + std::string(token.text) + "'", line, token.column);
  return value;
}

std::size_t parse_count(const Token& token, std::size_t line) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(token.text.data(), token.text.data() + token.text.size(), value);
  if (ec != std::errc() || ptr != token.text.data() + token.text.size() || value == 0)
    throw ParseError("malformed header: expected positive integer, got '" + std::string(token.text) + "'", line,
                     token.column);
  return value;
}

ScalarField parse_grid_text(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("malformed header: empty input", 1, 1);
  auto header = split_tokens(lines[0], ' ');
  if (header.size() != 2) throw ParseError("malformed header: expected 'rows cols'", 1, 1);
  const std::size_t rows = parse_count(header[0], 1);
  const std::size_t cols = parse_count(header[1], 1);

  std::vector<double> values;
  values.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t line_no = r + 2;
    if (r + 1 >= lines.size())
      throw ParseError("ragged rows: expected " + std::to_string(rows) + " rows, found " + std::to_string(r), line_no,
                       1);
    auto tokens = split_tokens(lines[r + 1], ' ');
    if (tokens.size() != cols)
      throw ParseError("ragged rows: expected " + std::to_string(cols) + " values, found " +
                           std::to_string(tokens.size()),
                       line_no, tokens.empty() ? 1 : tokens.back().column);
    for (const auto& tok : tokens) values.push_back(parse_number(tok, line_no));
  }
  if (lines.size() > rows + 1)
    throw ParseError("ragged rows: more than " + std::to_string(rows) + " rows", rows + 2, 1);
  return ScalarField(rows, cols, std::move(values));
}

ScalarField parse_csv(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("malformed header: empty input", 1, 1);
  std::size_t cols = 0;
  std::vector<double> values;
  for (std::size_t r = 0; r < lines.size(); ++r) {
    auto tokens = split_tokens(lines[r], ',');
    if (r == 0) cols = tokens.size();
    if (tokens.size() != cols)
      throw ParseError("ragged rows: expected " + std::to_string(cols) + " values, found " +
                           std::to_string(tokens.size()),
                       r + 1, tokens.back().column);
    for (const auto& tok : tokens) values.push_back(parse_number(tok, r + 1));
  }
  return ScalarField(lines.size(), cols, std::move(values));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void append_double(std::string& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : InputError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

ScalarField::ScalarField(std::size_t rows, std::size_t cols, std::vector<double> values, Spacing spacing)
    : rows_(rows), cols_(cols), values_(std::move(values)), spacing_(spacing) {
  if (rows == 0 || cols == 0) throw InputError("field must have at least one row and one column");
  if (values_.size() != rows * cols)
    throw InputError("field has " + std::to_string(values_.size()) + " values, expected " +
                     std::to_string(rows * cols));
  if (!(spacing.x > 0.0) || !(spacing.y > 0.0)) throw InputError("grid spacing must be positive");
  for (double v : values_)
    if (!std::isfinite(v)) throw InputError("field contains a non-finite value");
}

Point2 ScalarField::coords(std::size_t index) const {
  return {static_cast<double>(col_of(index)) * spacing_.x, static_cast<double>(row_of(index)) * spacing_.y};
}

bool ScalarField::same_shape(const ScalarField& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && spacing_ == other.spacing_;
}

FieldSeries::FieldSeries(std::vector<ScalarField> instances, std::vector<std::string> names)
    : instances_(std::move(instances)), names_(std::move(names)) {
  if (instances_.empty()) throw InputError("empty series");
  if (names_.size() != instances_.size()) throw InputError("series names and instances differ in length");
  for (std::size_t i = 1; i < instances_.size(); ++i) {
    if (!instances_[i].same_shape(instances_[0]))
      throw InputError("shape mismatch: '" + names_[i] + "' is " + std::to_string(instances_[i].rows()) + "x" +
                       std::to_string(instances_[i].cols()) + ", expected " + std::to_string(instances_[0].rows()) +
                       "x" + std::to_string(instances_[0].cols()));
  }
  std::vector<std::string> sorted = names_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw InputError("duplicate series names");
}

ScalarField parse_field(const std::string& text, FieldFormat format) {
  return format == FieldFormat::GridText ? parse_grid_text(text) : parse_csv(text);
}

ScalarField load_field(const std::filesystem::path& path, FieldFormat format) {
  try {
    return parse_field(read_file(path), format);
  } catch (const ParseError& e) {
    throw ParseError(path.filename().string() + ": " + e.what(), e.line(), e.column());
  }
}

FieldSeries load_series(const std::filesystem::path& dir, FieldFormat format) {
  if (!std::filesystem::is_directory(dir)) throw InputError("not a directory: '" + dir.string() + "'");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().filename().string().front() != '.') files.push_back(entry.path());
  if (files.empty()) throw InputError("empty series: no field files in '" + dir.string() + "'");
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });

  std::vector<ScalarField> instances;
  std::vector<std::string> names;
  for (const auto& f : files) {
    instances.push_back(load_field(f, format));
    names.push_back(f.filename().string());
  }
  return FieldSeries(std::move(instances), std::move(names));
}

std::string format_field(const ScalarField& field, FieldFormat format) {
  std::string out;
  const char sep = format == FieldFormat::Csv ? ',' : ' ';
  if (format == FieldFormat::GridText) out += std::to_string(field.rows()) + " " + std::to_string(field.cols()) + "\n";
  for (std::size_t r = 0; r < field.rows(); ++r) {
    for (std::size_t c = 0; c < field.cols(); ++c) {
      if (c) out += sep;
      append_double(out, field.at(r, c));
    }
    out += '\n';
  }
  return out;
}

void save_field(const ScalarField& field, const std::filesystem::path& path, FieldFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << format_field(field, format);
}

ScalarField negate(const ScalarField& field) {
  std::vector<double> v(field.values().begin(), field.values().end());
  for (double& x : v) x = -x;
  return ScalarField(field.rows(), field.cols(), std::move(v), field.spacing());
}

FieldFormat parse_field_format(const std::string& name) {
  if (name == "grid_text" || name == "grid" || name == "txt") return FieldFormat::GridText;
  if (name == "csv") return FieldFormat::Csv;
  throw InputError("unknown field format '" + name + "'");
}

}  // namespace mtc
