#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtc {

// Raised for unreadable or malformed input data (bad files, shape mismatches).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

enum class FieldFormat { GridText, Csv };

struct Spacing {
  double x = 1.0;
  double y = 1.0;
  bool operator==(const Spacing&) const = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2&) const = default;
};

/// A rectangular grid of finite samples stored row-major.
///
/// Grid vertex (row, col) sits at (col * spacing.x, row * spacing.y) in the
/// domain. Instances are immutable once constructed.
class ScalarField {
 public:
  ScalarField(std::size_t rows, std::size_t cols, std::vector<double> values, Spacing spacing = {});

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }
  const Spacing& spacing() const { return spacing_; }
  std::span<const double> values() const { return values_; }

  double operator[](std::size_t index) const { return values_[index]; }
  double at(std::size_t row, std::size_t col) const { return values_[row * cols_ + col]; }

  std::size_t row_of(std::size_t index) const { return index / cols_; }
  std::size_t col_of(std::size_t index) const { return index % cols_; }
  Point2 coords(std::size_t index) const;

  bool same_shape(const ScalarField& other) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
  Spacing spacing_;
};

/// Time-ordered list of fields over a common grid.
class FieldSeries {
 public:
  FieldSeries(std::vector<ScalarField> instances, std::vector<std::string> names);

  std::size_t size() const { return instances_.size(); }
  const ScalarField& operator[](std::size_t i) const { return instances_[i]; }
  const std::vector<ScalarField>& instances() const { return instances_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<ScalarField> instances_;
  std::vector<std::string> names_;
};

ScalarField parse_field(const std::string& text, FieldFormat format);
ScalarField load_field(const std::filesystem::path& path, FieldFormat format);

/// Loads every regular file in `dir` in lexicographic filename order.
FieldSeries load_series(const std::filesystem::path& dir, FieldFormat format);

std::string format_field(const ScalarField& field, FieldFormat format = FieldFormat::GridText);
void save_field(const ScalarField& field, const std::filesystem::path& path,
                FieldFormat format = FieldFormat::GridText);

ScalarField negate(const ScalarField& field);

FieldFormat parse_field_format(const std::string& name);

}  // namespace mtc
