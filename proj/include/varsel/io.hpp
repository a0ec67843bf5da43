#pragma once

// CSV dialect: comma separated, dot decimal, header row of names made of
// [A-Za-z0-9_], one time point per row, no quoting, no missing cells.
// Row numbers in errors are 1-based file lines, so the header is line 1.

#include <cstddef>
#include <string>
#include <vector>

#include "varsel/error.hpp"
#include "varsel/model.hpp"

namespace varsel {

class CsvError : public DataError {
 public:
  using DataError::DataError;
};

class FileNotFound : public CsvError {
 public:
  explicit FileNotFound(const std::string& path)
      : CsvError("cannot open '" + path + "'"), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class EmptyFile : public CsvError {
 public:
  using CsvError::CsvError;
};

class DuplicateName : public CsvError {
 public:
  explicit DuplicateName(const std::string& name)
      : CsvError("duplicate column name '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class InvalidName : public CsvError {
 public:
  explicit InvalidName(const std::string& name)
      : CsvError("invalid column name '" + name + "' (allowed: A-Z a-z 0-9 _)"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class RaggedRow : public CsvError {
 public:
  RaggedRow(std::size_t row, std::size_t expected, std::size_t found)
      : CsvError("row " + std::to_string(row) + " has " + std::to_string(found) +
                 " cells, expected " + std::to_string(expected)),
        row_(row), expected_(expected), found_(found) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t expected() const noexcept { return expected_; }
  std::size_t found() const noexcept { return found_; }

 private:
  std::size_t row_, expected_, found_;
};

class NonNumericCell : public CsvError {
 public:
  NonNumericCell(std::size_t row, std::size_t column, std::string text)
      : CsvError("non-numeric cell '" + text + "' at row " + std::to_string(row) + ", column " +
                 std::to_string(column)),
        row_(row), column_(column), text_(std::move(text)) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }  // 1-based
  const std::string& text() const noexcept { return text_; }

 private:
  std::size_t row_, column_;
  std::string text_;
};

class MissingColumn : public CsvError {
 public:
  explicit MissingColumn(const std::string& name)
      : CsvError("no column named '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

// Column roles by name. Unlisted columns are independent when any dependent
// name is given, dependent otherwise. Columns keep their file order.
struct RoleSpec {
  std::vector<std::string> dependent;
  std::vector<std::string> independent;
};

TimeSeriesDataset parse_csv(const std::string& text, const RoleSpec& roles = {});
TimeSeriesDataset load_csv(const std::string& path, const RoleSpec& roles = {});

// Plain numeric table, every column read as-is.
Matrix load_matrix_csv(const std::string& path);

// Values at 17 significant digits, so reading back is bit exact.
std::string format_csv(const std::vector<std::string>& names, const Matrix& values);
std::string format_csv(const TimeSeriesDataset& ds);
void write_csv(const std::string& path, const TimeSeriesDataset& ds);

// Throws Error naming the path on failure.
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace varsel
