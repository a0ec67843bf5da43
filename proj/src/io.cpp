#include "varsel/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace varsel {

namespace {

bool valid_name(const std::string& name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t begin = 0;
  while (true) {
    const std::size_t comma = line.find(',', begin);
    cells.push_back(line.substr(begin, comma - begin));
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  return cells;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

bool parse_number(const std::string& raw, double& out) {
  const std::string s = trim(raw);
  if (s.empty()) return false;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Table {
  std::vector<std::string> names;
  Matrix values;
};

Table parse_table(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(std::move(line));
    }
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw EmptyFile("file is empty");

  Table t;
  std::unordered_set<std::string> seen;
  for (auto& raw : split(lines[0])) {
    std::string name = trim(raw);
    if (!valid_name(name)) throw InvalidName(name);
    if (!seen.insert(name).second) throw DuplicateName(name);
    t.names.push_back(std::move(name));
  }
  if (lines.size() < 2) throw EmptyFile("file has a header but no data rows");

  const auto m = t.names.size();
  t.values.resize(static_cast<Eigen::Index>(lines.size() - 1), static_cast<Eigen::Index>(m));
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split(lines[r]);
    if (cells.size() != m) throw RaggedRow(r + 1, m, cells.size());
    for (std::size_t c = 0; c < m; ++c) {
      double v = 0.0;
      if (!parse_number(cells[c], v)) throw NonNumericCell(r + 1, c + 1, cells[c]);
      t.values(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return t;
}

}  // namespace

TimeSeriesDataset parse_csv(const std::string& text, const RoleSpec& roles) {
  Table t = parse_table(text);
  auto listed = [](const std::vector<std::string>& list, const std::string& name) {
    return std::find(list.begin(), list.end(), name) != list.end();
  };
  for (const auto* list : {&roles.dependent, &roles.independent})
    for (const auto& name : *list)
      if (!listed(t.names, name)) throw MissingColumn(name);
  for (const auto& name : roles.dependent)
    if (listed(roles.independent, name))
      throw DataError("column '" + name + "' is listed as both dependent and independent");

  std::vector<Role> assigned;
  for (const auto& name : t.names)
    assigned.push_back(listed(roles.independent, name) ||
                               (!roles.dependent.empty() && !listed(roles.dependent, name))
                           ? Role::Independent
                           : Role::Dependent);
  return TimeSeriesDataset(std::move(t.values), std::move(t.names), std::move(assigned));
}

TimeSeriesDataset load_csv(const std::string& path, const RoleSpec& roles) {
  return parse_csv(read_file(path), roles);
}

Matrix load_matrix_csv(const std::string& path) { return parse_table(read_file(path)).values; }

std::string format_csv(const std::vector<std::string>& names, const Matrix& values) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ',';
    out += names[i];
  }
  out += '\n';
  char buf[32];
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      if (c) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", values(r, c));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string format_csv(const TimeSeriesDataset& ds) {
  return format_csv(ds.names(), ds.observations());
}

void write_csv(const std::string& path, const TimeSeriesDataset& ds) {
  write_text_file(path, format_csv(ds));
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << contents;
  out.flush();
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace varsel
