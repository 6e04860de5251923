#include "lowrr/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace lowrr {

namespace {

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_cell(const std::string& raw, double& out) {
  std::size_t begin = raw.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return false;
  std::size_t end = raw.find_last_not_of(" \t\r");
  const std::string trimmed = raw.substr(begin, end - begin + 1);
  errno = 0;
  char* rest = nullptr;
  const double value = std::strtod(trimmed.c_str(), &rest);
  if (rest != trimmed.c_str() + trimmed.size() || errno == ERANGE) return false;
  if (!std::isfinite(value)) return false;
  out = value;
  return true;
}

}  // namespace

Mat read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open '" + path + "'", 0);

  std::vector<std::vector<double>> rows;
  std::string line;
  int line_number = 0;
  int cols = -1;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (in.peek() == EOF) break;  // tolerate one trailing blank line
      throw CsvError("blank line inside matrix", line_number);
    }
    const auto cells = split_cells(line);
    std::vector<double> row(cells.size());
    bool numeric = true;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (!parse_cell(cells[j], row[j])) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (header_allowed) {
        header_allowed = false;  // single auto-detected header line
        continue;
      }
      throw CsvError("non-numeric cell", line_number);
    }
    header_allowed = false;
    if (cols < 0) cols = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != cols)
      throw CsvError("ragged row: expected " + std::to_string(cols) +
                         " cells, got " + std::to_string(row.size()),
                     line_number);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw CsvError("no numeric rows in '" + path + "'", line_number);

  Mat m(static_cast<int>(rows.size()), cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) m(i, j) = rows[i][j];
  return m;
}

void write_matrix_csv(const Mat& m, const std::string& path) {
  if (m.rows < 1 || m.cols < 1)
    throw std::invalid_argument("write_matrix_csv: matrix has empty dimensions");
  std::ofstream out(path);
  if (!out) throw CsvError("cannot open '" + path + "' for writing", 0);
  char buf[64];
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << buf;
      if (j + 1 < m.cols) out << ',';
    }
    out << '\n';
  }
  if (!out) throw CsvError("write failed for '" + path + "'", 0);
}

}  // namespace lowrr
