// Copyright 2026 The spectral-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spectral/matrix_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace spectral {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& raw, std::size_t line, std::size_t col) {
  const std::string cell = trim(raw);
  if (cell.empty()) {
    throw InputError("csv: empty cell at line " + std::to_string(line) + ", column " +
                     std::to_string(col));
  }
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size() || (errno == ERANGE && std::abs(v) > 1.0) ||
      !std::isfinite(v)) {
    throw InputError("csv: bad number '" + cell + "' at line " + std::to_string(line) +
                     ", column " + std::to_string(col));
  }
  return v;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  std::size_t col = 0;
  while (std::getline(ss, cell, ',')) out.push_back(parse_cell(cell, 1, ++col));
  if (out.empty()) throw InputError("empty list '" + text + "'");
  return out;
}

DenseMatrix parse_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(ss, cell, ',')) row.push_back(parse_cell(cell, lineno, ++col));
    if (!line.empty() && line.back() == ',') {
      throw InputError("csv: trailing comma at line " + std::to_string(lineno));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InputError("csv: ragged row at line " + std::to_string(lineno) + " (" +
                       std::to_string(row.size()) + " cells, expected " +
                       std::to_string(rows.front().size()) + ")");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("csv: no data rows");

  DenseMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

DenseMatrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("csv: cannot open '" + path + "'");
  return parse_matrix_csv(in);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_matrix_csv(std::ostream& out, const DenseMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::string& path, const DenseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw InputError("csv: cannot write '" + path + "'");
  write_matrix_csv(out, m);
  if (!out) throw InputError("csv: write failed for '" + path + "'");
}

}  // namespace spectral
