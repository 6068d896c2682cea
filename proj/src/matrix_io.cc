// Copyright 2026 The DIFFEE Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "diffee/matrix_io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>
#include <vector>

#include "diffee/errors.h"

namespace diffee {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double ParseField(std::string_view field, size_t line_number) {
  field = Trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || end != field.data() + field.size() ||
      !std::isfinite(value)) {
    throw InvalidInputError("line " + std::to_string(line_number) +
                            ": not a finite number: '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::string FormatDouble(double value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buffer, end);
}

void WriteMatrixCsv(std::ostream& out, const Eigen::MatrixXd& m) {
  std::string line;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    line.clear();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) line += ',';
      line += FormatDouble(m(i, j));
    }
    line += '\n';
    out << line;
  }
}

Eigen::MatrixXd ReadMatrixCsv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string_view view = Trim(line);
    if (view.empty()) continue;
    std::vector<double> row;
    size_t start = 0;
    while (true) {
      const size_t comma = view.find(',', start);
      row.push_back(ParseField(view.substr(start, comma - start), line_number));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidInputError("line " + std::to_string(line_number) + " has " +
                              std::to_string(row.size()) + " columns, expected " +
                              std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidInputError("matrix file is empty");

  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void WriteMatrixFile(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  WriteMatrixCsv(out, m);
  if (!out) throw IoError("write failed: " + path.string());
}

Eigen::MatrixXd ReadMatrixFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  try {
    return ReadMatrixCsv(in);
  } catch (const InvalidInputError& e) {
    throw InvalidInputError(path.string() + ": " + e.what());
  }
}

}  // namespace diffee
