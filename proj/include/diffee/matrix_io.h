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

// Matrix files: header-less comma-separated decimal text, one row per line,
// every row with the same number of columns. Values are written in the
// shortest form that parses back to the identical double.

#ifndef DIFFEE_MATRIX_IO_H_
#define DIFFEE_MATRIX_IO_H_

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>

#include <Eigen/Dense>

namespace diffee {

std::string FormatDouble(double value);

void WriteMatrixCsv(std::ostream& out, const Eigen::MatrixXd& m);

// Throws InvalidInputError on an empty input, a ragged row, or a field that
// is not a finite decimal number.
Eigen::MatrixXd ReadMatrixCsv(std::istream& in);

// File variants; IoError when the file cannot be opened.
void WriteMatrixFile(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd ReadMatrixFile(const std::filesystem::path& path);

}  // namespace diffee

#endif  // DIFFEE_MATRIX_IO_H_
