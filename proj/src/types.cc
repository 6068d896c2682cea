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

#include "diffee/types.h"

#include <sstream>
#include <string>

namespace diffee {

NotInvertibleError::NotInvertibleError(double eigenvalue, double tolerance,
                                       std::optional<Condition> condition)
    : Error([&] {
        std::ostringstream msg;
        msg << "matrix not invertible";
        if (condition) msg << " for condition '" << ConditionTag(*condition) << "'";
        msg << ": smallest eigenvalue " << eigenvalue << " <= tolerance "
            << tolerance;
        return msg.str();
      }()),
      eigenvalue_(eigenvalue),
      tolerance_(tolerance),
      condition_(condition) {}

SelectionFailedError::SelectionFailedError(double best_min_eigenvalue)
    : Error("no v in the grid makes both thresholded covariances invertible; "
            "best smallest eigenvalue reached: " +
            std::to_string(best_min_eigenvalue)),
      best_min_eigenvalue_(best_min_eigenvalue) {}

SampleMatrix::SampleMatrix(Eigen::MatrixXd data, Condition condition)
    : data_(std::move(data)), condition_(condition) {
  if (data_.rows() < 1 || data_.cols() < 1) {
    throw InvalidInputError("sample matrix must have n >= 1 rows and p >= 1 columns");
  }
  if (!data_.allFinite()) {
    throw InvalidInputError("sample matrix contains non-finite entries");
  }
}

SymMatrix::SymMatrix(Eigen::MatrixXd data, MatrixRole role)
    : data_(std::move(data)), role_(role) {
  if (data_.rows() != data_.cols() || data_.rows() < 1) {
    throw InvalidInputError("symmetric matrix must be square with dim >= 1");
  }
  if (!data_.allFinite()) {
    throw InvalidInputError("symmetric matrix contains non-finite entries");
  }
  const Eigen::Index p = data_.rows();
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = j + 1; i < p; ++i) {
      if (data_(i, j) != data_(j, i)) {
        throw InvalidInputError("matrix is not exactly symmetric at (" +
                                std::to_string(i) + ", " + std::to_string(j) +
                                ")");
      }
    }
  }
}

SymMatrix SymMatrix::Symmetrize(const Eigen::MatrixXd& m, MatrixRole role) {
  if (m.rows() != m.cols()) {
    throw InvalidInputError("cannot symmetrize a non-square matrix");
  }
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  return SymMatrix(std::move(sym), role);
}

SymMatrix SymMatrix::Identity(int dim, MatrixRole role) {
  return SymMatrix(Eigen::MatrixXd::Identity(dim, dim), role);
}

SymMatrix SymMatrix::Zero(int dim, MatrixRole role) {
  return SymMatrix(Eigen::MatrixXd::Zero(dim, dim), role);
}

SymMatrix SymMatrix::Diagonal(std::span<const double> diagonal, MatrixRole role) {
  const auto p = static_cast<Eigen::Index>(diagonal.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) m(i, i) = diagonal[i];
  return SymMatrix(std::move(m), role);
}

SymMatrix MakeSymUnchecked(Eigen::MatrixXd data, MatrixRole role) {
  return SymMatrix(std::move(data), role, SymMatrix::Unchecked{});
}

SymMatrix Subtract(const SymMatrix& a, const SymMatrix& b, MatrixRole role) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatchError("cannot subtract matrices of dimension " +
                                 std::to_string(a.dim()) + " and " +
                                 std::to_string(b.dim()));
  }
  return SymMatrix(a.matrix() - b.matrix(), role);
}

}  // namespace diffee
