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

#ifndef DIFFEE_TYPES_H_
#define DIFFEE_TYPES_H_

#include <span>

#include <Eigen/Dense>

#include "diffee/errors.h"

namespace diffee {

// An n x p block of observations (rows are samples) from one condition.
// Entries are finite; n >= 1 and p >= 1.
class SampleMatrix {
 public:
  SampleMatrix(Eigen::MatrixXd data, Condition condition);

  const Eigen::MatrixXd& data() const { return data_; }
  int num_samples() const { return static_cast<int>(data_.rows()); }
  int num_variables() const { return static_cast<int>(data_.cols()); }
  Condition condition() const { return condition_; }

 private:
  Eigen::MatrixXd data_;
  Condition condition_;
};

enum class MatrixRole { kCovariance, kPrecision, kDifferential };

// Dense symmetric p x p matrix. Symmetry is exact (entry (i, j) is
// bit-identical to (j, i)) and every entry is finite; both are checked on
// construction.
class SymMatrix {
 public:
  // Throws InvalidInputError unless `data` is square, exactly symmetric and
  // finite.
  SymMatrix(Eigen::MatrixXd data, MatrixRole role);

  // (m + m^T) / 2, which is exactly symmetric in IEEE arithmetic.
  static SymMatrix Symmetrize(const Eigen::MatrixXd& m, MatrixRole role);
  static SymMatrix Identity(int dim, MatrixRole role);
  static SymMatrix Zero(int dim, MatrixRole role);
  static SymMatrix Diagonal(std::span<const double> diagonal, MatrixRole role);

  int dim() const { return static_cast<int>(data_.rows()); }
  MatrixRole role() const { return role_; }
  const Eigen::MatrixXd& matrix() const { return data_; }
  double operator()(int i, int j) const { return data_(i, j); }

  SymMatrix WithRole(MatrixRole role) const { return SymMatrix(*this, role); }

  // Exact entry-wise equality; role is ignored.
  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.data_.rows() == b.data_.rows() && a.data_ == b.data_;
  }

 private:
  struct Unchecked {};
  SymMatrix(Eigen::MatrixXd data, MatrixRole role, Unchecked)
      : data_(std::move(data)), role_(role) {}
  SymMatrix(const SymMatrix& other, MatrixRole role)
      : data_(other.data_), role_(role) {}

  friend SymMatrix MakeSymUnchecked(Eigen::MatrixXd data, MatrixRole role);

  Eigen::MatrixXd data_;
  MatrixRole role_;
};

// For library internals whose output is symmetric and finite by
// construction. Not part of the public API.
SymMatrix MakeSymUnchecked(Eigen::MatrixXd data, MatrixRole role);

// a - b; symmetric because both operands are.
SymMatrix Subtract(const SymMatrix& a, const SymMatrix& b, MatrixRole role);

}  // namespace diffee

#endif  // DIFFEE_TYPES_H_
