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

// Dense symmetric-matrix primitives: covariance estimation, the two
// thresholding operators and guarded inversion.

#ifndef DIFFEE_LINALG_H_
#define DIFFEE_LINALG_H_

#include <cmath>

#include <Eigen/Dense>

#include "diffee/types.h"

namespace diffee {

// Which entries the covariance thresholding operator T_v touches.
enum class ThresholdPolicy {
  kOffDiagonalOnly,  // diagonal passes through unchanged (default)
  kAllEntries,
};

// What "invertible" means for the inversion guard.
enum class InvertibilityRule {
  // Smallest eigenvalue > tol. The default everywhere in the library.
  kPositiveDefinite,
  // Smallest |eigenvalue| > tol; indefinite matrices are accepted and
  // inverted by LU.
  kNonsingular,
};

// (1/n) * sum_i (x_i - xbar)(x_i - xbar)^T. Requires n >= 2.
SymMatrix SampleCovariance(const SampleMatrix& x);

// sign(a) * max(|a| - lambda, 0).
inline double SoftThreshold(double a, double lambda) {
  const double shrunk = std::abs(a) - lambda;
  if (!(shrunk > 0.0)) return 0.0;
  return a > 0.0 ? shrunk : -shrunk;
}

// Entry-wise SoftThreshold over every entry, diagonal included.
SymMatrix SoftThreshold(const SymMatrix& a, double lambda);

// Covariance thresholding T_v: soft-thresholds the entries selected by
// `policy` with level v.
SymMatrix TvThreshold(const SymMatrix& a, double v,
                      ThresholdPolicy policy = ThresholdPolicy::kOffDiagonalOnly);

// All eigenvalues in ascending order.
Eigen::VectorXd Eigenvalues(const SymMatrix& a);

double MinEigenvalue(const SymMatrix& a);

// 1e-8 times the largest diagonal magnitude; falls back to the smallest
// normal double for an all-zero diagonal so the tolerance stays positive.
double DefaultMinEigTol(const SymMatrix& a);

// Quantity compared against the tolerance under `rule`: the smallest
// eigenvalue, or the eigenvalue of smallest magnitude (sign kept).
double InvertibilityMargin(const Eigen::VectorXd& ascending_eigenvalues,
                           InvertibilityRule rule);

// A^{-1}, re-symmetrized as (M + M^T)/2. Throws NotInvertibleError carrying
// the offending eigenvalue when the guard fails.
struct GuardedInverse {
  SymMatrix inverse;
  double margin;  // InvertibilityMargin of the input
};
GuardedInverse InvertSymGuarded(const SymMatrix& a, double min_eig_tol,
                                InvertibilityRule rule);
SymMatrix InvertSym(const SymMatrix& a, double min_eig_tol,
                    InvertibilityRule rule = InvertibilityRule::kPositiveDefinite);
SymMatrix InvertSym(const SymMatrix& a);

// Entry-wise norms of a matrix viewed as a vector.
double MaxAbsEntry(const Eigen::MatrixXd& m);
double FrobeniusNorm(const Eigen::MatrixXd& m);
double EntrywiseL1Norm(const Eigen::MatrixXd& m);

}  // namespace diffee

#endif  // DIFFEE_LINALG_H_
