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

#include "diffee/linalg.h"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace diffee {
namespace {

void CheckThresholdLevel(double level, const char* name) {
  if (!(level >= 0.0) || !std::isfinite(level)) {
    throw InvalidInputError(std::string(name) +
                            " must be a finite non-negative number, got " +
                            std::to_string(level));
  }
}

MatrixRole InverseRole(MatrixRole role) {
  switch (role) {
    case MatrixRole::kCovariance:
      return MatrixRole::kPrecision;
    case MatrixRole::kPrecision:
      return MatrixRole::kCovariance;
    case MatrixRole::kDifferential:
      break;
  }
  return MatrixRole::kDifferential;
}

}  // namespace

SymMatrix SampleCovariance(const SampleMatrix& x) {
  const int n = x.num_samples();
  if (n < 2) {
    throw InvalidInputError("sample covariance needs n >= 2 samples, got " +
                            std::to_string(n));
  }
  const Eigen::RowVectorXd mean = x.data().colwise().mean();
  const Eigen::MatrixXd centered = x.data().rowwise() - mean;
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n);
  return SymMatrix::Symmetrize(cov, MatrixRole::kCovariance);
}

SymMatrix SoftThreshold(const SymMatrix& a, double lambda) {
  CheckThresholdLevel(lambda, "lambda");
  Eigen::MatrixXd out = a.matrix().unaryExpr(
      [lambda](double value) { return SoftThreshold(value, lambda); });
  return MakeSymUnchecked(std::move(out), a.role());
}

SymMatrix TvThreshold(const SymMatrix& a, double v, ThresholdPolicy policy) {
  CheckThresholdLevel(v, "v");
  Eigen::MatrixXd out =
      a.matrix().unaryExpr([v](double value) { return SoftThreshold(value, v); });
  if (policy == ThresholdPolicy::kOffDiagonalOnly) {
    out.diagonal() = a.matrix().diagonal();
  }
  return MakeSymUnchecked(std::move(out), a.role());
}

Eigen::VectorXd Eigenvalues(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.matrix(),
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error("symmetric eigensolver did not converge");
  }
  return solver.eigenvalues();
}

double MinEigenvalue(const SymMatrix& a) { return Eigenvalues(a)(0); }

double DefaultMinEigTol(const SymMatrix& a) {
  const double scale = a.matrix().diagonal().cwiseAbs().maxCoeff();
  if (scale > 0.0) return 1e-8 * scale;
  return std::numeric_limits<double>::min();
}

double InvertibilityMargin(const Eigen::VectorXd& ascending_eigenvalues,
                           InvertibilityRule rule) {
  if (rule == InvertibilityRule::kPositiveDefinite) {
    return ascending_eigenvalues(0);
  }
  Eigen::Index closest = 0;
  ascending_eigenvalues.cwiseAbs().minCoeff(&closest);
  return ascending_eigenvalues(closest);
}

GuardedInverse InvertSymGuarded(const SymMatrix& a, double min_eig_tol,
                                InvertibilityRule rule) {
  if (!(min_eig_tol > 0.0) || !std::isfinite(min_eig_tol)) {
    throw InvalidInputError("min_eig_tol must be a positive finite number");
  }
  const double margin = InvertibilityMargin(Eigenvalues(a), rule);
  const bool passes = rule == InvertibilityRule::kPositiveDefinite
                          ? margin > min_eig_tol
                          : std::abs(margin) > min_eig_tol;
  if (!passes) throw NotInvertibleError(margin, min_eig_tol);

  const Eigen::Index p = a.dim();
  Eigen::MatrixXd inverse;
  if (rule == InvertibilityRule::kPositiveDefinite) {
    Eigen::LLT<Eigen::MatrixXd> llt(a.matrix());
    if (llt.info() != Eigen::Success) throw NotInvertibleError(margin, min_eig_tol);
    inverse = llt.solve(Eigen::MatrixXd::Identity(p, p));
  } else {
    inverse = Eigen::PartialPivLU<Eigen::MatrixXd>(a.matrix()).inverse();
  }
  if (!inverse.allFinite()) throw NotInvertibleError(margin, min_eig_tol);
  return {SymMatrix::Symmetrize(inverse, InverseRole(a.role())), margin};
}

SymMatrix InvertSym(const SymMatrix& a, double min_eig_tol,
                    InvertibilityRule rule) {
  return InvertSymGuarded(a, min_eig_tol, rule).inverse;
}

SymMatrix InvertSym(const SymMatrix& a) {
  return InvertSym(a, DefaultMinEigTol(a));
}

double MaxAbsEntry(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double FrobeniusNorm(const Eigen::MatrixXd& m) { return m.norm(); }

double EntrywiseL1Norm(const Eigen::MatrixXd& m) { return m.cwiseAbs().sum(); }

}  // namespace diffee
