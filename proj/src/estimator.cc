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

#include "diffee/estimator.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace diffee {
namespace {

void CheckLevel(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw InvalidInputError(std::string(name) +
                            " must be a finite non-negative number");
  }
}

void CheckSameDimension(int a, int b, const char* what) {
  if (a != b) {
    throw DimensionMismatchError(std::string(what) + " dimensions differ: " +
                                 std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

HyperParams::HyperParams(double v, std::vector<double> lambdas, bool single,
                         ThresholdPolicy policy, InvertibilityRule rule)
    : v_(v), lambdas_(std::move(lambdas)), single_(single), policy_(policy), rule_(rule) {
  CheckLevel(v_, "v");
  if (lambdas_.empty()) throw InvalidInputError("lambda grid must be nonempty");
  for (size_t i = 0; i < lambdas_.size(); ++i) {
    CheckLevel(lambdas_[i], "lambda");
    if (i > 0 && !(lambdas_[i] > lambdas_[i - 1])) {
      throw InvalidInputError("lambda grid must be strictly ascending");
    }
  }
}

HyperParams HyperParams::WithLambda(double v, double lambda,
                                    ThresholdPolicy policy,
                                    InvertibilityRule rule) {
  return HyperParams(v, {lambda}, true, policy, rule);
}

HyperParams HyperParams::WithGrid(double v, std::vector<double> lambda_grid,
                                  ThresholdPolicy policy,
                                  InvertibilityRule rule) {
  return HyperParams(v, std::move(lambda_grid), false, policy, rule);
}

double HyperParams::lambda() const {
  if (!single_) throw InvalidInputError("hyper-parameters carry a lambda grid");
  return lambdas_.front();
}

GuardedInverse ThresholdedInverse(const SymMatrix& sigma, double v,
                                  ThresholdPolicy policy, InvertibilityRule rule,
                                  Condition condition) {
  const SymMatrix thresholded = TvThreshold(sigma, v, policy);
  try {
    return InvertSymGuarded(thresholded, DefaultMinEigTol(thresholded), rule);
  } catch (const NotInvertibleError& e) {
    throw e.WithCondition(condition);
  }
}

int CountOffDiagonalSupport(const SymMatrix& m) {
  int count = 0;
  for (int j = 0; j < m.dim(); ++j) {
    for (int i = 0; i < m.dim(); ++i) {
      if (i != j && m(i, j) != 0.0) ++count;
    }
  }
  return count;
}

ProxyMap ProxyBackwardMap(const SymMatrix& sigma_c, const SymMatrix& sigma_d,
                          double v, ThresholdPolicy policy,
                          InvertibilityRule rule) {
  CheckSameDimension(sigma_c.dim(), sigma_d.dim(), "covariance");
  CheckLevel(v, "v");
  GuardedInverse inv_c =
      ThresholdedInverse(sigma_c, v, policy, rule, Condition::kControl);
  GuardedInverse inv_d =
      ThresholdedInverse(sigma_d, v, policy, rule, Condition::kCase);
  return ProxyMap{Subtract(inv_d.inverse, inv_c.inverse, MatrixRole::kDifferential),
                  v, inv_c.margin, inv_d.margin};
}

DiffEstimate EstimateFromProxy(const ProxyMap& proxy, double lambda) {
  SymMatrix delta = SoftThreshold(proxy.map, lambda);
  const int support = CountOffDiagonalSupport(delta);
  return DiffEstimate{std::move(delta), lambda, proxy.v_used, support};
}

DiffEstimate DiffeeFit(const SampleMatrix& xc, const SampleMatrix& xd,
                       const HyperParams& params) {
  const double lambda = params.lambda();
  CheckSameDimension(xc.num_variables(), xd.num_variables(), "sample matrix");
  const ProxyMap proxy =
      ProxyBackwardMap(SampleCovariance(xc), SampleCovariance(xd), params.v(),
                       params.policy(), params.invertibility());
  return EstimateFromProxy(proxy, lambda);
}

std::vector<DiffEstimate> DiffeePath(const SampleMatrix& xc,
                                     const SampleMatrix& xd,
                                     const HyperParams& params) {
  CheckSameDimension(xc.num_variables(), xd.num_variables(), "sample matrix");
  const ProxyMap proxy =
      ProxyBackwardMap(SampleCovariance(xc), SampleCovariance(xd), params.v(),
                       params.policy(), params.invertibility());
  std::vector<DiffEstimate> path;
  path.reserve(params.lambdas().size());
  for (double lambda : params.lambdas()) {
    path.push_back(EstimateFromProxy(proxy, lambda));
  }
  return path;
}

SymMatrix OffDiagonalSoftThreshold(const SymMatrix& inverse, double lambda) {
  CheckLevel(lambda, "lambda");
  Eigen::MatrixXd out = inverse.matrix().unaryExpr(
      [lambda](double value) { return SoftThreshold(value, lambda); });
  out.diagonal() = inverse.matrix().diagonal();
  return MakeSymUnchecked(std::move(out), inverse.role());
}

SymMatrix EeSggm(const SampleMatrix& x, double v, double lambda,
                 ThresholdPolicy policy, InvertibilityRule rule) {
  CheckLevel(lambda, "lambda");
  const GuardedInverse inv =
      ThresholdedInverse(SampleCovariance(x), v, policy, rule, x.condition());
  return OffDiagonalSoftThreshold(inv.inverse, lambda);
}

SymMatrix ExactBackwardMap(const SymMatrix& sigma_c, const SymMatrix& sigma_d) {
  CheckSameDimension(sigma_c.dim(), sigma_d.dim(), "covariance");
  auto invert = [](const SymMatrix& sigma, Condition condition) {
    try {
      return InvertSym(sigma);
    } catch (const NotInvertibleError& e) {
      throw e.WithCondition(condition);
    }
  };
  const SymMatrix inv_c = invert(sigma_c, Condition::kControl);
  const SymMatrix inv_d = invert(sigma_d, Condition::kCase);
  return Subtract(inv_d, inv_c, MatrixRole::kDifferential);
}

std::vector<double> DefaultVGrid() {
  std::vector<double> grid(1000);
  for (int i = 1; i <= 1000; ++i) grid[i - 1] = 0.001 * i;
  return grid;
}

double TheoryV(int p, int n_c, int n_d, double a) {
  if (p < 2 || n_c < 1 || n_d < 1) {
    throw InvalidInputError("TheoryV needs p >= 2 and n_c, n_d >= 1");
  }
  return a * std::sqrt(std::log(static_cast<double>(p)) /
                       static_cast<double>(std::min(n_c, n_d)));
}

double SelectV(const SymMatrix& sigma_c, const SymMatrix& sigma_d,
               std::span<const double> grid, ThresholdPolicy policy,
               InvertibilityRule rule) {
  CheckSameDimension(sigma_c.dim(), sigma_d.dim(), "covariance");
  if (grid.empty()) throw InvalidInputError("v grid must be nonempty");
  for (size_t i = 0; i < grid.size(); ++i) {
    CheckLevel(grid[i], "v");
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw InvalidInputError("v grid must be strictly ascending");
    }
  }

  auto passes = [rule](const SymMatrix& m, double* margin) {
    *margin = InvertibilityMargin(Eigenvalues(m), rule);
    const double tol = DefaultMinEigTol(m);
    return rule == InvertibilityRule::kPositiveDefinite ? *margin > tol
                                                        : std::abs(*margin) > tol;
  };

  double best = -std::numeric_limits<double>::infinity();
  for (double v : grid) {
    double margin_c = 0.0;
    double margin_d = 0.0;
    const bool ok_c = passes(TvThreshold(sigma_c, v, policy), &margin_c);
    const bool ok_d = passes(TvThreshold(sigma_d, v, policy), &margin_d);
    if (ok_c && ok_d) return v;
    double worst = std::min(margin_c, margin_d);
    if (rule == InvertibilityRule::kNonsingular) {
      worst = std::min(std::abs(margin_c), std::abs(margin_d));
    }
    best = std::max(best, worst);
  }
  throw SelectionFailedError(best);
}

DiffEstimate NaiveTwoStep(const SampleMatrix& xc, const SampleMatrix& xd,
                          double v, double lambda, ThresholdPolicy policy,
                          InvertibilityRule rule) {
  CheckSameDimension(xc.num_variables(), xd.num_variables(), "sample matrix");
  const SymMatrix omega_c = EeSggm(xc, v, lambda, policy, rule);
  const SymMatrix omega_d = EeSggm(xd, v, lambda, policy, rule);
  SymMatrix delta = Subtract(omega_d, omega_c, MatrixRole::kDifferential);
  const int support = CountOffDiagonalSupport(delta);
  return DiffEstimate{std::move(delta), lambda, v, support};
}

}  // namespace diffee
