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

// DIFFEE: closed-form elementary estimator of the sparse differential network
// Delta = Omega_d - Omega_c between two Gaussian graphical models.
//
// The estimate is
//
//   Delta_hat = S_lambda( [T_v(Sigma_d)]^{-1} - [T_v(Sigma_c)]^{-1} )
//
// where Sigma_c, Sigma_d are the sample covariances, T_v soft-thresholds the
// covariance entries with level v, and S_lambda soft-thresholds every entry
// of the difference with level lambda. The bracketed difference (the proxy
// backward mapping) does not depend on lambda, so a whole lambda path costs
// one O(p^3) proxy computation plus one O(p^2) thresholding per lambda.

#ifndef DIFFEE_ESTIMATOR_H_
#define DIFFEE_ESTIMATOR_H_

#include <span>
#include <vector>

#include "diffee/linalg.h"
#include "diffee/types.h"

namespace diffee {

// Thresholding level v plus either one lambda or a strictly ascending lambda
// grid. All values are finite and non-negative.
class HyperParams {
 public:
  static HyperParams WithLambda(
      double v, double lambda,
      ThresholdPolicy policy = ThresholdPolicy::kOffDiagonalOnly,
      InvertibilityRule rule = InvertibilityRule::kPositiveDefinite);
  static HyperParams WithGrid(
      double v, std::vector<double> lambda_grid,
      ThresholdPolicy policy = ThresholdPolicy::kOffDiagonalOnly,
      InvertibilityRule rule = InvertibilityRule::kPositiveDefinite);

  double v() const { return v_; }
  const std::vector<double>& lambdas() const { return lambdas_; }
  bool has_single_lambda() const { return single_; }
  // Throws InvalidInputError when the params carry a grid.
  double lambda() const;
  ThresholdPolicy policy() const { return policy_; }
  InvertibilityRule invertibility() const { return rule_; }

 private:
  HyperParams(double v, std::vector<double> lambdas, bool single,
              ThresholdPolicy policy, InvertibilityRule rule);

  double v_;
  std::vector<double> lambdas_;
  bool single_;
  ThresholdPolicy policy_;
  InvertibilityRule rule_;
};

// [T_v(Sigma_d)]^{-1} - [T_v(Sigma_c)]^{-1} together with the diagnostics of
// the two inversions. Immutable; safe to share across threads.
struct ProxyMap {
  SymMatrix map;
  double v_used;
  // Invertibility margins of T_v(Sigma_c) and T_v(Sigma_d): the smallest
  // eigenvalue under the positive-definite rule, the eigenvalue closest to
  // zero under the nonsingular rule.
  double min_eig_c;
  double min_eig_d;
};

struct DiffEstimate {
  SymMatrix delta;
  double lambda;
  double v;
  // Strictly nonzero off-diagonal entries, both triangles counted.
  int support_size;
};

int CountOffDiagonalSupport(const SymMatrix& m);

// The proxy backward mapping. NotInvertibleError from either inversion is
// rethrown tagged with the failing condition.
ProxyMap ProxyBackwardMap(
    const SymMatrix& sigma_c, const SymMatrix& sigma_d, double v,
    ThresholdPolicy policy = ThresholdPolicy::kOffDiagonalOnly,
    InvertibilityRule rule = InvertibilityRule::kPositiveDefinite);

// S_lambda applied to a precomputed proxy map.
DiffEstimate EstimateFromProxy(const ProxyMap& proxy, double lambda);

// Single-lambda DIFFEE fit. Deterministic and non-iterative.
DiffEstimate DiffeeFit(const SampleMatrix& xc, const SampleMatrix& xd,
                       const HyperParams& params);

// One estimate per lambda in params.lambdas(), all sharing one proxy map.
// Element i is bit-identical to DiffeeFit at lambdas()[i].
std::vector<DiffEstimate> DiffeePath(const SampleMatrix& xc,
                                     const SampleMatrix& xd,
                                     const HyperParams& params);

// Single-graph elementary estimator: [T_v(Sigma)]^{-1} with its off-diagonal
// entries soft-thresholded by lambda; the diagonal is kept.
SymMatrix EeSggm(const SampleMatrix& x, double v, double lambda,
                 ThresholdPolicy policy = ThresholdPolicy::kOffDiagonalOnly,
                 InvertibilityRule rule = InvertibilityRule::kPositiveDefinite);

// [T_v(sigma)]^{-1} under the default tolerance; a NotInvertibleError is
// rethrown tagged with `condition`.
GuardedInverse ThresholdedInverse(const SymMatrix& sigma, double v,
                                  ThresholdPolicy policy, InvertibilityRule rule,
                                  Condition condition);

// The off-diagonal S_lambda step of EeSggm applied to a precomputed
// [T_v(Sigma)]^{-1}.
SymMatrix OffDiagonalSoftThreshold(const SymMatrix& inverse, double lambda);

// Sigma_d^{-1} - Sigma_c^{-1}. Throws NotInvertibleError (tagged with the
// condition) when either covariance is singular, e.g. whenever p > n.
SymMatrix ExactBackwardMap(const SymMatrix& sigma_c, const SymMatrix& sigma_d);

// The grid {0.001 i | i = 1..1000}.
std::vector<double> DefaultVGrid();

// a * sqrt(log p / min(n_c, n_d)), natural log.
double TheoryV(int p, int n_c, int n_d, double a = 1.0);

// Smallest grid value v for which both T_v(sigma_c) and T_v(sigma_d) pass
// the invertibility guard with their default tolerances. Throws
// SelectionFailedError when none does.
double SelectV(const SymMatrix& sigma_c, const SymMatrix& sigma_d,
               std::span<const double> grid,
               ThresholdPolicy policy = ThresholdPolicy::kOffDiagonalOnly,
               InvertibilityRule rule = InvertibilityRule::kPositiveDefinite);

// Baseline: EeSggm on each condition separately, then the difference of the
// two precision estimates with no further thresholding.
DiffEstimate NaiveTwoStep(
    const SampleMatrix& xc, const SampleMatrix& xd, double v, double lambda,
    ThresholdPolicy policy = ThresholdPolicy::kOffDiagonalOnly,
    InvertibilityRule rule = InvertibilityRule::kPositiveDefinite);

}  // namespace diffee

#endif  // DIFFEE_ESTIMATOR_H_
