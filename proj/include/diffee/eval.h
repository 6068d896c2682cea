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

// Edge-level scoring, the lambda grid, timing, and the per-cell experiment
// runner used by the bench subcommand.

#ifndef DIFFEE_EVAL_H_
#define DIFFEE_EVAL_H_

#include <chrono>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "diffee/datagen.h"
#include "diffee/estimator.h"
#include "diffee/linalg.h"

namespace diffee {

// Confusion counts over the strictly upper triangle (p(p-1)/2 candidate
// edges) and the derived scores, with 0/0 read as 0.
struct EdgeScore {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  // fp / (fp + tn): share of true non-edges predicted as edges.
  double false_positive_rate() const;
};

EdgeScore F1Score(const SymMatrix& estimate, const SymMatrix& truth);

// Score from raw counts; exposed for the formulas' own tests.
EdgeScore ScoreFromCounts(std::int64_t tp, std::int64_t fp, std::int64_t fn,
                          std::int64_t tn);

// {0.01 * sqrt(ln p / min(n_c, n_d)) * i | i = 1..30}.
std::vector<double> LambdaGrid(int p, int n_c, int n_d);

// Wall time of f() on the steady clock, in seconds.
template <typename F>
double TimingProbe(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  std::forward<F>(f)();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

enum class Method { kDiffee, kNaive };

std::string MethodName(Method method);
Method ParseMethod(std::string_view name);

// How a cell picks the covariance threshold v.
struct VRule {
  enum class Kind {
    kGridPositiveDefinite,  // SelectV over DefaultVGrid(), PD guard
    kGridNonsingular,       // SelectV over DefaultVGrid(), nonsingular guard
    kTheory,                // TheoryV(p, n_c, n_d, value)
    kFixed,                 // v = value
  };
  Kind kind = Kind::kGridNonsingular;
  double value = 1.0;

  // Accepts "grid-pd", "grid-nonsingular", "theory", "theory:<a>",
  // "fixed:<v>" or a bare number (fixed v).
  static VRule Parse(std::string_view text);
  std::string ToString() const;
  // Guard used for the inversions once v is chosen.
  InvertibilityRule invertibility() const;
};

struct CellSpec {
  GraphModel model = GraphModel::kModel2;
  int p = 100;
  double s = 0.2;
  int n_c = 50;
  int n_d = 50;
  Method method = Method::kDiffee;
  VRule v_rule;
  ThresholdPolicy policy = ThresholdPolicy::kOffDiagonalOnly;
  // When false every timing field is reported as 0 so outputs are
  // byte-reproducible.
  bool timing = true;

  std::string Describe() const;
};

struct LambdaResult {
  double lambda = 0.0;
  EdgeScore score;
  int support_size = 0;
  double fit_seconds = 0.0;
};

struct SeedResult {
  std::uint64_t seed = 0;
  double v = 0.0;
  std::vector<LambdaResult> per_lambda;
  size_t best_index = 0;  // first lambda reaching the maximum F1
  double fit_time_total = 0.0;

  const LambdaResult& best() const { return per_lambda[best_index]; }
};

struct EvalReport {
  CellSpec cell;
  std::vector<SeedResult> seeds;
  double best_f1_mean = 0.0;
  // Lambda-summed fit time of one repetition, averaged over seeds.
  double mean_total_seconds = 0.0;
};

// Error from inside a cell, prefixed with the cell coordinates and seed.
class CellError : public Error {
 public:
  using Error::Error;
};

// Data for one repetition: truth plus the two sample blocks, drawn from the
// child seeds "truth", "x_c" and "x_d" of `seed`.
struct SimulatedData {
  GroundTruth truth;
  SampleMatrix x_c;
  SampleMatrix x_d;
};
SimulatedData Simulate(GraphModel model, int p, double s, int n_c, int n_d,
                       std::uint64_t seed);

// v for one repetition according to `rule`.
double ChooseV(const VRule& rule, const SymMatrix& sigma_c,
               const SymMatrix& sigma_d, int n_c, int n_d,
               ThresholdPolicy policy);

// Generate, sample, fit across the full lambda grid, score every lambda.
// Timing covers covariance, proxy/inverse construction and thresholding;
// data generation and v selection are excluded.
SeedResult RunSeed(const CellSpec& cell, std::uint64_t seed);

// RunSeed over all seeds, aggregated. Throws CellError on the first failure.
EvalReport RunCell(const CellSpec& cell, std::span<const std::uint64_t> seeds);

// CSV layouts emitted by the bench subcommand.
inline constexpr std::string_view kRunsCsvHeader =
    "model,p,s,nc,nd,method,seed,lambda,v,f1,precision,recall,support,fit_seconds";
inline constexpr std::string_view kAggregateCsvHeader =
    "model,p,s,nc,nd,method,best_f1_mean,total_seconds";

void WriteRunsCsvRows(std::ostream& out, const EvalReport& report);
void WriteAggregateCsvRow(std::ostream& out, const EvalReport& report);

}  // namespace diffee

#endif  // DIFFEE_EVAL_H_
