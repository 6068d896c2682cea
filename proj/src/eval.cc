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

#include "diffee/eval.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>

#include "diffee/matrix_io.h"

namespace diffee {
namespace {

double Ratio(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double ParseNumber(std::string_view text, std::string_view context) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size() ||
      !std::isfinite(value)) {
    throw InvalidInputError("bad number '" + std::string(text) + "' in " +
                            std::string(context));
  }
  return value;
}

}  // namespace

double EdgeScore::false_positive_rate() const { return Ratio(fp, fp + tn); }

EdgeScore ScoreFromCounts(std::int64_t tp, std::int64_t fp, std::int64_t fn,
                          std::int64_t tn) {
  EdgeScore score{.tp = tp, .fp = fp, .fn = fn, .tn = tn};
  score.precision = Ratio(tp, tp + fp);
  score.recall = Ratio(tp, tp + fn);
  const double sum = score.precision + score.recall;
  score.f1 = sum > 0.0 ? 2.0 * score.precision * score.recall / sum : 0.0;
  return score;
}

EdgeScore F1Score(const SymMatrix& estimate, const SymMatrix& truth) {
  if (estimate.dim() != truth.dim()) {
    throw DimensionMismatchError("F1Score: estimate has dimension " +
                                 std::to_string(estimate.dim()) + ", truth " +
                                 std::to_string(truth.dim()));
  }
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
  const int p = truth.dim();
  for (int j = 1; j < p; ++j) {
    for (int i = 0; i < j; ++i) {
      const bool predicted = estimate(i, j) != 0.0;
      const bool actual = truth(i, j) != 0.0;
      if (predicted && actual) {
        ++tp;
      } else if (predicted) {
        ++fp;
      } else if (actual) {
        ++fn;
      } else {
        ++tn;
      }
    }
  }
  return ScoreFromCounts(tp, fp, fn, tn);
}

std::vector<double> LambdaGrid(int p, int n_c, int n_d) {
  if (p < 2 || n_c < 1 || n_d < 1) {
    throw InvalidInputError("LambdaGrid needs p >= 2 and n_c, n_d >= 1");
  }
  const double step = 0.01 * std::sqrt(std::log(static_cast<double>(p)) /
                                       static_cast<double>(std::min(n_c, n_d)));
  std::vector<double> grid(30);
  for (int i = 1; i <= 30; ++i) grid[i - 1] = step * i;
  return grid;
}

std::string MethodName(Method method) {
  return method == Method::kDiffee ? "diffee" : "naive";
}

Method ParseMethod(std::string_view name) {
  if (name == "diffee") return Method::kDiffee;
  if (name == "naive") return Method::kNaive;
  throw InvalidInputError("unknown method '" + std::string(name) +
                          "' (expected diffee or naive)");
}

VRule VRule::Parse(std::string_view text) {
  if (text == "grid-pd") return {Kind::kGridPositiveDefinite, 0.0};
  if (text == "grid-nonsingular") return {Kind::kGridNonsingular, 0.0};
  if (text == "theory") return {Kind::kTheory, 1.0};
  constexpr std::string_view kTheoryPrefix = "theory:";
  constexpr std::string_view kFixedPrefix = "fixed:";
  if (text.starts_with(kTheoryPrefix)) {
    const double a = ParseNumber(text.substr(kTheoryPrefix.size()), "v rule");
    if (!(a > 0.0)) throw InvalidInputError("theory multiplier must be positive");
    return {Kind::kTheory, a};
  }
  if (text.starts_with(kFixedPrefix)) text.remove_prefix(kFixedPrefix.size());
  const double v = ParseNumber(text, "v rule");
  if (!(v >= 0.0)) throw InvalidInputError("fixed v must be non-negative");
  return {Kind::kFixed, v};
}

std::string VRule::ToString() const {
  switch (kind) {
    case Kind::kGridPositiveDefinite:
      return "grid-pd";
    case Kind::kGridNonsingular:
      return "grid-nonsingular";
    case Kind::kTheory:
      return "theory:" + FormatDouble(value);
    case Kind::kFixed:
      break;
  }
  return "fixed:" + FormatDouble(value);
}

InvertibilityRule VRule::invertibility() const {
  return kind == Kind::kGridNonsingular ? InvertibilityRule::kNonsingular
                                        : InvertibilityRule::kPositiveDefinite;
}

std::string CellSpec::Describe() const {
  std::ostringstream out;
  out << "model=" << static_cast<int>(model) << " p=" << p
      << " s=" << FormatDouble(s) << " nc=" << n_c << " nd=" << n_d
      << " method=" << MethodName(method) << " v=" << v_rule.ToString();
  return out.str();
}

SimulatedData Simulate(GraphModel model, int p, double s, int n_c, int n_d,
                       std::uint64_t seed) {
  GroundTruth truth = GenerateTruth(model, p, s, DeriveSeed(seed, "truth"));
  SampleMatrix x_c =
      MvnSample(truth.omega_c, n_c, DeriveSeed(seed, "x_c"), Condition::kControl);
  SampleMatrix x_d =
      MvnSample(truth.omega_d, n_d, DeriveSeed(seed, "x_d"), Condition::kCase);
  return SimulatedData{std::move(truth), std::move(x_c), std::move(x_d)};
}

double ChooseV(const VRule& rule, const SymMatrix& sigma_c,
               const SymMatrix& sigma_d, int n_c, int n_d,
               ThresholdPolicy policy) {
  switch (rule.kind) {
    case VRule::Kind::kGridPositiveDefinite:
    case VRule::Kind::kGridNonsingular:
      return SelectV(sigma_c, sigma_d, DefaultVGrid(), policy, rule.invertibility());
    case VRule::Kind::kTheory:
      return TheoryV(sigma_c.dim(), n_c, n_d, rule.value);
    case VRule::Kind::kFixed:
      break;
  }
  return rule.value;
}

SeedResult RunSeed(const CellSpec& cell, std::uint64_t seed) {
  const SimulatedData data =
      Simulate(cell.model, cell.p, cell.s, cell.n_c, cell.n_d, seed);
  const SymMatrix& truth = data.truth.delta_star;
  const std::vector<double> grid = LambdaGrid(cell.p, cell.n_c, cell.n_d);
  const InvertibilityRule rule = cell.v_rule.invertibility();

  std::optional<SymMatrix> sigma_c;
  std::optional<SymMatrix> sigma_d;
  double setup_seconds = TimingProbe([&] {
    sigma_c = SampleCovariance(data.x_c);
    sigma_d = SampleCovariance(data.x_d);
  });

  SeedResult result;
  result.seed = seed;
  result.v = ChooseV(cell.v_rule, *sigma_c, *sigma_d, cell.n_c, cell.n_d, cell.policy);
  const double v = result.v;

  // Each method splits into a lambda-free setup (timed once) and a per-lambda
  // thresholding step.
  std::optional<ProxyMap> proxy;
  std::optional<GuardedInverse> inv_c;
  std::optional<GuardedInverse> inv_d;
  if (cell.method == Method::kDiffee) {
    setup_seconds += TimingProbe([&] {
      proxy = ProxyBackwardMap(*sigma_c, *sigma_d, v, cell.policy, rule);
    });
  } else {
    setup_seconds += TimingProbe([&] {
      inv_c = ThresholdedInverse(*sigma_c, v, cell.policy, rule, Condition::kControl);
      inv_d = ThresholdedInverse(*sigma_d, v, cell.policy, rule, Condition::kCase);
    });
  }

  result.per_lambda.reserve(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    const double lambda = grid[i];
    std::optional<SymMatrix> estimate;
    double seconds = TimingProbe([&] {
      if (cell.method == Method::kDiffee) {
        estimate = EstimateFromProxy(*proxy, lambda).delta;
      } else {
        estimate = Subtract(OffDiagonalSoftThreshold(inv_d->inverse, lambda),
                            OffDiagonalSoftThreshold(inv_c->inverse, lambda),
                            MatrixRole::kDifferential);
      }
    });
    if (i == 0) seconds += setup_seconds;
    if (!cell.timing) seconds = 0.0;

    LambdaResult row;
    row.lambda = lambda;
    row.score = F1Score(*estimate, truth);
    row.support_size = CountOffDiagonalSupport(*estimate);
    row.fit_seconds = seconds;
    result.fit_time_total += seconds;
    result.per_lambda.push_back(row);
  }
  for (size_t i = 1; i < result.per_lambda.size(); ++i) {
    if (result.per_lambda[i].score.f1 > result.best().score.f1) result.best_index = i;
  }
  return result;
}

EvalReport RunCell(const CellSpec& cell, std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw InvalidInputError("a cell needs at least one seed");
  EvalReport report;
  report.cell = cell;
  for (std::uint64_t seed : seeds) {
    try {
      report.seeds.push_back(RunSeed(cell, seed));
    } catch (const Error& e) {
      throw CellError(cell.Describe() + " seed=" + std::to_string(seed) + ": " +
                      e.what());
    }
  }
  double f1_sum = 0.0;
  double time_sum = 0.0;
  for (const SeedResult& r : report.seeds) {
    f1_sum += r.best().score.f1;
    time_sum += r.fit_time_total;
  }
  const auto count = static_cast<double>(report.seeds.size());
  report.best_f1_mean = f1_sum / count;
  report.mean_total_seconds = time_sum / count;
  return report;
}

void WriteRunsCsvRows(std::ostream& out, const EvalReport& report) {
  const CellSpec& c = report.cell;
  const std::string prefix = std::to_string(static_cast<int>(c.model)) + "," +
                             std::to_string(c.p) + "," + FormatDouble(c.s) + "," +
                             std::to_string(c.n_c) + "," + std::to_string(c.n_d) +
                             "," + MethodName(c.method) + ",";
  for (const SeedResult& r : report.seeds) {
    for (const LambdaResult& row : r.per_lambda) {
      out << prefix << r.seed << ',' << FormatDouble(row.lambda) << ','
          << FormatDouble(r.v) << ',' << FormatDouble(row.score.f1) << ','
          << FormatDouble(row.score.precision) << ','
          << FormatDouble(row.score.recall) << ',' << row.support_size << ','
          << FormatDouble(row.fit_seconds) << '\n';
    }
  }
}

void WriteAggregateCsvRow(std::ostream& out, const EvalReport& report) {
  const CellSpec& c = report.cell;
  out << static_cast<int>(c.model) << ',' << c.p << ',' << FormatDouble(c.s) << ','
      << c.n_c << ',' << c.n_d << ',' << MethodName(c.method) << ','
      << FormatDouble(report.best_f1_mean) << ','
      << FormatDouble(report.mean_total_seconds) << '\n';
}

}  // namespace diffee
