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

// The `diffee` command: simulate, fit and bench subcommands.

#ifndef DIFFEE_TOOLS_CLI_H_
#define DIFFEE_TOOLS_CLI_H_

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "diffee/eval.h"
#include "json.hpp"

namespace diffee::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // runtime or numeric failure
inline constexpr int kExitUsage = 2;    // bad flags, config or input files

// Runs the command line; never throws. Normal output goes to `out`,
// diagnostics to `err`.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// A sample size in a bench config: a positive integer, "p", "p/<k>" or
// "p*<k>" (integer arithmetic, rounded down).
int EvalSampleSize(const nlohmann::json& expr, int p);

struct BenchConfig {
  std::vector<GraphModel> models = {GraphModel::kModel2};
  std::vector<int> p_list;
  std::vector<double> s_list = {0.2};
  // Unevaluated (n_c, n_d) expressions.
  std::vector<std::pair<nlohmann::json, nlohmann::json>> n_pairs = {{"p/2", "p/2"}};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<Method> methods = {Method::kDiffee};
  VRule v_rule;
  ThresholdPolicy policy = ThresholdPolicy::kOffDiagonalOnly;
  bool timing = true;
  int jobs = 1;
  std::filesystem::path output_dir = ".";
};

// Throws InvalidInputError on unknown keys, wrong types or a cell outside
// the generators' domain.
BenchConfig ParseBenchConfig(const nlohmann::json& config);

// Cross product in the order model, p, s, n pair, method.
std::vector<CellSpec> ExpandCells(const BenchConfig& config);

}  // namespace diffee::cli

#endif  // DIFFEE_TOOLS_CLI_H_
