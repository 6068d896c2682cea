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

#include "cli.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <climits>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "diffee/datagen.h"
#include "diffee/errors.h"
#include "diffee/estimator.h"
#include "diffee/matrix_io.h"

namespace diffee::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr char kCsvHelp[] = R"(Output files (bench):
  runs.csv      model,p,s,nc,nd,method,seed,lambda,v,f1,precision,recall,support,fit_seconds
                one row per cell x seed x lambda; support counts nonzero
                off-diagonal entries of the estimate (both triangles)
  aggregate.csv model,p,s,nc,nd,method,best_f1_mean,total_seconds
                one row per successful cell; best_f1_mean is the best-lambda
                F1 averaged over seeds, total_seconds the lambda-summed fit
                time of one seed averaged over seeds
  failures.csv  model,p,s,nc,nd,method,error
                one row per failed cell

Config keys (JSON object):
  model       1, 2 or a list of them                  default 2
  p_list      list of dimensions (>= 10)              required
  s_list      list of sparsity levels in [0, 1]       default [0.2]
  n_pairs     list of [nc, nd]; each an integer, "p", "p/k" or "p*k";
              a single entry applies to both          default [["p/2", "p/2"]]
  seeds       list of non-negative integers           default 1..10
  methods     list of "diffee", "naive"               default ["diffee"]
  v_rule      grid-nonsingular | grid-pd | theory[:a] | fixed:<v>
                                                      default grid-nonsingular
  policy      off-diagonal | all-entries              default off-diagonal
  timing      false writes every time column as 0     default true
  jobs        concurrent cells                        default 1
  output_dir  directory for the CSV files             default "."

Exit codes: 0 success (bench: at least one cell succeeded), 1 runtime or
numeric failure, 2 usage, config or input-file error.)";

std::string PolicyName(ThresholdPolicy policy) {
  return policy == ThresholdPolicy::kOffDiagonalOnly ? "off-diagonal" : "all-entries";
}

ThresholdPolicy ParsePolicy(std::string_view name) {
  if (name == "off-diagonal") return ThresholdPolicy::kOffDiagonalOnly;
  if (name == "all-entries") return ThresholdPolicy::kAllEntries;
  throw InvalidInputError("unknown policy '" + std::string(name) +
                          "' (expected off-diagonal or all-entries)");
}

std::string RuleName(InvertibilityRule rule) {
  return rule == InvertibilityRule::kPositiveDefinite ? "pd" : "nonsingular";
}

std::string CsvQuote(std::string_view text) {
  std::string quoted = "\"";
  for (char ch : text) {
    if (ch == '"') quoted += '"';
    quoted += (ch == '\n' || ch == '\r') ? ' ' : ch;
  }
  return quoted + '"';
}

void WriteJsonFile(const fs::path& path, const json& value) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << value.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

void MakeDirectory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  int model = 2;
  int p = 0;
  double s = 0.2;
  int n_c = 0;
  int n_d = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int RunSimulate(const SimulateArgs& args, std::ostream& out) {
  const auto model = static_cast<GraphModel>(args.model);
  ValidateModelArgs(model, args.p, args.s);
  const SimulatedData data =
      Simulate(model, args.p, args.s, args.n_c, args.n_d, args.seed);

  const fs::path dir = args.out;
  MakeDirectory(dir);
  WriteMatrixFile(dir / "X_c.csv", data.x_c.data());
  WriteMatrixFile(dir / "X_d.csv", data.x_d.data());
  WriteMatrixFile(dir / "omega_c.csv", data.truth.omega_c.matrix());
  WriteMatrixFile(dir / "omega_d.csv", data.truth.omega_d.matrix());
  WriteMatrixFile(dir / "delta_star.csv", data.truth.delta_star.matrix());

  const GroundTruth& t = data.truth;
  json manifest = {
      {"model", args.model},
      {"p", args.p},
      {"s", args.s},
      {"n_c", args.n_c},
      {"n_d", args.n_d},
      {"seed", args.seed},
      {"k", t.k},
      {"support_pairs", t.support.size()},
      {"files",
       {{"X_c", "X_c.csv"},
        {"X_d", "X_d.csv"},
        {"omega_c", "omega_c.csv"},
        {"omega_d", "omega_d.csv"},
        {"delta_star", "delta_star.csv"}}},
      {"rng", "mt19937_64; child seeds 'truth', 'x_c', 'x_d' via splitmix64"},
  };
  if (model == GraphModel::kModel1) {
    manifest["graph_edges"] = t.graph_edges;
    manifest["hubs"] = t.hubs;
    manifest["hub_edge_pool"] = t.hub_edge_pool;
    manifest["differential_edges"] = t.differential_edges;
    manifest["hub_edge_selection"] = "top 20% by magnitude, pooled over both hubs";
    manifest["pd_boost"] = t.pd_boost;
  } else {
    manifest["delta_c"] = t.delta_c;
    manifest["delta_d"] = t.delta_d;
  }
  WriteJsonFile(dir / "manifest.json", manifest);
  out << "wrote 5 matrices and manifest.json to " << dir.string() << " (k = " << t.k
      << ")\n";
  return kExitOk;
}

// --------------------------------------------------------------------- fit

struct FitArgs {
  std::string xc;
  std::string xd;
  std::string v = "auto";
  std::optional<double> lambda;
  std::string lambda_grid;
  std::string out;
  std::string truth;
  std::string policy = "off-diagonal";
  std::string invertibility = "pd";
  bool no_timing = false;
};

std::string DeltaFileName(size_t index, size_t count) {
  if (count == 1) return "delta.csv";
  const int width = static_cast<int>(std::to_string(count).size());
  std::string number = std::to_string(index + 1);
  number.insert(0, static_cast<size_t>(width) - number.size(), '0');
  return "delta_" + number + ".csv";
}

int RunFit(const FitArgs& args, std::ostream& out) {
  const ThresholdPolicy policy = ParsePolicy(args.policy);
  const InvertibilityRule rule = args.invertibility == "nonsingular"
                                     ? InvertibilityRule::kNonsingular
                                     : InvertibilityRule::kPositiveDefinite;
  const SampleMatrix xc(ReadMatrixFile(args.xc), Condition::kControl);
  const SampleMatrix xd(ReadMatrixFile(args.xd), Condition::kCase);
  if (xc.num_variables() != xd.num_variables()) {
    throw DimensionMismatchError("X_c has " + std::to_string(xc.num_variables()) +
                                 " columns, X_d has " +
                                 std::to_string(xd.num_variables()));
  }
  const int p = xc.num_variables();
  const int n_c = xc.num_samples();
  const int n_d = xd.num_samples();

  std::optional<SymMatrix> truth;
  if (!args.truth.empty()) {
    truth = SymMatrix(ReadMatrixFile(args.truth), MatrixRole::kDifferential);
    if (truth->dim() != p) {
      throw DimensionMismatchError("truth is " + std::to_string(truth->dim()) +
                                   " x " + std::to_string(truth->dim()) +
                                   ", data has p = " + std::to_string(p));
    }
  }

  std::vector<double> lambdas;
  if (args.lambda) {
    lambdas = {*args.lambda};
  } else {
    lambdas = LambdaGrid(p, n_c, n_d);
  }

  double v = 0.0;
  std::string v_source;
  double select_seconds = 0.0;
  if (args.v == "auto") {
    select_seconds = TimingProbe([&] {
      v = SelectV(SampleCovariance(xc), SampleCovariance(xd), DefaultVGrid(), policy,
                  rule);
    });
    v_source = "auto";
  } else {
    const VRule v_rule = VRule::Parse(args.v);
    if (v_rule.kind == VRule::Kind::kTheory) {
      v = TheoryV(p, n_c, n_d, v_rule.value);
    } else if (v_rule.kind == VRule::Kind::kFixed) {
      v = v_rule.value;
    } else {
      throw InvalidInputError("--v takes auto, theory[:a] or a number, got " + args.v);
    }
    v_source = v_rule.ToString();
  }

  std::vector<DiffEstimate> estimates;
  const double fit_seconds = TimingProbe([&] {
    if (lambdas.size() == 1) {
      estimates.push_back(
          DiffeeFit(xc, xd, HyperParams::WithLambda(v, lambdas[0], policy, rule)));
    } else {
      estimates = DiffeePath(xc, xd, HyperParams::WithGrid(v, lambdas, policy, rule));
    }
  });

  const fs::path dir = args.out;
  MakeDirectory(dir);
  json rows = json::array();
  for (size_t i = 0; i < estimates.size(); ++i) {
    const DiffEstimate& e = estimates[i];
    const std::string file = DeltaFileName(i, estimates.size());
    WriteMatrixFile(dir / file, e.delta.matrix());
    json row = {{"lambda", e.lambda}, {"file", file}, {"support_size", e.support_size}};
    if (truth) {
      const EdgeScore score = F1Score(e.delta, *truth);
      row["f1"] = score.f1;
      row["precision"] = score.precision;
      row["recall"] = score.recall;
      row["tp"] = score.tp;
      row["fp"] = score.fp;
      row["fn"] = score.fn;
    }
    rows.push_back(std::move(row));
  }
  json report = {
      {"p", p},
      {"n_c", n_c},
      {"n_d", n_d},
      {"v", v},
      {"v_source", v_source},
      {"policy", PolicyName(policy)},
      {"invertibility", RuleName(rule)},
      {"lambda_grid", args.lambda ? "single" : "paper"},
      {"select_v_seconds", args.no_timing ? 0.0 : select_seconds},
      {"fit_seconds", args.no_timing ? 0.0 : fit_seconds},
      {"estimates", std::move(rows)},
  };
  WriteJsonFile(dir / "report.json", report);

  out << "v = " << FormatDouble(v) << " (" << v_source << "), " << estimates.size()
      << " estimate(s) written to " << dir.string() << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------- bench

struct BenchArgs {
  std::string config;
  std::string out;
  int jobs = 0;  // 0: take the config value
  bool no_timing = false;
};

int RunBench(const BenchArgs& args, std::ostream& out, std::ostream& err) {
  std::ifstream in(args.config, std::ios::binary);
  if (!in) throw IoError("cannot open config: " + args.config);
  json raw;
  try {
    raw = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInputError(args.config + ": " + e.what());
  }
  BenchConfig config = ParseBenchConfig(raw);
  if (!args.out.empty()) config.output_dir = args.out;
  if (args.jobs > 0) config.jobs = args.jobs;
  if (args.no_timing) config.timing = false;

  const std::vector<CellSpec> cells = ExpandCells(config);
  if (config.timing && config.jobs > 1) {
    err << "note: timing columns measured with " << config.jobs
        << " concurrent cells; use --jobs 1 for scalability numbers\n";
  }
  MakeDirectory(config.output_dir);

  std::vector<std::optional<EvalReport>> reports(cells.size());
  std::vector<std::string> errors(cells.size());
  std::atomic<size_t> next{0};
  std::mutex log_mutex;
  size_t finished = 0;
  auto worker = [&] {
    for (size_t i; (i = next++) < cells.size();) {
      try {
        reports[i] = RunCell(cells[i], config.seeds);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
      std::lock_guard<std::mutex> lock(log_mutex);
      err << "[" << ++finished << "/" << cells.size() << "] " << cells[i].Describe()
          << (reports[i] ? "" : " FAILED") << '\n';
    }
  };
  const size_t threads = std::min<size_t>(static_cast<size_t>(config.jobs), cells.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  const fs::path dir = config.output_dir;
  std::ofstream runs(dir / "runs.csv", std::ios::binary);
  std::ofstream aggregate(dir / "aggregate.csv", std::ios::binary);
  std::ofstream failures(dir / "failures.csv", std::ios::binary);
  if (!runs || !aggregate || !failures) {
    throw IoError("cannot write CSV files in " + dir.string());
  }
  runs << kRunsCsvHeader << '\n';
  aggregate << kAggregateCsvHeader << '\n';
  failures << "model,p,s,nc,nd,method,error\n";

  int succeeded = 0;
  for (size_t i = 0; i < cells.size(); ++i) {
    const CellSpec& c = cells[i];
    if (reports[i]) {
      ++succeeded;
      WriteRunsCsvRows(runs, *reports[i]);
      WriteAggregateCsvRow(aggregate, *reports[i]);
      char line[128];
      std::snprintf(line, sizeof(line), "  best_f1_mean=%.4f total_seconds=%.4g",
                    reports[i]->best_f1_mean, reports[i]->mean_total_seconds);
      out << c.Describe() << line << '\n';
    } else {
      failures << static_cast<int>(c.model) << ',' << c.p << ',' << FormatDouble(c.s)
               << ',' << c.n_c << ',' << c.n_d << ',' << MethodName(c.method) << ','
               << CsvQuote(errors[i]) << '\n';
      out << c.Describe() << "  FAILED: " << errors[i] << '\n';
    }
  }
  if (!runs || !aggregate || !failures) {
    throw IoError("write failed in " + dir.string());
  }
  out << succeeded << "/" << cells.size() << " cells succeeded; CSV files in "
      << dir.string() << '\n';
  return succeeded > 0 ? kExitOk : kExitFailure;
}

// ------------------------------------------------------------ config parse

template <typename T>
std::vector<T> AsList(const json& value, const std::string& key) {
  std::vector<T> list;
  try {
    if (value.is_array()) {
      for (const json& item : value) list.push_back(item.get<T>());
    } else {
      list.push_back(value.get<T>());
    }
  } catch (const json::exception&) {
    throw InvalidInputError("config key '" + key + "' has the wrong type");
  }
  if (list.empty()) throw InvalidInputError("config key '" + key + "' is empty");
  return list;
}

}  // namespace

int EvalSampleSize(const json& expr, int p) {
  long long n = 0;
  if (expr.is_number_integer()) {
    n = expr.get<long long>();
  } else if (expr.is_string()) {
    std::string_view text = expr.get_ref<const std::string&>();
    auto parse_int = [&](std::string_view digits) {
      long long value = 0;
      const auto [end, ec] =
          std::from_chars(digits.data(), digits.data() + digits.size(), value);
      if (digits.empty() || ec != std::errc() || end != digits.data() + digits.size()) {
        throw InvalidInputError("bad sample size '" + std::string(text) + "'");
      }
      return value;
    };
    if (text == "p") {
      n = p;
    } else if (text.starts_with("p/")) {
      const long long k = parse_int(text.substr(2));
      if (k <= 0) throw InvalidInputError("sample size divides by " + std::to_string(k));
      n = p / k;
    } else if (text.starts_with("p*")) {
      n = p * parse_int(text.substr(2));
    } else {
      n = parse_int(text);
    }
  } else {
    throw InvalidInputError("sample size must be an integer or a string like \"p/2\"");
  }
  if (n < 2 || n > INT_MAX) {
    throw InvalidInputError("sample size " + expr.dump() + " gives n = " +
                            std::to_string(n) + " at p = " + std::to_string(p) +
                            "; need n >= 2");
  }
  return static_cast<int>(n);
}

BenchConfig ParseBenchConfig(const json& raw) {
  if (!raw.is_object()) throw InvalidInputError("config must be a JSON object");
  static const std::set<std::string> kKeys = {
      "model",  "p_list", "s_list", "n_pairs", "seeds",  "methods",
      "v_rule", "policy", "timing", "jobs",    "output_dir"};
  for (const auto& [key, value] : raw.items()) {
    if (!kKeys.contains(key)) throw InvalidInputError("unknown config key '" + key + "'");
  }

  BenchConfig config;
  if (!raw.contains("p_list")) throw InvalidInputError("config needs 'p_list'");
  config.p_list = AsList<int>(raw["p_list"], "p_list");
  if (raw.contains("model")) {
    config.models.clear();
    for (int m : AsList<int>(raw["model"], "model")) {
      if (m != 1 && m != 2) throw InvalidInputError("model must be 1 or 2");
      config.models.push_back(static_cast<GraphModel>(m));
    }
  }
  if (raw.contains("s_list")) config.s_list = AsList<double>(raw["s_list"], "s_list");
  if (raw.contains("n_pairs")) {
    const json& pairs = raw["n_pairs"];
    if (!pairs.is_array() || pairs.empty()) {
      throw InvalidInputError("config key 'n_pairs' must be a nonempty list");
    }
    config.n_pairs.clear();
    for (const json& pair : pairs) {
      if (pair.is_array() && pair.size() == 2) {
        config.n_pairs.emplace_back(pair[0], pair[1]);
      } else if (pair.is_array() && pair.size() == 1) {
        config.n_pairs.emplace_back(pair[0], pair[0]);
      } else if (!pair.is_array()) {
        config.n_pairs.emplace_back(pair, pair);
      } else {
        throw InvalidInputError("each n_pairs entry is [nc, nd] or a single size");
      }
    }
  }
  if (raw.contains("seeds")) {
    // get<uint64_t> would silently wrap negative values.
    for (const json& seed : AsList<json>(raw["seeds"], "seeds")) {
      if (!seed.is_number_unsigned()) {
        throw InvalidInputError("seeds must be non-negative integers");
      }
    }
    config.seeds = AsList<std::uint64_t>(raw["seeds"], "seeds");
  }
  if (raw.contains("methods")) {
    config.methods.clear();
    for (const std::string& name : AsList<std::string>(raw["methods"], "methods")) {
      config.methods.push_back(ParseMethod(name));
    }
  }
  try {
    if (raw.contains("v_rule")) {
      config.v_rule = VRule::Parse(raw["v_rule"].get<std::string>());
    }
    if (raw.contains("policy")) config.policy = ParsePolicy(raw["policy"].get<std::string>());
    if (raw.contains("timing")) config.timing = raw["timing"].get<bool>();
    if (raw.contains("jobs")) config.jobs = raw["jobs"].get<int>();
    if (raw.contains("output_dir")) {
      config.output_dir = raw["output_dir"].get<std::string>();
    }
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("config: ") + e.what());
  }
  if (config.jobs < 1) throw InvalidInputError("jobs must be >= 1");

  // Every cell must be valid before anything runs.
  for (GraphModel model : config.models) {
    for (int p : config.p_list) {
      for (double s : config.s_list) {
        ValidateModelArgs(model, p, s);
        for (const auto& [nc, nd] : config.n_pairs) {
          EvalSampleSize(nc, p);
          EvalSampleSize(nd, p);
        }
      }
    }
  }
  return config;
}

std::vector<CellSpec> ExpandCells(const BenchConfig& config) {
  std::vector<CellSpec> cells;
  for (GraphModel model : config.models) {
    for (int p : config.p_list) {
      for (double s : config.s_list) {
        for (const auto& [nc, nd] : config.n_pairs) {
          for (Method method : config.methods) {
            CellSpec cell;
            cell.model = model;
            cell.p = p;
            cell.s = s;
            cell.n_c = EvalSampleSize(nc, p);
            cell.n_d = EvalSampleSize(nd, p);
            cell.method = method;
            cell.v_rule = config.v_rule;
            cell.policy = config.policy;
            cell.timing = config.timing;
            cells.push_back(cell);
          }
        }
      }
    }
  }
  return cells;
}

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differential Gaussian graphical model estimation and benchmarks."};
  app.name("diffee");
  app.require_subcommand(1);
  app.footer(kCsvHelp);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Draw a ground-truth pair and samples; write matrices + manifest.json");
  simulate->add_option("--model", sim.model, "Graph model")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  simulate->add_option("--p", sim.p, "Number of variables")->required();
  simulate->add_option("--s", sim.s, "Sparsity level")->capture_default_str();
  simulate->add_option("--nc", sim.n_c, "Control samples")
      ->required()
      ->check(CLI::Range(2, INT_MAX));
  simulate->add_option("--nd", sim.n_d, "Case samples")
      ->required()
      ->check(CLI::Range(2, INT_MAX));
  simulate->add_option("--seed", sim.seed, "Root seed")->required();
  simulate->add_option("--out", sim.out, "Output directory")->required();

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand(
      "fit", "Estimate Delta from two sample matrices; write delta CSV(s) + report.json");
  fit_cmd->add_option("--xc", fit.xc, "Control samples (n_c x p CSV)")->required();
  fit_cmd->add_option("--xd", fit.xd, "Case samples (n_d x p CSV)")->required();
  fit_cmd->add_option("--v", fit.v, "auto | theory[:a] | <value>")->capture_default_str();
  CLI::Option* lambda_opt =
      fit_cmd->add_option("--lambda", fit.lambda, "Single lambda")
          ->check(CLI::NonNegativeNumber);
  CLI::Option* grid_opt =
      fit_cmd->add_option("--lambda-grid", fit.lambda_grid, "Named lambda grid")
          ->check(CLI::IsMember({"paper"}));
  lambda_opt->excludes(grid_opt);
  fit_cmd->add_option("--out", fit.out, "Output directory")->required();
  fit_cmd->add_option("--truth", fit.truth, "True delta (p x p CSV); adds F1 to the report");
  fit_cmd->add_option("--policy", fit.policy, "Covariance threshold policy")
      ->check(CLI::IsMember({"off-diagonal", "all-entries"}))
      ->capture_default_str();
  fit_cmd->add_option("--invertibility", fit.invertibility, "Inversion guard")
      ->check(CLI::IsMember({"pd", "nonsingular"}))
      ->capture_default_str();
  fit_cmd->add_flag("--no-timing", fit.no_timing, "Write timing fields as 0");

  BenchArgs bench;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "Run a benchmark sweep from a JSON config");
  bench_cmd->add_option("config", bench.config, "Config file")->required();
  bench_cmd->add_option("--out", bench.out, "Output directory (overrides output_dir)");
  bench_cmd->add_option("--jobs", bench.jobs, "Concurrent cells (overrides jobs)")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--no-timing", bench.no_timing, "Write timing columns as 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return RunSimulate(sim, out);
    if (*fit_cmd) {
      if (!*lambda_opt && !*grid_opt) {
        throw InvalidInputError("fit needs --lambda <value> or --lambda-grid paper");
      }
      return RunFit(fit, out);
    }
    return RunBench(bench, out, err);
  } catch (const InvalidInputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace diffee::cli
