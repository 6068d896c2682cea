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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "diffee/matrix_io.h"
#include "doctest.h"

namespace diffee::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "diffee");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = Run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path Scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "diffee_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json ReadJson(const fs::path& path) {
  std::ifstream in(path);
  return json::parse(in);
}

Result SimulateInto(const fs::path& dir, const std::string& model, int p, int n,
                    const std::string& seed) {
  return Invoke({"simulate", "--model", model, "--p", std::to_string(p), "--nc",
                 std::to_string(n), "--nd", std::to_string(n), "--seed", seed, "--out",
                 dir.string()});
}

TEST_CASE("simulate writes matrices and a manifest") {
  const fs::path a = Scratch("sim_a");
  const fs::path b = Scratch("sim_b");
  const Result r = SimulateInto(a, "1", 50, 30, "8");
  REQUIRE(r.code == kExitOk);
  REQUIRE(SimulateInto(b, "1", 50, 30, "8").code == kExitOk);
  for (const char* file :
       {"X_c.csv", "X_d.csv", "omega_c.csv", "omega_d.csv", "delta_star.csv", "manifest.json"}) {
    REQUIRE(fs::exists(a / file));
    CHECK(Slurp(a / file) == Slurp(b / file));
  }
  CHECK(ReadMatrixFile(a / "X_c.csv").rows() == 30);
  CHECK(ReadMatrixFile(a / "X_c.csv").cols() == 50);
  const Eigen::MatrixXd oc = ReadMatrixFile(a / "omega_c.csv");
  const Eigen::MatrixXd od = ReadMatrixFile(a / "omega_d.csv");
  const Eigen::MatrixXd ds = ReadMatrixFile(a / "delta_star.csv");
  CHECK(oc + ds == od);

  const json manifest = ReadJson(a / "manifest.json");
  CHECK(manifest["model"] == 1);
  CHECK(manifest["p"] == 50);
  CHECK(manifest["seed"] == 8);
  CHECK(manifest["graph_edges"] == 245);
  CHECK(manifest["hubs"].size() == 2);
  CHECK(manifest.contains("pd_boost"));

  const fs::path c = Scratch("sim_c");
  REQUIRE(SimulateInto(c, "2", 20, 10, "8").code == kExitOk);
  const json m2 = ReadJson(c / "manifest.json");
  CHECK(m2["model"] == 2);
  CHECK(m2.contains("delta_c"));
  CHECK_FALSE(m2.contains("hubs"));
}

TEST_CASE("simulate rejects bad arguments") {
  const fs::path dir = Scratch("sim_bad");
  const Result small = SimulateInto(dir, "2", 5, 10, "1");
  CHECK(small.code == kExitUsage);
  CHECK(small.err.find("p >= 10") != std::string::npos);
  CHECK(SimulateInto(dir, "3", 20, 10, "1").code == kExitUsage);
  CHECK(SimulateInto(dir, "2", 20, 1, "1").code == kExitUsage);
  CHECK(Invoke({"simulate", "--p", "20"}).code == kExitUsage);
  CHECK(Invoke({}).code == kExitUsage);
  CHECK(Invoke({"frobnicate"}).code == kExitUsage);
}

TEST_CASE("fit over the default grid with truth") {
  const fs::path data = Scratch("fit_data");
  REQUIRE(SimulateInto(data, "2", 40, 60, "3").code == kExitOk);
  const fs::path out = data / "fit";
  const Result r = Invoke({"fit", "--xc", (data / "X_c.csv").string(), "--xd",
                           (data / "X_d.csv").string(), "--lambda-grid", "paper", "--truth",
                           (data / "delta_star.csv").string(), "--out", out.string(),
                           "--no-timing"});
  INFO(r.err);
  REQUIRE(r.code == kExitOk);
  const json report = ReadJson(out / "report.json");
  CHECK(report["p"] == 40);
  CHECK(report["v_source"] == "auto");
  CHECK(report["fit_seconds"] == 0.0);
  REQUIRE(report["estimates"].size() == 30);
  int previous = 40 * 40;
  for (const json& e : report["estimates"]) {
    CHECK(e.contains("f1"));
    CHECK(e["f1"].get<double>() >= 0.0);
    CHECK(e["f1"].get<double>() <= 1.0);
    CHECK(e["support_size"].get<int>() <= previous);
    previous = e["support_size"].get<int>();
    const Eigen::MatrixXd delta = ReadMatrixFile(out / e["file"].get<std::string>());
    CHECK(delta.rows() == 40);
  }
  CHECK(report["estimates"][0]["file"] == "delta_01.csv");
  CHECK(report["estimates"][29]["file"] == "delta_30.csv");
}

TEST_CASE("fit with one huge lambda gives the zero matrix") {
  const fs::path data = Scratch("fit_zero");
  REQUIRE(SimulateInto(data, "2", 20, 40, "5").code == kExitOk);
  const fs::path out = data / "fit";
  const Result r = Invoke({"fit", "--xc", (data / "X_c.csv").string(), "--xd",
                           (data / "X_d.csv").string(), "--v", "theory", "--lambda", "1e9",
                           "--out", out.string()});
  REQUIRE(r.code == kExitOk);
  const json report = ReadJson(out / "report.json");
  REQUIRE(report["estimates"].size() == 1);
  CHECK(report["estimates"][0]["support_size"] == 0);
  CHECK(ReadMatrixFile(out / "delta.csv").isZero(0.0));
}

TEST_CASE("fit failures and exit codes") {
  const fs::path data = Scratch("fit_fail");
  REQUIRE(SimulateInto(data, "2", 30, 10, "2").code == kExitOk);
  const std::string xc = (data / "X_c.csv").string();
  const std::string xd = (data / "X_d.csv").string();
  const std::string out = (data / "fit").string();

  // p > n with no covariance thresholding cannot be inverted.
  const Result singular =
      Invoke({"fit", "--xc", xc, "--xd", xd, "--v", "0", "--lambda", "0.1", "--out", out});
  CHECK(singular.code == kExitFailure);
  CHECK(singular.err.find("condition 'c'") != std::string::npos);

  CHECK(Invoke({"fit", "--xc", xc, "--xd", xd, "--out", out}).code == kExitUsage);
  CHECK(Invoke({"fit", "--xc", xc, "--xd", xd, "--lambda", "0.1", "--lambda-grid", "paper",
                "--out", out})
            .code == kExitUsage);
  CHECK(Invoke({"fit", "--xc", xc, "--xd", xd, "--lambda-grid", "other", "--out", out}).code ==
        kExitUsage);
  CHECK(Invoke({"fit", "--xc", xc, "--xd", xd, "--v", "grid-pd", "--lambda", "0.1", "--out",
                out})
            .code == kExitUsage);

  const fs::path ragged = data / "ragged.csv";
  std::ofstream(ragged) << "1,2,3\n4,5\n";
  const Result bad = Invoke({"fit", "--xc", ragged.string(), "--xd", xd, "--lambda", "0.1",
                             "--out", out});
  CHECK(bad.code == kExitUsage);
  CHECK(bad.err.find("line 2") != std::string::npos);
  CHECK(Invoke({"fit", "--xc", (data / "missing.csv").string(), "--xd", xd, "--lambda", "0.1",
                "--out", out})
            .code == kExitUsage);
}

TEST_CASE("sample size expressions") {
  CHECK(EvalSampleSize(json(40), 100) == 40);
  CHECK(EvalSampleSize(json("p"), 100) == 100);
  CHECK(EvalSampleSize(json("p/2"), 100) == 50);
  CHECK(EvalSampleSize(json("p/3"), 100) == 33);
  CHECK(EvalSampleSize(json("p*4"), 100) == 400);
  CHECK(EvalSampleSize(json("25"), 100) == 25);
  for (const json& bad : {json("q"), json("p/0"), json("p/"), json(1), json(2.5), json("p/60")}) {
    CHECK_THROWS_AS(EvalSampleSize(bad, 100), InvalidInputError);
  }
}

TEST_CASE("bench config parsing and expansion") {
  const BenchConfig defaults = ParseBenchConfig(json{{"p_list", {50}}});
  CHECK(defaults.seeds.size() == 10);
  CHECK(defaults.jobs == 1);
  const std::vector<CellSpec> one = ExpandCells(defaults);
  REQUIRE(one.size() == 1);
  CHECK(one[0].model == GraphModel::kModel2);
  CHECK(one[0].n_c == 25);
  CHECK(one[0].n_d == 25);

  const BenchConfig full = ParseBenchConfig(json::parse(R"({
    "model": [1, 2], "p_list": [20, 40], "s_list": [0.1, 0.3],
    "n_pairs": [["p", "p/2"], [30]], "methods": ["diffee", "naive"],
    "v_rule": "theory:2", "seeds": [4, 5]})"));
  const std::vector<CellSpec> cells = ExpandCells(full);
  CHECK(cells.size() == 2 * 2 * 2 * 2 * 2);
  CHECK(cells[0].model == GraphModel::kModel1);
  CHECK(cells[0].n_c == 20);
  CHECK(cells[0].n_d == 10);
  CHECK(cells[1].method == Method::kNaive);
  CHECK(cells[2].n_c == 30);
  CHECK(cells[2].n_d == 30);
  CHECK(cells[0].v_rule.ToString() == "theory:2");

  CHECK_THROWS_AS(ParseBenchConfig(json{{"p_list", {50}}, {"lambda", 1}}), InvalidInputError);
  CHECK_THROWS_AS(ParseBenchConfig(json::object()), InvalidInputError);
  CHECK_THROWS_AS(ParseBenchConfig(json{{"p_list", {50}}, {"methods", {"glasso"}}}),
                  InvalidInputError);
  CHECK_THROWS_AS(ParseBenchConfig(json{{"p_list", "many"}}), InvalidInputError);
  CHECK_THROWS_AS(ParseBenchConfig(json::array()), InvalidInputError);
}

TEST_CASE("bench writes reproducible CSV files") {
  const fs::path dir = Scratch("bench");
  const fs::path config = dir / "config.json";
  std::ofstream(config) << R"({"p_list": [20, 30], "seeds": [1, 2], "timing": false})";

  const fs::path first = dir / "first";
  const Result r = Invoke({"bench", config.string(), "--out", first.string()});
  INFO(r.err);
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("2/2 cells succeeded") != std::string::npos);
  const std::string aggregate = Slurp(first / "aggregate.csv");
  std::istringstream lines(aggregate);
  std::string line;
  std::getline(lines, line);
  CHECK(line == kAggregateCsvHeader);
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 2);
  CHECK(Slurp(first / "runs.csv").starts_with(std::string(kRunsCsvHeader) + "\n2,20,0.2,10,10,"));
  CHECK(Slurp(first / "failures.csv") == "model,p,s,nc,nd,method,error\n");

  const fs::path second = dir / "second";
  REQUIRE(Invoke({"bench", config.string(), "--out", second.string(), "--jobs", "2"}).code ==
          kExitOk);
  CHECK(Slurp(second / "aggregate.csv") == aggregate);
  CHECK(Slurp(second / "runs.csv") == Slurp(first / "runs.csv"));
}

TEST_CASE("bench records failing cells") {
  const fs::path dir = Scratch("bench_fail");
  const fs::path config = dir / "config.json";
  std::ofstream(config) << R"({"p_list": [20], "n_pairs": [[5, 5]], "seeds": [1],
                               "v_rule": "fixed:0", "timing": false})";
  const Result r = Invoke({"bench", config.string(), "--out", dir.string()});
  CHECK(r.code == kExitFailure);
  CHECK(r.out.find("0/1 cells succeeded") != std::string::npos);
  const std::string failures = Slurp(dir / "failures.csv");
  CHECK(failures.find("2,20,0.2,5,5,diffee,") != std::string::npos);
  CHECK(failures.find("condition 'c'") != std::string::npos);
}

TEST_CASE("bench config errors exit with the usage code") {
  const fs::path dir = Scratch("bench_bad");
  const fs::path unknown = dir / "unknown.json";
  std::ofstream(unknown) << R"({"p_list": [20], "lamda": 3})";
  const Result r = Invoke({"bench", unknown.string(), "--out", dir.string()});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("lamda") != std::string::npos);

  const fs::path broken = dir / "broken.json";
  std::ofstream(broken) << "{\"p_list\": [20";
  CHECK(Invoke({"bench", broken.string()}).code == kExitUsage);
  CHECK(Invoke({"bench", (dir / "absent.json").string()}).code == kExitUsage);

  const fs::path small = dir / "small.json";
  std::ofstream(small) << R"({"p_list": [5]})";
  CHECK(Invoke({"bench", small.string(), "--out", dir.string()}).code == kExitUsage);
}

TEST_CASE("help documents outputs") {
  const Result r = Invoke({"--help"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find(std::string(kRunsCsvHeader)) != std::string::npos);
  CHECK(r.out.find(std::string(kAggregateCsvHeader)) != std::string::npos);
  CHECK(r.out.find("Exit codes") != std::string::npos);
}

TEST_CASE("installed binary reports exit codes") {
  const char* bin = std::getenv("DIFFEE_BIN");
  if (bin == nullptr) {
    MESSAGE("DIFFEE_BIN not set; skipping");
    return;
  }
  const std::string quiet = " >/dev/null 2>&1";
  const int ok = std::system((std::string(bin) + " --help" + quiet).c_str());
  CHECK(WEXITSTATUS(ok) == kExitOk);
  const int usage = std::system((std::string(bin) + " simulate --p 5" + quiet).c_str());
  CHECK(WEXITSTATUS(usage) == kExitUsage);
}

}  // namespace
}  // namespace diffee::cli
