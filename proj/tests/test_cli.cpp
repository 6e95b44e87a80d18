#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "trajattack/dataset_io.hpp"

namespace fs = std::filesystem;
using trajattack::cli::run;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "trajattack_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> csv_column(const fs::path& p, const std::string& name) {
  std::istringstream in(slurp(p));
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  std::stringstream hs(line);
  for (std::string c; std::getline(hs, c, ',');) header.push_back(c);
  const auto col = std::find(header.begin(), header.end(), name) - header.begin();
  std::vector<double> values;
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::string c;
    for (long i = 0; i <= col; ++i) std::getline(ls, c, ',');
    values.push_back(std::stod(c));
  }
  return values;
}

fs::path make_dataset(const fs::path& dir, const std::string& past, const std::string& future,
                      const std::string& count = "12") {
  const auto r = cli({"--seed", "7", "gen", "--count", count, "--past", past, "--future", future, "--out",
                      dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  return dir / "dataset.jsonl";
}

}  // namespace

TEST(Cli, GenIsDeterministicAndKeepsHorizonShapes) {
  const auto dir = scratch("gen");
  const auto a = make_dataset(dir / "a", "4", "12", "100");
  const auto b = make_dataset(dir / "b", "4", "12", "100");
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(trajattack::cli::sha256_file(a), trajattack::cli::sha256_file(b));
  const auto data = trajattack::read_dataset(a);
  ASSERT_EQ(data.size(), 100u);
  EXPECT_EQ(data[0].past.size(), 5u);
  EXPECT_EQ(data[0].future_truth.size(), 12u);
  const auto apollo = trajattack::read_dataset(make_dataset(dir / "c", "6", "6"));
  EXPECT_EQ(apollo[0].past.size(), 7u);
  EXPECT_EQ(apollo[0].future_truth.size(), 6u);
}

TEST(Cli, ManifestRecordsInputsAndConfig) {
  const auto dir = scratch("manifest");
  const auto data = make_dataset(dir / "g", "3", "4");
  ASSERT_EQ(cli({"stats", "--data", data.string(), "--out", (dir / "s").string()}).code, 0);
  const auto doc = nlohmann::json::parse(slurp(dir / "s" / "manifest.json"));
  EXPECT_EQ(doc["command"], "stats");
  ASSERT_EQ(doc["inputs"].size(), 1u);
  EXPECT_EQ(doc["inputs"][0]["sha256"], trajattack::cli::sha256_file(data));
  EXPECT_EQ(doc["config"]["multiplier"], 3.0);
  EXPECT_EQ(doc["outputs"][0]["file"], "bounds.json");
  EXPECT_TRUE(doc.contains("started_at"));
}

TEST(Cli, TrivialTargetsReachTau) {
  const auto dir = scratch("trivial");
  const auto data = make_dataset(dir / "g", "4", "12");
  // The default 0.05 m step overshoots a target that the random start
  // already nearly meets; 0.01 m does not.
  const auto r = cli({"attack", "--data", data.string(), "--predictor", "constant_velocity", "--target",
                      "prediction", "--tau", "0.02", "--kmax", "100", "--step", "0.01", "--out",
                      (dir / "a").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(slurp(dir / "a" / "results.json"));
  ASSERT_EQ(doc["results"].size(), 12u);
  for (const auto& res : doc["results"]) EXPECT_LE(res["final_loss"].get<double>(), 0.02);
  EXPECT_EQ(trajattack::read_dataset(dir / "a" / "adversarial.jsonl").size(), 12u);
}

TEST(Cli, MoreIterationsNeverWorsenAnyRow) {
  const auto dir = scratch("kmax");
  const auto data = make_dataset(dir / "g", "4", "12");
  for (const std::string k : {"10", "100"}) {
    const auto r = cli({"--seed", "5", "eval", "--data", data.string(), "--predictor", "constant_velocity",
                        "--kmax", k, "--out", (dir / k).string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  const auto j10 = csv_column(dir / "10" / "metrics.csv", "J_bar");
  const auto j100 = csv_column(dir / "100" / "metrics.csv", "J_bar");
  ASSERT_EQ(j10.size(), j100.size());
  for (std::size_t i = 0; i < j10.size(); ++i) EXPECT_LE(j100[i], j10[i]) << i;
}

TEST(Cli, ErrorsAreDistinctAndExitNonzero) {
  const auto dir = scratch("errors");
  const auto data = make_dataset(dir / "g", "4", "12");
  const auto other = make_dataset(dir / "h", "3", "12");
  std::ofstream(dir / "bad.json") << R"({"kind": "mlp"})";

  const auto missing = cli({"eval", "--data", (dir / "nope.jsonl").string(), "--predictor",
                            "constant_velocity", "--out", (dir / "o").string()});
  const auto schema = cli({"eval", "--data", data.string(), "--predictor", (dir / "bad.json").string(),
                           "--out", (dir / "o").string()});
  ASSERT_EQ(cli({"train", "--data", other.string(), "--epochs", "1", "--hidden", "4", "--out",
                 (dir / "t").string()})
                .code,
            0);
  const auto horizon = cli({"eval", "--data", data.string(), "--predictor",
                            (dir / "t" / "predictor.json").string(), "--out", (dir / "o").string()});
  for (const auto* r : {&missing, &schema, &horizon}) EXPECT_EQ(r->code, 1) << r->err;
  EXPECT_NE(missing.err.find("missing_file"), std::string::npos);
  EXPECT_NE(schema.err.find("schema_mismatch"), std::string::npos);
  EXPECT_NE(horizon.err.find("horizon_mismatch"), std::string::npos);

  const auto json = cli({"--json-errors", "eval", "--data", (dir / "nope.jsonl").string(), "--predictor",
                         "constant_velocity", "--out", (dir / "o").string()});
  const auto doc = nlohmann::json::parse(json.err);
  EXPECT_EQ(doc["error"], "missing_file");
  EXPECT_EQ(doc["exit_code"], 1);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(cli({"gen", "--out", "x", "--bogus"}).code, 2);
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"eval", "--data", "x", "--predictor", "constant_velocity", "--optimizer", "sgd", "--out", "y"})
                .code,
            2);
  EXPECT_EQ(cli({"--help"}).code, 0);

  const auto dir = scratch("usage");
  const std::string cmd = std::string(TRAJATTACK_CLI_PATH) + " gen --bogus > " + (dir / "out").string() +
                          " 2> " + (dir / "err").string();
  const int status = std::system(cmd.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 2);
  EXPECT_NE(slurp(dir / "err").find("--help"), std::string::npos);
}

TEST(Cli, ReplayReproducesAndDetectsChangedInputs) {
  const auto dir = scratch("replay");
  const auto data = make_dataset(dir / "g", "3", "4");
  const std::string before = slurp(data);
  ASSERT_EQ(cli({"--seed", "9", "--threads", "2", "noise-eval", "--data", data.string(), "--predictor",
                 "constant_velocity", "--kmax", "20", "--out", (dir / "n").string()})
                .code,
            0);
  EXPECT_EQ(slurp(data), before);
  const auto again = cli({"replay", "--manifest", (dir / "n" / "manifest.json").string(), "--out",
                          (dir / "n2").string()});
  EXPECT_EQ(again.code, 0) << again.err;
  EXPECT_TRUE(trajattack::cli::differing_outputs(dir / "n", dir / "n2").empty());

  std::ofstream(data, std::ios::app) << "\n";
  const auto changed = cli({"replay", "--manifest", (dir / "n" / "manifest.json").string(), "--out",
                            (dir / "n3").string()});
  EXPECT_EQ(changed.code, 1);
  EXPECT_NE(changed.err.find("changed since the recorded run"), std::string::npos);
}

TEST(Cli, ComparisonIgnoresOnlyWallTime) {
  const auto dir = scratch("compare");
  fs::create_directories(dir / "a");
  fs::create_directories(dir / "b");
  std::ofstream(dir / "a" / "m.csv") << "id,wall_time_s,J\ns,0.5,1\n";
  std::ofstream(dir / "b" / "m.csv") << "id,wall_time_s,J\ns,0.7,1\n";
  std::ofstream(dir / "a" / "m.json") << R"({"rows": [{"wall_time_s": 1, "J": 2}]})";
  std::ofstream(dir / "b" / "m.json") << R"({"rows": [{"wall_time_s": 3, "J": 2}]})";
  EXPECT_TRUE(trajattack::cli::differing_outputs(dir / "a", dir / "b").empty());
  std::ofstream(dir / "b" / "m.csv") << "id,wall_time_s,J\ns,0.7,2\n";
  EXPECT_EQ(trajattack::cli::differing_outputs(dir / "a", dir / "b"), std::vector<std::string>{"m.csv"});
}
