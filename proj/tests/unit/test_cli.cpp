#include "commands.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("curvedborn_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "curvedborn");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = curvedborn::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
  }

  std::string write_config(const std::string& name, const json& doc) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << doc.dump();
    return p.string();
  }

  static std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    for (std::string line; std::getline(in, line);) {
      std::vector<std::string> cells;
      std::stringstream ss(line);
      for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
      rows.push_back(cells);
    }
    return rows;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, Example1CrossingTable) {
  const Outcome o = run({"--out-dir", dir_.string(), "example1", "--omega", "1", "--r-max", "2", "--grid", "20"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto rows = read_csv(dir_ / "example1_crossing.csv");
  ASSERT_EQ(rows.front(), (std::vector<std::string>{"r0", "tau_analytic", "tau_numeric", "abs_diff"}));
  ASSERT_EQ(rows.size(), 21u);
  bool saw_one = false, saw_tenth = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double r0 = std::stod(rows[i][0]), analytic = std::stod(rows[i][1]), numeric = std::stod(rows[i][2]);
    EXPECT_NEAR(analytic, oracle::crossing_time(1.0, r0), 1e-12);
    EXPECT_NEAR(numeric, analytic, 1e-6);
    if (std::abs(r0 - 1.0) < 1e-12) {
      saw_one = true;
      EXPECT_NEAR(numeric, 1.4142136, 1e-6);
    }
    if (std::abs(r0 - 0.1) < 1e-12) {
      saw_tenth = true;
      EXPECT_NEAR(numeric, std::sqrt(1.01) / 0.1, 1e-6);
    }
  }
  EXPECT_TRUE(saw_one && saw_tenth);
  EXPECT_TRUE(fs::exists(dir_ / "example1_crossing.csv.json"));

  const auto frames = read_csv(dir_ / "example1_frames.csv");
  EXPECT_EQ(frames.front(), (std::vector<std::string>{"tau", "r0", "theta", "t", "x", "y", "causal_class"}));
  EXPECT_EQ(frames.size(), 1u + 25u * 400u);
  EXPECT_EQ(frames[1].back(), "spacelike");
}

TEST_F(Cli, Example1EmptyTableBelowAllCrossings) {
  const Outcome o = run({"--out-dir", dir_.string(), "example1", "--tau-max", "0.5", "--frames", "2"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(read_csv(dir_ / "example1_crossing.csv").size(), 1u);
}

TEST_F(Cli, Example1RejectsNonPositiveOmega) {
  const Outcome o = run({"--out-dir", dir_.string(), "example1", "--omega", "0"});
  EXPECT_EQ(o.code, 2);
  EXPECT_EQ(json::parse(o.err)["error"], "ConfigError");
}

TEST_F(Cli, VerifyDefaultPasses) {
  const Outcome o = run({"--out-dir", dir_.string(), "verify"});
  ASSERT_EQ(o.code, 0) << o.out << o.err;
  const json summary = json::parse(o.out);
  EXPECT_TRUE(summary["pass"].get<bool>());
  for (const char* suite : {"normalization", "spacelike_identity", "conservation_sweep", "reynolds", "divergence_theorem"}) {
    EXPECT_TRUE(summary["suites"][suite]["pass"].get<bool>()) << suite;
  }
  EXPECT_EQ(json::parse(slurp(dir_ / "verify.json")), summary);
  EXPECT_EQ(read_csv(dir_ / "verify_conservation.csv").front(),
            (std::vector<std::string>{"tau", "total", "error_estimate", "residual"}));
}

TEST_F(Cli, VerifyCoarseQuadratureFails) {
  const Outcome o = run({"--out-dir", dir_.string(), "--resolution", "4", "verify"});
  EXPECT_EQ(o.code, 1);
  const json summary = json::parse(o.out);
  EXPECT_FALSE(summary["pass"].get<bool>());
  EXPECT_FALSE(summary["suites"]["normalization"]["pass"].get<bool>());
  EXPECT_GT(summary["suites"]["normalization"]["residual"].get<double>(), 1e-6);
}

TEST_F(Cli, VerifySuperluminalCurrentIsConfigError) {
  const std::string cfg = write_config("fast.json", {{"current", {{"name", "boosted_gaussian"}, {"velocity", {1.0, 0.0}}}}});
  const Outcome o = run({"--config", cfg, "--out-dir", dir_.string(), "verify"});
  EXPECT_EQ(o.code, 2);
  EXPECT_EQ(json::parse(o.err)["error"], "SuperluminalVelocity");
}

TEST_F(Cli, BornFullHalfAndEmpty) {
  const json base{{"current", {{"name", "static_gaussian"}, {"width", 1.0}}}};
  json half = base;
  half["region"] = json::parse("[[[0, 8], [-8, 8]]]");
  json empty = base;
  empty["region"] = json::array();
  const std::vector<std::pair<json, double>> cases{{base, 1.0}, {half, 0.5}, {empty, 0.0}};
  for (const auto& [cfg, expected] : cases) {
    const Outcome o = run({"--config", write_config("born.json", cfg), "--out-dir", dir_.string(), "born"});
    ASSERT_EQ(o.code, 0) << o.err;
    const json record = json::parse(o.out);
    EXPECT_NEAR(record["value"].get<double>(), expected, 1e-6);
    for (const char* key : {"surface", "region", "value", "error_estimate", "flags"}) EXPECT_TRUE(record.contains(key));
  }
}

TEST_F(Cli, BornFlagsTimelikeSurface) {
  const json cfg{{"current", {{"name", "uniform"}, {"density", 1.0}}},
                 {"surface", {{"name", "tilted_plane"}, {"slope", 2.0}, {"box", {{0, 1}, {0, 1}}}}},
                 {"resolution", 4}};
  const Outcome o = run({"--config", write_config("tilt.json", cfg), "--out-dir", dir_.string(), "born"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json record = json::parse(o.out);
  EXPECT_NEAR(record["value"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(record["flags"], json::array({"non_spacelike"}));
}

TEST_F(Cli, ExpressionSurfaceAndCurrent) {
  const json cfg{{"current", {{"name", "expression"}, {"components", {"1", "0.5", "0"}}, {"divergence_free", true}}},
                 {"surface",
                  {{"name", "expression"},
                   {"params", {"a", "b"}},
                   {"embed", {"0.2*a", "a", "b"}},
                   {"box", {{0, 1}, {0, 2}}}}},
                 {"resolution", 4}};
  const Outcome o = run({"--config", write_config("expr.json", cfg), "--out-dir", dir_.string(), "born"});
  ASSERT_EQ(o.code, 0) << o.err;
  // det[(1, 0.5, 0) | (0.2, 1, 0) | (0, 0, 1)] = 0.9 over an area of 2.
  EXPECT_NEAR(json::parse(o.out)["value"].get<double>(), 1.8, 1e-9);
}

TEST_F(Cli, SweepAndClassifyWriteCsv) {
  Outcome o = run({"--out-dir", dir_.string(), "--resolution", "8", "sweep"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto sweep = read_csv(dir_ / "conservation.csv");
  EXPECT_EQ(sweep.front(), (std::vector<std::string>{"tau", "total", "error_estimate", "residual"}));
  EXPECT_EQ(sweep.size(), 12u);

  const json cfg{{"surface", {{"name", "disk_polar"}, {"radius", 2.0}}},
                 {"flow", {{"field", "example1"}, {"tau_max", 2.0}, {"samples", 5}}}};
  o = run({"--config", write_config("cls.json", cfg), "--out-dir", dir_.string(), "--resolution", "4", "classify"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto rows = read_csv(dir_ / "classify.csv");
  EXPECT_EQ(rows.front(), (std::vector<std::string>{"tau", "node", "u1", "u2", "t", "x", "y", "causal_class"}));
  EXPECT_EQ(rows.size(), 1u + 5u * 16u);
  EXPECT_EQ(rows.back().back(), "timelike");
}

TEST_F(Cli, OutputsAreDeterministic) {
  const fs::path a = dir_ / "a", b = dir_ / "b";
  ASSERT_EQ(run({"--out-dir", a.string(), "--resolution", "8", "sweep"}).code, 0);
  ASSERT_EQ(run({"--out-dir", b.string(), "--resolution", "8", "sweep"}).code, 0);
  EXPECT_EQ(slurp(a / "conservation.csv"), slurp(b / "conservation.csv"));
  EXPECT_EQ(slurp(a / "conservation.csv.json"), slurp(b / "conservation.csv.json"));
  const json sidecar = json::parse(slurp(a / "conservation.csv.json"));
  EXPECT_EQ(sidecar["config"]["resolution"], 8);
}

TEST_F(Cli, ConfigAndNumericalErrors) {
  const std::string bad_json = (dir_ / "bad.json").string();
  std::ofstream(bad_json) << "{ not json";
  EXPECT_EQ(run({"--config", bad_json, "born"}).code, 2);
  EXPECT_EQ(run({"--config", (dir_ / "missing.json").string(), "born"}).code, 2);
  EXPECT_EQ(run({"--config", write_config("unknown.json", {{"current", {{"name", "dirac"}}}}), "born"}).code, 2);
  EXPECT_EQ(run({"--config", write_config("expr.json", {{"surface", {{"name", "expression"}, {"params", {"a", "b"}},
                                                                     {"embed", {"0", "a+", "b"}}, {"box", {{0, 1}, {0, 1}}}}}}),
                 "born"})
                .code,
            2);
  EXPECT_EQ(run({}).code, 2);

  const json folded{{"surface",
                     {{"name", "expression"}, {"params", {"a", "b"}}, {"embed", {"0", "a+b", "0"}}, {"box", {{0, 1}, {0, 1}}}}}};
  const Outcome o = run({"--config", write_config("fold.json", folded), "--out-dir", dir_.string(), "born"});
  EXPECT_EQ(o.code, 3);
  EXPECT_EQ(json::parse(o.err)["error"], "DegenerateImmersion");
}
