#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "qdarwin/qcore.hpp"

namespace {

namespace fs = std::filesystem;
using qdarwin::cli::parse_angle;
using qdarwin::cli::run;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qdarwin_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST(ParseAngle, AcceptsPiForms) {
  constexpr double pi = std::numbers::pi;
  EXPECT_DOUBLE_EQ(parse_angle("pi"), pi);
  EXPECT_DOUBLE_EQ(parse_angle("-pi"), -pi);
  EXPECT_DOUBLE_EQ(parse_angle("pi/2"), pi / 2);
  EXPECT_DOUBLE_EQ(parse_angle("2*pi"), 2 * pi);
  EXPECT_DOUBLE_EQ(parse_angle("3pi/4"), 3 * pi / 4);
  EXPECT_DOUBLE_EQ(parse_angle("-0.5*pi"), -pi / 2);
  EXPECT_DOUBLE_EQ(parse_angle("3.141592653589793"), 3.141592653589793);
  EXPECT_DOUBLE_EQ(parse_angle("1e-3"), 1e-3);
}

TEST(ParseAngle, RejectsGarbage) {
  for (const char* bad : {"", "p", "pi/0", "pi*2", "2pix", "abc", "1.2.3"}) {
    EXPECT_THROW(parse_angle(bad), qdarwin::ValidationError) << bad;
  }
}

TEST_F(CliTest, StarCurveCsv) {
  const auto out = path("star.csv");
  const auto r = invoke({"curve", "--family", "star", "--n-env", "9", "--phi",
                         "3.141592653589793", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(slurp(out));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "delta,mean_mi,min_mi,max_mi,n_fragments,stderr");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    std::istringstream fields(line);
    std::string delta;
    std::string mean;
    std::getline(fields, delta, ',');
    std::getline(fields, mean, ',');
    EXPECT_NEAR(std::stod(mean), std::stoi(delta) == 9 ? 2.0 : 1.0, 1e-9) << line;
  }
  EXPECT_EQ(rows, 9);
  EXPECT_TRUE(fs::exists(out + ".manifest.json"));
}

TEST_F(CliTest, ManifestFields) {
  const auto out = path("diamond.json");
  ASSERT_EQ(invoke({"curve", "--family", "diamond", "--n-env", "3", "--phi", "pi", "--theta",
                    "pi", "--out", out, "--timestamp", "2020-01-01T00:00:00Z"})
                .code,
            0);
  const auto m = nlohmann::json::parse(slurp(out + ".manifest.json"));
  EXPECT_EQ(m["command"], "curve");
  EXPECT_EQ(m["parameters"]["family"], "diamond");
  EXPECT_EQ(m["parameters"]["theta"], "pi");
  EXPECT_EQ(m["timestamp"], "2020-01-01T00:00:00Z");
  EXPECT_TRUE(m.contains("seed"));
  EXPECT_TRUE(m["tool_version"].is_string());
  const auto curve = nlohmann::json::parse(slurp(out));
  EXPECT_NEAR(curve["points"][0]["mean_mi"].get<double>(), 1.0 / 3.0, 1e-9);
}

TEST_F(CliTest, ManifestTimestampDefaultsToUtcNow) {
  const auto out = path("plan.json");
  ASSERT_EQ(invoke({"plan", "--target", "star", "--out", out}).code, 0);
  const auto ts = nlohmann::json::parse(slurp(out + ".manifest.json"))["timestamp"].get<std::string>();
  EXPECT_EQ(ts.size(), 20U);
  EXPECT_EQ(ts.back(), 'Z');
}

TEST_F(CliTest, NamedCurve) {
  const auto out = path("canonical.csv");
  ASSERT_EQ(invoke({"curve", "--named", "diamond_canonical", "--aggregate", "mean", "--out", out}).code, 0);
  EXPECT_NE(slurp(out).find("2,1.66666666667,1,2,3,"), std::string::npos);
}

TEST_F(CliTest, PlanCounts) {
  const auto star = path("star_plan.json");
  const auto full = path("full_plan.json");
  ASSERT_EQ(invoke({"plan", "--target", "star", "--out", star}).code, 0);
  ASSERT_EQ(invoke({"plan", "--target", "full_tomography", "--out", full}).code, 0);
  const auto s = nlohmann::json::parse(slurp(star));
  const auto f = nlohmann::json::parse(slurp(full));
  EXPECT_EQ(s["counts"]["n_correlators"], 32);
  EXPECT_EQ(s["counts"]["n_settings"], 17);
  EXPECT_EQ(f["counts"]["n_projectors"], 1296);
}

TEST_F(CliTest, StateDumpFromFamilyAndGraphFile) {
  const auto a = path("a.json");
  ASSERT_EQ(invoke({"state", "--family", "star", "--n-env", "3", "--phi", "pi", "--out", a}).code, 0);
  const auto dumped = nlohmann::json::parse(slurp(a));
  EXPECT_EQ(dumped["n_qubits"], 4);
  EXPECT_EQ(dumped["amplitudes"].size(), 16U);

  const auto graph = path("graph.json");
  std::ofstream(graph) << dumped["graph"].dump();
  const auto b = path("b.json");
  ASSERT_EQ(invoke({"state", "--graph-file", graph, "--out", b}).code, 0);
  EXPECT_EQ(nlohmann::json::parse(slurp(b))["amplitudes"], dumped["amplitudes"]);
}

TEST_F(CliTest, Verify) {
  const auto r = invoke({"verify"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  std::size_t count = 0;
  for (std::size_t pos = 0; (pos = r.out.find("fidelity 1.000000", pos)) != std::string::npos; ++pos) ++count;
  EXPECT_GE(count, 2U);
}

TEST_F(CliTest, ValidationErrorsExitOne) {
  const auto out = path("x.csv");
  EXPECT_EQ(invoke({"state", "--family", "star", "--n-env", "3", "--theta", "pi", "--out", out}).code, 1);
  EXPECT_EQ(invoke({"curve", "--family", "star", "--out", out}).code, 1);
  EXPECT_EQ(invoke({"curve", "--family", "star", "--n-env", "3", "--named", "ghz4", "--out", out}).code, 1);
  EXPECT_EQ(invoke({"curve", "--named", "ghz4", "--phi", "1", "--out", out}).code, 1);
  EXPECT_EQ(invoke({"curve", "--named", "nope", "--out", out}).code, 1);
  EXPECT_EQ(invoke({"curve", "--family", "star", "--n-env", "3", "--phi", "abc", "--out", out}).code, 1);
  EXPECT_EQ(invoke({"curve", "--family", "tree", "--n-env", "3", "--out", out}).code, 1);
  EXPECT_EQ(invoke({"curve", "--graph-file", path("missing.json"), "--out", out}).code, 1);
  EXPECT_EQ(invoke({"plan", "--target", "star", "--bogus", "--out", out}).code, 1);
  EXPECT_EQ(invoke({"plan", "--out", out}).code, 1);
  EXPECT_EQ(invoke({"estimate", "--named", "ghz3", "--pipeline", "closed_form", "--out", out}).code, 1);
  EXPECT_EQ(invoke({"estimate", "--named", "ghz4", "--pipeline", "mle", "--out", out}).code, 1);
  EXPECT_EQ(invoke({"estimate", "--named", "ghz4", "--pipeline", "closed_form", "--shots", "0", "--out", out}).code, 1);
  EXPECT_EQ(invoke({}).code, 1);
  EXPECT_FALSE(fs::exists(out));
}

TEST_F(CliTest, UnwritableOutputIsInternalError) {
  EXPECT_EQ(invoke({"plan", "--target", "star", "--out", path("no/such/dir/p.json")}).code, 2);
}

TEST_F(CliTest, HelpAndVersionSucceed) {
  EXPECT_EQ(invoke({"--help"}).code, 0);
  const auto v = invoke({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_FALSE(v.out.empty());
}

TEST_F(CliTest, SizeCapFromEnvironment) {
  const auto out = path("big.csv");
  ::setenv("QDARWIN_MAX_QUBITS", "8", 1);
  const auto capped = invoke({"curve", "--family", "star", "--n-env", "9", "--out", out});
  ::setenv("QDARWIN_MAX_QUBITS", "bad", 1);
  const auto garbage = invoke({"verify"});
  ::unsetenv("QDARWIN_MAX_QUBITS");
  qdarwin::qcore::set_max_qubits(qdarwin::qcore::kDefaultMaxQubits);
  EXPECT_EQ(capped.code, 1);
  EXPECT_EQ(garbage.code, 1);
}

TEST_F(CliTest, SeededRunsAreByteIdentical) {
  const std::vector<std::vector<std::string>> commands = {
      {"estimate", "--named", "star_experimental", "--pipeline", "closed_form", "--shots", "4500",
       "--seed", "11", "--bootstrap", "30"},
      {"estimate", "--named", "diamond_canonical", "--pipeline", "reconstruction", "--shots",
       "2000", "--seed", "12", "--bootstrap", "10", "--poisson"},
      {"curve", "--family", "diamond", "--n-env", "6", "--phi", "pi/3", "--theta", "-pi/5"},
  };
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::vector<std::string> outputs;
    for (int rep = 0; rep < 2; ++rep) {
      auto args = commands[i];
      const auto out = path("run" + std::to_string(i) + "_" + std::to_string(rep) + ".csv");
      args.insert(args.end(), {"--out", out, "--timestamp", "2024-05-01T12:00:00Z"});
      if (args[0] == "estimate") args.insert(args.end(), {"--counts-out", out + ".counts.json"});
      ASSERT_EQ(invoke(args).code, 0);
      std::string manifest = slurp(out + ".manifest.json");
      // The manifest names its own output path; normalise it before comparing.
      manifest.replace(manifest.find(out), out.size(), "OUT");
      outputs.push_back(slurp(out) + manifest +
                        (args[0] == "estimate" ? slurp(out + ".counts.json") : ""));
    }
    EXPECT_EQ(outputs[0], outputs[1]) << "command " << i;
  }
}

TEST_F(CliTest, EstimateFromStoredCountsMatchesSampledRun) {
  const auto out = path("sampled.csv");
  const auto counts = path("counts.json");
  ASSERT_EQ(invoke({"estimate", "--named", "star_experimental", "--pipeline", "closed_form",
                    "--shots", "4500", "--seed", "7", "--bootstrap", "40", "--out", out,
                    "--counts-out", counts})
                .code,
            0);
  const auto replay = path("replay.csv");
  const auto r = invoke({"estimate", "--counts-file", counts, "--pipeline", "closed_form", "--seed",
                         "7", "--bootstrap", "40", "--out", replay});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(out), slurp(replay));
  EXPECT_EQ(invoke({"estimate", "--counts-file", counts, "--named", "ghz4", "--pipeline",
                    "closed_form", "--out", replay})
                .code,
            1);
}

TEST_F(CliTest, EstimateWritesStderrColumn) {
  const auto out = path("est.csv");
  ASSERT_EQ(invoke({"estimate", "--named", "star_experimental", "--pipeline", "closed_form",
                    "--shots", "20000", "--seed", "3", "--bootstrap", "50", "--out", out,
                    "--table-out", path("table.json")})
                .code,
            0);
  std::istringstream csv(slurp(out));
  std::string line;
  std::getline(csv, line);
  while (std::getline(csv, line)) EXPECT_NE(line.back(), ',') << line;
  const auto table = nlohmann::json::parse(slurp(path("table.json")));
  EXPECT_EQ(table["entries"].size(), 32U);
}

}  // namespace
