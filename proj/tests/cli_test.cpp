// End-to-end tests of the command-line tool: each case runs the real binary
// in a scratch directory and checks exit codes, file outputs, and messages.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

#ifndef AXIBIE_CLI_PATH
#error "AXIBIE_CLI_PATH must point at the built binary"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr interleaved
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(AXIBIE_CLI_PATH) + " " + args + " 2>&1";
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return res;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe) != nullptr) {
    res.output += buf.data();
  }
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("axibie_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  void TearDown() override { fs::remove_all(dir_); }

  std::string write_file(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream out(p);
    out << text;
    out.close();
    return p.string();
  }

  std::string read_file(const std::string& name) {
    std::ifstream in(dir_ / name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::string dir() const { return dir_.string(); }

  static std::string reference_case(int n) {
    return std::string(R"({
  "material": {"a11": 20, "a12": 5, "a13": 1, "a33": 2, "a44": 1},
  "contour": {"kind": "torus", "R0": 2, "rho": 1},
  "N": )") +
           std::to_string(n) +
           R"(,
  "data": {"kind": "manufactured", "pole": [5, 0], "coeffs": [1, 1]}
})";
  }

  fs::path dir_;
};

TEST_F(CliTest, RootsPrintsCharacteristicData) {
  const auto cfg = write_file("m.json", R"({"a11":20,"a12":5,"a13":1,"a33":2,"a44":1})");
  const auto res = run_cli("roots --config " + cfg);
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_NE(res.output.find("lambda1"), std::string::npos);
  EXPECT_NE(res.output.find("4.23587"), std::string::npos);
  EXPECT_NE(res.output.find("delta"), std::string::npos);
}

TEST_F(CliTest, RootsRejectsComplexRootMaterial) {
  const auto cfg = write_file("m.json", R"({"a11":4,"a12":3,"a13":2.5,"a33":2,"a44":1})");
  const auto res = run_cli("roots --config " + cfg);
  EXPECT_EQ(res.exit_code, 2);
  EXPECT_NE(res.output.find("ComplexRoots"), std::string::npos);
}

TEST_F(CliTest, MalformedJsonExitsOne) {
  const auto cfg = write_file("broken.json", "{\"broken\n");
  const auto res = run_cli("roots --config " + cfg);
  EXPECT_EQ(res.exit_code, 1);
}

TEST_F(CliTest, SolveWritesDensitiesAndReport) {
  const auto cfg = write_file("case.json", reference_case(32));
  const auto res = run_cli("solve --config " + cfg + " --out " + dir());
  ASSERT_EQ(res.exit_code, 0) << res.output;
  const std::string csv = read_file("densities.csv");
  EXPECT_EQ(csv.rfind("# axibie", 0), 0u);
  EXPECT_NE(csv.find("s,r,z,h1,h2"), std::string::npos);
  int data_lines = 0;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#' && line[0] != 's') ++data_lines;
  }
  EXPECT_EQ(data_lines, 32);
  const auto report = nlohmann::json::parse(read_file("report.json"));
  EXPECT_EQ(report.at("n").get<int>(), 32);
  EXPECT_LT(report.at("residual").get<double>(), 1e-10);
  EXPECT_GT(report.at("condition").get<double>(), 1.0);
  EXPECT_GE(report.at("wall_time_seconds").get<double>(), 0.0);
}

TEST_F(CliTest, SolveIsByteDeterministic) {
  const auto cfg = write_file("case.json", reference_case(32));
  fs::create_directories(dir_ / "a");
  fs::create_directories(dir_ / "b");
  ASSERT_EQ(run_cli("solve --config " + cfg + " --out " + dir() + "/a").exit_code, 0);
  ASSERT_EQ(run_cli("solve --config " + cfg + " --threads 3 --out " + dir() + "/b").exit_code, 0);
  EXPECT_EQ(read_file("a/densities.csv"), read_file("b/densities.csv"));
  EXPECT_FALSE(read_file("a/densities.csv").empty());
}

TEST_F(CliTest, OddNodeCountExitsOne) {
  const auto cfg = write_file("case.json", reference_case(33));
  const auto res = run_cli("solve --config " + cfg + " --out " + dir());
  EXPECT_EQ(res.exit_code, 1);
}

TEST_F(CliTest, PoleInsideRegionExitsTwo) {
  std::string text = reference_case(32);
  const auto pos = text.find("[5, 0]");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 6, "[2.5, 0.2]");
  const auto cfg = write_file("case.json", text);
  const auto res = run_cli("solve --config " + cfg + " --out " + dir());
  EXPECT_EQ(res.exit_code, 2);
  EXPECT_NE(res.output.find("PoleInsideRegion"), std::string::npos);
}

TEST_F(CliTest, VerifyPassesReferenceCase) {
  const auto cfg = write_file("case.json", reference_case(64));
  const auto res = run_cli("verify --config " + cfg + " --out " + dir());
  EXPECT_EQ(res.exit_code, 0) << res.output;
  const auto report = nlohmann::json::parse(read_file("report.json"));
  EXPECT_TRUE(report.at("pass").get<bool>());
  EXPECT_LE(report.at("max_relative_error").back().get<double>(), 1e-6);
}

TEST_F(CliTest, VerifyFailsDeliberatelyCoarseCase) {
  const auto cfg = write_file("case.json", reference_case(16));
  const auto res = run_cli("verify --config " + cfg + " --out " + dir());
  EXPECT_EQ(res.exit_code, 3) << res.output;
  EXPECT_NE(res.output.find("FAIL"), std::string::npos);
  const auto report = nlohmann::json::parse(read_file("report.json"));
  EXPECT_FALSE(report.at("pass").get<bool>());
}

TEST_F(CliTest, ZeroCsvDataGivesZeroDensities) {
  std::string data = "g1,g2\n";
  for (int i = 0; i < 32; ++i) data += "0,0\n";
  const auto data_path = write_file("g.csv", data);
  std::string text = reference_case(32);
  const std::string pat = R"({"kind": "manufactured", "pole": [5, 0], "coeffs": [1, 1]})";
  const auto pos = text.find(pat);
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, pat.size(), R"({"kind": "csv", "path": ")" + data_path + R"("})");
  const auto cfg = write_file("case.json", text);
  const auto res = run_cli("solve --config " + cfg + " --out " + dir());
  ASSERT_EQ(res.exit_code, 0) << res.output;
  std::istringstream in(read_file("densities.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 's') continue;
    ++rows;
    EXPECT_EQ(line.substr(line.size() - 4), ",0,0") << line;
  }
  EXPECT_EQ(rows, 32);
}

TEST_F(CliTest, EvalEmptyProbeFileGivesHeaderOnlyCsv) {
  const auto cfg = write_file("case.json", reference_case(32));
  const auto probes = write_file("probes.csv", "r,z\n");
  const auto res = run_cli("eval --config " + cfg + " --probes " + probes + " --out " + dir());
  ASSERT_EQ(res.exit_code, 0) << res.output;
  const std::string csv = read_file("eval.csv");
  std::istringstream in(csv);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 2);  // comment + header
  EXPECT_NE(csv.find("r,z,u_r,u_z"), std::string::npos);
}

TEST_F(CliTest, EvalWritesDisplacementsAtProbes) {
  const auto cfg = write_file("case.json", reference_case(64));
  const auto probes = write_file("probes.csv", "r,z\n2.0,0.0\n");
  const auto res =
      run_cli("eval --config " + cfg + " --probes " + probes + " --stress --out " + dir());
  ASSERT_EQ(res.exit_code, 0) << res.output;
  const std::string csv = read_file("eval.csv");
  EXPECT_NE(csv.find("srr,sphiphi,szz,srz"), std::string::npos);
  // u_r(2,0) of the reference case, good to well under 1e-7 at N=64.
  EXPECT_NE(csv.find("0.0194535"), std::string::npos) << csv;
}

TEST_F(CliTest, KernelTableMatchesFrozenValue) {
  const auto res = run_cli("kernel-table --point 1 1 1 0");
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_NE(res.output.find("0.64263"), std::string::npos);
  EXPECT_NE(res.output.find("w0,w1"), std::string::npos);
}

TEST_F(CliTest, HalfplaneZeroProfilesGiveZeroGrid) {
  const auto cfg = write_file("hp.json", R"({
  "material": {"a11": 20, "a12": 5, "a13": 1, "a33": 2, "a44": 1},
  "profiles": {"kind": "gaussian", "amplitude": [0, 0], "width": [1, 1]},
  "grid": {"r": [0, 2, 3], "z": [0, 1, 2]}
})");
  const auto res = run_cli("halfplane --config " + cfg + " --out " + dir());
  ASSERT_EQ(res.exit_code, 0) << res.output;
  std::istringstream in(read_file("halfplane.csv"));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'r') continue;
    const auto last_comma = line.rfind(',');
    EXPECT_EQ(line.substr(last_comma + 1), "0") << line;
    const auto prev_comma = line.rfind(',', last_comma - 1);
    EXPECT_EQ(line.substr(prev_comma + 1, last_comma - prev_comma - 1), "0") << line;
  }
}

TEST_F(CliTest, MissingConfigFlagExitsOne) {
  const auto res = run_cli("solve");
  EXPECT_EQ(res.exit_code, 1);
}

}  // namespace
