#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "oracles.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string output;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(RMPC_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) r.output += buf;
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("rmpc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string example(int k) const { return rmpc::testing::problem_path("example" + std::to_string(k) + ".json"); }
  fs::path dir_;
};

TEST_F(CliTest, SynthPrintsDimensions) {
  const Result r = run("synth " + example(1) + " --out " + (dir_ / "art").string());
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("q=32 vars=4"), std::string::npos) << r.output;
  EXPECT_TRUE(fs::exists(dir_ / "art"));
  EXPECT_FALSE(fs::is_empty(dir_ / "art"));
}

TEST_F(CliTest, MalformedMatrixExitsTwo) {
  std::string text = slurp(example(1));
  const auto pos = text.find("0.9903");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 6, "\"oops\"");
  const fs::path bad = dir_ / "bad.json";
  std::ofstream(bad) << text;
  const Result r = run("synth " + bad.string());
  EXPECT_EQ(r.code, 2) << r.output;
  EXPECT_NE(r.output.find("(1, 1)"), std::string::npos) << r.output;
}

TEST_F(CliTest, InvalidSpecExitsTwo) {
  std::string text = slurp(example(1));
  const auto pos = text.find("\"N\"");
  ASSERT_NE(pos, std::string::npos);
  const auto colon = text.find(':', pos);
  const auto end = text.find_first_of(",}", colon);
  text.replace(colon + 1, end - colon - 1, " -1");
  const fs::path bad = dir_ / "bad.json";
  std::ofstream(bad) << text;
  EXPECT_EQ(run("synth " + bad.string()).code, 2);
  EXPECT_EQ(run("synth " + (dir_ / "missing.json").string()).code, 2);
}

TEST_F(CliTest, BatchIsByteDeterministic) {
  const std::string common = "batch " + example(1) + " --mode suboptimal --count 20 --seed 5 --out ";
  ASSERT_EQ(run(common + (dir_ / "a").string()).code, 0);
  ASSERT_EQ(run(common + (dir_ / "b").string()).code, 0);
  EXPECT_EQ(slurp(dir_ / "a" / "batch.csv"), slurp(dir_ / "b" / "batch.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "summary.json"), slurp(dir_ / "b" / "summary.json"));
  EXPECT_FALSE(slurp(dir_ / "a" / "batch.csv").empty());
}

TEST_F(CliTest, ZeroStateBatch) {
  const Result r = run("batch " + example(1) + " --zero-state --count 1 --out " + (dir_ / "z").string());
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("qps=1 "), std::string::npos) << r.output;
}

TEST_F(CliTest, ProjectThenReport) {
  const std::string cache = (dir_ / "cache.json").string();
  const Result p = run("project " + example(1) + " " + cache + " --count 30");
  ASSERT_EQ(p.code, 0) << p.output;
  ASSERT_TRUE(fs::exists(cache));
  EXPECT_NE(slurp(cache).find("\"entries\""), std::string::npos);

  const std::string b = "batch " + example(1) + " --count 20 --seed 3 ";
  ASSERT_EQ(run(b + "--mode optimal --out " + (dir_ / "opt").string()).code, 0);
  ASSERT_EQ(run(b + "--mode suboptimal-proj --cache " + cache + " --out " + (dir_ / "proj").string()).code, 0);
  const std::string csv = (dir_ / "report.csv").string();
  const Result r = run("report " + (dir_ / "opt").string() + " " + (dir_ / "proj").string() + " --out " + csv);
  ASSERT_EQ(r.code, 0) << r.output;
  const std::string text = slurp(csv);
  EXPECT_EQ(text.substr(0, text.find('\n')), "mode,qps,flops,costs,d_qps_pct,d_flops_pct,d_costs_pct");
  EXPECT_NE(text.find("suboptimal-proj@1,"), std::string::npos) << text;
}

TEST_F(CliTest, ReportWithoutBaselineExitsThree) {
  const std::string b = "batch " + example(1) + " --count 3 --mode suboptimal --out ";
  ASSERT_EQ(run(b + (dir_ / "s1").string()).code, 0);
  ASSERT_EQ(run(b + (dir_ / "s2").string() + " --lambda 0.8").code, 0);
  const Result r = run("report " + (dir_ / "s1").string() + " " + (dir_ / "s2").string());
  EXPECT_EQ(r.code, 3) << r.output;
}

TEST_F(CliTest, RunWritesTrajectory) {
  const fs::path out = dir_ / "t" / "traj.csv";
  const Result r = run("run " + example(1) + " --x0 1,-0.5 --mode suboptimal --out " + out.string());
  ASSERT_EQ(r.code, 0) << r.output;
  const std::string text = slurp(out);
  EXPECT_EQ(text.substr(0, text.find('\n')), "k,x_1,x_2,u_1,e,flops,cost");
  EXPECT_EQ(run("run " + example(1) + " --x0 1,2,3").code, 2);
  EXPECT_EQ(run("run " + example(1) + " --x0 1,abc").code, 2);
}

}  // namespace
