#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

Result cswp(const std::string& args) {
  const std::string cmd = std::string(CSWP_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  Result r{-1, {}};
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  while (size_t n = fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string value_of(const std::string& report, const std::string& key) {
  const auto pos = report.find(key + "=");
  if (pos == std::string::npos) return {};
  const auto start = pos + key.size() + 1;
  return report.substr(start, report.find('\n', start) - start);
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("cswp_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, SolveReportsWitness) {
  const auto prog = write("add.cswp", "width 2\nfree 0 full\no1: mov free0\no2: add o1, o1\n");
  const auto r = cswp("solve " + prog);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(value_of(r.out, "max"), "2");
  EXPECT_EQ(value_of(r.out, "witness.free0"), "0x1");
}

TEST_F(Cli, ReduceThenSolve) {
  const auto out = path("out.cswp");
  ASSERT_EQ(cswp("reduce-maxsat --vars 1 --clause x1 -o " + out).code, 0);
  const auto r = cswp("solve " + out);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(value_of(r.out, "max"), "10");
  EXPECT_EQ(value_of(r.out, "recovered.x1"), "1");
  EXPECT_FALSE(fs::exists(out + ".tmp"));
}

TEST_F(Cli, PipesThroughStdin) {
  const auto r = cswp("reduce-sat-gap --vars 1 --clause x1 --width 4 --factor 2 | " + std::string(CSWP_CLI_PATH) +
                      " bound - --method coarse");
  EXPECT_EQ(r.code, 0);
  EXPECT_FALSE(value_of(r.out, "coarse").empty());
}

TEST_F(Cli, CnfInput) {
  const auto cnf = write("f.cnf", "p cnf 2 2\n1 2 0\n-1 0\n");
  const auto r = cswp("checksat-verify --cnf " + cnf);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(value_of(r.out, "mismatches"), "0");
  EXPECT_EQ(value_of(r.out, "satisfiable"), "1");
}

TEST_F(Cli, FitNoiselessPresetGrid) {
  const auto grid = path("grid.csv");
  ASSERT_EQ(cswp("gen-grid --op add --width 8 -o " + grid).code, 0);
  const auto r = cswp("fit " + grid);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(value_of(r.out, "c_in_mw"), "1.300");
  EXPECT_EQ(value_of(r.out, "c_out_mw"), "4.400");
  const auto h = cswp("heatmap " + grid + " --stage minus-out");
  EXPECT_EQ(h.code, 0);
  EXPECT_EQ(h.out.rfind("op_a\\op_b,0x0,", 0), 0u);
}

TEST_F(Cli, RunEnergyAndPower) {
  const auto prog = write("p.cswp", "width 8\nfree x full\no1: mov #0x0\no2: mov freex\n");
  auto r = cswp("run " + prog + " --input x=0xff");
  EXPECT_EQ(value_of(r.out, "total"), "8");
  r = cswp("run " + prog + " --input freex=3 --format csv");
  EXPECT_NE(r.out.find("total,2"), std::string::npos);
  r = cswp("energy " + prog + " --input x=0xff --model xs1l-paper");
  EXPECT_EQ(value_of(r.out, "energy_nj"), "0.398400");
  r = cswp("summarize-power --tdual 328 --power 362 --power 424");
  EXPECT_EQ(value_of(r.out, "p_tsingle_mw"), "164.000");
  EXPECT_EQ(value_of(r.out, "pct_max"), "0.3692");
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(cswp("").code, 2);
  EXPECT_EQ(cswp("frobnicate").code, 2);
  EXPECT_EQ(cswp("solve " + path("missing.cswp")).code, 2);
  EXPECT_EQ(cswp("bound " + write("p.cswp", "width 4\no1: mov #0x0\n") + " --method fancy").code, 2);
  EXPECT_EQ(cswp("solve " + write("bad.cswp", "width 4\no1: add #0x1\n")).code, 1);
  const auto wide = write("wide.cswp", "width 32\nfree a full\nfree b full\no1: add freea, freeb\n");
  EXPECT_EQ(cswp("solve " + wide + " --budget 100").code, 1);
  const auto prog = write("b.cswp", "width 4\nfree b 01\no1: mov freeb\n");
  EXPECT_EQ(cswp("run " + prog + " --input b=2").code, 1);
}
