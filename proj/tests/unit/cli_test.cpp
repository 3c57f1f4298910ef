#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rwl1/binary_io.hpp"
#include "rwl1cli/cli.hpp"

namespace rwl1::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("rwl1_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, HelpOnEverySubcommandExitsZero) {
  for (const char* sub : {"sparse-grid", "compressible", "recover", "instance", "verify", "selftest"}) {
    const auto r = run_cli({sub, "--help"});
    EXPECT_EQ(r.code, kExitOk) << sub;
    EXPECT_NE(r.out.find("--"), std::string::npos) << sub;
  }
  EXPECT_EQ(run_cli({"--help"}).code, kExitOk);
}

TEST_F(CliTest, HelpDocumentsFlags) {
  const auto r = run_cli({"sparse-grid", "--help"});
  for (const char* flag : {"--N", "--n-fractions", "--k-over-n", "--trials", "--seed", "--workers",
                           "--methods", "--config", "--out", "--max-outer", "--p-hat"})
    EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, kExitUsage);
  EXPECT_EQ(run_cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"sparse-grid", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"sparse-grid", "--trials", "many"}).code, kExitUsage);
}

TEST_F(CliTest, SparseGridWritesDeterministicOutputs) {
  const std::vector<std::string> base = {"sparse-grid", "--N", "40", "--n-fractions", "0.5",
                                         "--k-over-n", "0.1,0.3", "--trials", "2", "--seed", "3"};
  auto a = base;
  a.insert(a.end(), {"--workers", "1", "--out", path("a")});
  auto b = base;
  b.insert(b.end(), {"--workers", "3", "--out", path("b")});
  const auto ra = run_cli(a);
  ASSERT_EQ(ra.code, kExitOk) << ra.err;
  ASSERT_EQ(run_cli(b).code, kExitOk);
  const std::string csv = slurp(path("a/sparse_grid.csv"));
  EXPECT_EQ(csv, slurp(path("b/sparse_grid.csv")));
  EXPECT_EQ(line_count(csv), 1u + 2u * 3u * 2u);
  EXPECT_EQ(line_count(ra.out), 2u * 3u);

  ASSERT_EQ(run_cli(a).code, kExitOk);
  EXPECT_EQ(csv, slurp(path("a/sparse_grid.csv")));

  const json s = json::parse(slurp(path("a/sparse_grid.json")));
  EXPECT_EQ(s["schema_version"], 1);
  EXPECT_EQ(s["records"], 12);
  EXPECT_EQ(s["recovery_tol"], 1e-3);
  EXPECT_EQ(s["config"]["N"], 40);
  EXPECT_EQ(s["aggregates"].size(), 6u);
}

TEST_F(CliTest, DefaultGridRecordCount) {
  const auto r = run_cli({"sparse-grid", "--N", "30", "--trials", "1", "--out", path("g")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(line_count(slurp(path("g/sparse_grid.csv"))), 1u + 3u * 5u * 3u * 1u);
}

TEST_F(CliTest, ConfigPrecedence) {
  {
    std::ofstream cfg(path("cfg.json"));
    cfg << R"({"N": 50, "trials": 2, "n_fractions": [0.4], "k_over_n": [0.1],
               "methods": ["l1"], "outer": {"max_outer": 4}})";
  }
  const auto r = run_cli({"sparse-grid", "--config", path("cfg.json"), "--trials", "1",
                          "--out", path("o")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json s = json::parse(slurp(path("o/sparse_grid.json")));
  EXPECT_EQ(s["config"]["N"], 50);                      // file over default
  EXPECT_EQ(s["config"]["trials"], 1);                  // flag over file
  EXPECT_EQ(s["config"]["outer"]["max_outer"], 4);      // nested file key
  EXPECT_EQ(s["config"]["outer"]["p_hat"], 0.99);       // default kept
  EXPECT_EQ(s["records"], 1);
}

TEST_F(CliTest, ConfigRejectsUnknownKeys) {
  {
    std::ofstream cfg(path("bad.json"));
    cfg << R"({"N": 50, "tirals": 2})";
  }
  const auto r = run_cli({"sparse-grid", "--config", path("bad.json"), "--out", path("o")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("tirals"), std::string::npos);
  EXPECT_EQ(run_cli({"sparse-grid", "--config", path("missing.json")}).code, kExitUsage);
}

TEST_F(CliTest, UnwritableOutputDirectory) {
  { std::ofstream f(path("file")); }
  const auto r = run_cli({"sparse-grid", "--N", "20", "--trials", "1", "--out", path("file")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, CompressibleSummaryGroups) {
  const auto r = run_cli({"compressible", "--N", "60", "--n-over-N", "0.25", "--p", "1.1,1.5,2",
                          "--trials", "2", "--out", path("c")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json s = json::parse(slurp(path("c/compressible.json")));
  ASSERT_EQ(s["mse_ratios"].size(), 3u);
  for (const auto& g : s["mse_ratios"]) EXPECT_EQ(g["ratios"].size() + g["undefined"].get<std::size_t>(), 2u);
  EXPECT_EQ(line_count(slurp(path("c/compressible.csv"))), 1u + 3u * 2u * 2u);
}

TEST_F(CliTest, InstanceThenRecover) {
  ASSERT_EQ(run_cli({"instance", "--n", "20", "--N", "60", "--k", "3", "--seed", "4", "--out",
                     path("i")})
                .code,
            kExitOk);
  for (const char* m : {"l1", "irl1", "sdrl1"}) {
    const std::string out = path(std::string("xhat_") + m + ".bin");
    const auto r = run_cli({"recover", "--method", m, "--matrix", path("i/A.bin"), "--y",
                            path("i/y.bin"), "--eps", "0", "--out", out});
    ASSERT_EQ(r.code, kExitOk) << m << ": " << r.err;
    const Vector x = io::read_vector(path("i/x.bin"));
    EXPECT_LE((io::read_vector(out) - x).norm(), 1e-5 * x.norm()) << m;
    const json side = json::parse(slurp(out + ".json"));
    EXPECT_EQ(side["method"], m);
    EXPECT_EQ(side["trace"].size(), side["outer_iterations"].get<std::size_t>());
  }
}

TEST_F(CliTest, RecoverErrors) {
  ASSERT_EQ(run_cli({"instance", "--n", "10", "--N", "30", "--k", "2", "--out", path("i")}).code,
            kExitOk);
  ASSERT_EQ(run_cli({"instance", "--n", "12", "--N", "30", "--k", "2", "--out", path("j")}).code,
            kExitOk);
  auto r = run_cli({"recover", "--method", "l2", "--matrix", path("i/A.bin"), "--y",
                    path("i/y.bin"), "--out", path("x.bin")});
  EXPECT_EQ(r.code, kExitUsage);
  r = run_cli({"recover", "--method", "l1", "--matrix", path("i/A.bin"), "--y", path("j/y.bin"),
               "--out", path("x.bin")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("10x30"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("12"), std::string::npos) << r.err;
  r = run_cli({"recover", "--method", "l1", "--matrix", path("none.bin"), "--y", path("i/y.bin"),
               "--out", path("x.bin")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_FALSE(fs::exists(path("x.bin")));
}

TEST_F(CliTest, RecoverReportsIterationCap) {
  ASSERT_EQ(run_cli({"instance", "--n", "20", "--N", "60", "--k", "8", "--out", path("i")}).code,
            kExitOk);
  const auto r = run_cli({"recover", "--method", "l1", "--matrix", path("i/A.bin"), "--y",
                          path("i/y.bin"), "--out", path("x.bin"), "--max-iters", "2"});
  EXPECT_EQ(r.code, kExitNotConverged);
  EXPECT_TRUE(fs::exists(path("x.bin")));
}

TEST_F(CliTest, VerifyRipOnFixture) {
  Matrix a(2, 3);
  const double h = 1 / std::sqrt(2.0);
  a << 1, 0, h, 0, 1, h;
  io::write_matrix(path("A.bin"), a);
  const auto r = run_cli({"verify", "--rip", "--matrix", path("A.bin"), "--k", "3"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("delta_2 = 0.70710678"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("delta_3"), std::string::npos);
}

TEST_F(CliTest, VerifyDefaultAndProp2) {
  auto r = run_cli({"verify", "--trials", "20000"});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  r = run_cli({"verify", "--prop2", "--trials", "20000"});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_NE(r.out.find("gap"), std::string::npos);
}

TEST_F(CliTest, SelftestPasses) {
  const auto r = run_cli({"selftest"});
  EXPECT_EQ(r.code, kExitOk) << r.out;
}

}  // namespace
}  // namespace rwl1::cli
