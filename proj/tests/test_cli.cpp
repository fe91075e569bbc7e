#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "amk/io.hpp"

namespace fs = std::filesystem;
using amk::io::json;

namespace {

const fs::path kDir = fs::temp_directory_path() / "amk_cli_test";

int run(const std::string& args) {
  fs::create_directories(kDir);
  const std::string cmd = std::string(AMK_CLI_PATH) + " " + args + " >" + (kDir / "stdout.txt").string() + " 2>" +
                          (kDir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string path(const std::string& name) { return (kDir / name).string(); }

}  // namespace

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("no-such-command"), 1);
  EXPECT_EQ(run("generate-fixture --kind banana --grid-n 16 --extent 4 --out " + path("x.json")), 1);
  EXPECT_FALSE(fs::exists(path("x.json")));
}

TEST(Cli, NormOfZeroSignal) {
  ASSERT_EQ(run("generate-fixture --kind zero --as-signal --grid-n 64 --extent 8 --out " + path("zero.json")), 0);
  ASSERT_EQ(run("norm --signal " + path("zero.json") + " --p 1 --out " + path("norm.json")), 0);
  const auto j = amk::io::read_json_file(path("norm.json"));
  EXPECT_EQ(j.dump().find("NaN"), std::string::npos);
}

TEST(Cli, CorruptedInputLeavesNoReport) {
  fs::create_directories(kDir);
  std::ofstream(path("corrupt.json")) << "{\"grid\": [1, 2";
  fs::remove(path("corrupt_out.json"));
  EXPECT_EQ(run("boundedness --kernel " + path("corrupt.json") + " --p 1 --out " + path("corrupt_out.json")), 1);
  EXPECT_FALSE(fs::exists(path("corrupt_out.json")));
  EXPECT_NE(slurp(path("stderr.txt")).find("error"), std::string::npos);
}

TEST(Cli, FixturesAreDeterministic) {
  const std::string base = "generate-fixture --kind random-band --grid-n 128 --extent 8 ";
  ASSERT_EQ(run(base + "--seed 7 --out " + path("a.json")), 0);
  ASSERT_EQ(run(base + "--seed 7 --out " + path("b.json")), 0);
  ASSERT_EQ(run(base + "--seed 8 --out " + path("c.json")), 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_NE(slurp(path("a.json")), slurp(path("c.json")));
}

TEST(Cli, RankOneBoundednessPasses) {
  ASSERT_EQ(run("generate-fixture --kind rank1 --grid-n 64 --extent 8 --out " + path("rank1.json")), 0);
  ASSERT_EQ(run("boundedness --kernel " + path("rank1.json") + " --p 1 --q 1 --alpha 0.5 --trials 4 --out " +
                path("bd.json")),
            0);
  const auto j = amk::io::read_json_file(path("bd.json"));
  EXPECT_TRUE(j.at("pass").get<bool>());
  EXPECT_TRUE(j.contains("tolerances"));
  // a band this tight cannot hold the ratios of three different measures
  EXPECT_EQ(run("boundedness --kernel " + path("rank1.json") + " --p 1 --q 1 --alpha 0.5 --trials 4 --tol-band 1.0001"),
            2);
  EXPECT_NE(slurp(path("stderr.txt")).find("outside [1/"), std::string::npos);
}

TEST(Cli, ReportsAreReproducible) {
  ASSERT_EQ(run("generate-fixture --kind rank1 --grid-n 64 --extent 8 --out " + path("rank1.json")), 0);
  const std::string cmd = "compactness --kernel " + path("rank1.json") + " --p 1 --alpha 0.5 --out ";
  ASSERT_EQ(run(cmd + path("c1.json")), 0);
  ASSERT_EQ(run(cmd + path("c2.json")), 0);
  EXPECT_EQ(slurp(path("c1.json")), slurp(path("c2.json")));
}

TEST(Cli, PartitionValidateAndSampling) {
  EXPECT_EQ(run("partition-validate --alpha 0.5 --grid-n 256 --extent 16 --export " + path("part.json") + " --out " +
                path("pv.json")),
            0);
  EXPECT_TRUE(amk::io::read_json_file(path("part.json")).contains("eta"));
  EXPECT_EQ(run("sampling-check --grid-n 128 --extent 8 --trials 4 --csv " + path("s.csv")), 0);
  EXPECT_EQ(slurp(path("s.csv")).rfind("f_id,p,lambda,lp_norm,seq_norm,ratio", 0), 0u);
}
