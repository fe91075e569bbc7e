#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "amk/io.hpp"
#include "helpers.hpp"

using namespace amk;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "amk_io_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(IoNumber, NonFiniteValuesBecomeStrings) {
  EXPECT_EQ(io::number(kInf), "inf");
  EXPECT_EQ(io::number(-kInf), "-inf");
  EXPECT_TRUE(io::number(std::nan("")).is_null());
  EXPECT_EQ(io::read_number(io::json("inf")), kInf);
  EXPECT_EQ(io::read_number(io::json(2.5)), 2.5);
  EXPECT_THROW(io::read_number(io::json("many")), io::input_error);
}

TEST(IoSignal, RoundTripIsExact) {
  std::mt19937_64 rng(1);
  for (const Grid& g : {Grid(1, 3.5, 32), Grid(2, 2.0, 8)}) {
    const Signal f = amk::testing::random_envelope_signal(g, rng);
    const auto j = io::json::parse(io::dump(io::signal_json(f)));
    const Signal back = io::signal_from_json(j);
    EXPECT_TRUE(back.grid == g);
    EXPECT_EQ(back.values, f.values);
  }
}

TEST(IoSignal, RejectsMalformedInput) {
  EXPECT_THROW(io::signal_from_json(io::json::parse(R"({"dim":1,"extent":1,"n":8,"re":[0],"im":[0]})")),
               io::input_error);
  EXPECT_THROW(io::signal_from_json(io::json::parse(R"({"dim":1,"extent":1})")), io::input_error);
  EXPECT_THROW(io::grid_from_json(io::json::parse(R"({"dim":1,"extent":1,"n":7})")), io::input_error);
}

TEST(IoKernel, RoundTripIsExact) {
  const Grid g(1, 4.0, 32);
  const auto K = make_kernel_fixture(FixtureKind::random_band, g, {0.0, 2.0, 1.5, 3});
  const Kernel2D back = io::kernel_from_json(io::json::parse(io::dump(io::kernel_json(K))));
  EXPECT_EQ(back.values, K.values);
}

TEST(IoFiles, AtomicWriteAndMalformedRead) {
  const auto path = scratch("report.json");
  io::write_atomic(path, "{\"a\": 1}\n");
  EXPECT_FALSE(fs::exists(fs::path(path.string() + ".tmp")));
  EXPECT_EQ(io::read_json_file(path).at("a"), 1);
  const auto bad = scratch("bad.json");
  std::ofstream(bad) << "{\"a\": ";
  EXPECT_THROW(io::read_json_file(bad), io::input_error);
  EXPECT_THROW(io::read_json_file(scratch("missing.json")), io::input_error);
}

TEST(IoReports, EchoTolerancesAndCsv) {
  const auto P = build_partition(0.5, Grid(1, 8.0, 64));
  const auto j = io::partition_report_json(P, validate_partition(P));
  EXPECT_TRUE(j.contains("tolerances"));
  EXPECT_EQ(io::csv({"a", "b"}, {{"1", "2"}}), "a,b\n1,2\n");
  EXPECT_EQ(io::cell(kInf), "\"inf\"");
}
