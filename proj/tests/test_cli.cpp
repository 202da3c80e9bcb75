#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// Per-process names: ctest may run these cases concurrently.
fs::path scratch(const std::string& name) {
  return fs::path(testing::TempDir()) / ("mslab_cli_" + std::to_string(getpid()) + "_" + name);
}

// Runs the CLI with stdout captured to a file; stdin from `input` if non-empty.
Result run(const std::string& args, const std::string& input = "") {
  const auto out = scratch("stdout");
  std::string cmd = std::string(MSLAB_CLI_PATH) + " " + args;
  if (!input.empty()) {
    const auto in = scratch("stdin");
    std::ofstream(in, std::ios::binary) << input;
    cmd += " < '" + in.string() + "'";
  }
  cmd += " > '" + out.string() + "' 2>/dev/null";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  return r;
}

}  // namespace

TEST(Cli, TypeCount) {
  const auto r = run("type-count --n 3 --alphabet 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "4\n");
}

TEST(Cli, HistogramRoundTrip) {
  const auto d = run("histogram --decode --bits 01001100000111010001");
  EXPECT_EQ(d.code, 0);
  EXPECT_EQ(d.out, "1 2 0 5 0 0 1 3\n");
}

TEST(Cli, EncodeDecodeRoundTrip) {
  const auto enc = scratch("enc.bin");
  ASSERT_EQ(run("encode --codec enum --n 4 --alphabet 3 --out '" + enc.string() + "'", "1 3 3 2\n2 2 2 1\n").code, 0);
  const auto dec = run("decode --codec enum --n 4 --alphabet 3 --in '" + enc.string() + "'");
  EXPECT_EQ(dec.code, 0);
  EXPECT_EQ(dec.out, "1 2 3 3\n1 2 2 2\n");
}

TEST(Cli, UniversalRoundTrip) {
  const auto enc = scratch("uenc.bin");
  ASSERT_EQ(run("universal-encode --out '" + enc.string() + "'", "5 1 1 9 2\n").code, 0);
  const auto dec = run("universal-decode --in '" + enc.string() + "'");
  EXPECT_EQ(dec.code, 0);
  EXPECT_EQ(dec.out, "1 1 2 5 9\n");
}

TEST(Cli, CsvIsDeterministic) {
  const auto a = run("bounds --curve slb,sub,erokhin --parent '{\"family\":\"discrete\",\"params\":{\"probs\":[0.25,0.5,0.25]}}' --points 50");
  const auto b = run("bounds --curve slb,sub,erokhin --parent '{\"family\":\"discrete\",\"params\":{\"probs\":[0.25,0.5,0.25]}}' --points 50");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("label,", 0), 0u);
  EXPECT_EQ(a.out.find('\r'), std::string::npos);
  EXPECT_EQ(a.out.back(), '\n');
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("no-such-command").code, 2);
  EXPECT_EQ(run("type-count --n 3").code, 2);
  EXPECT_EQ(run("histogram --encode --decode").code, 2);
  EXPECT_EQ(run("oszero --parent '{\"family\":\"cauchy\"}'").code, 2);
}

TEST(Cli, RandomizedCommandsNeedSeed) {
  EXPECT_EQ(run("quantize design --K 2 --rate 0 --samples 1000").code, 2);
  const auto a = run("--seed 7 quantize design --K 2 --rate 0 --samples 1000");
  const auto b = run("--seed 7 quantize design --K 2 --rate 0 --samples 1000");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, ComputationErrorLeavesNoFile) {
  const auto target = scratch("partial.csv");
  fs::remove(target);
  EXPECT_EQ(run("table --counts --n-max 40 --k-max 1 --alphabet 2 --out '" + target.string() + "'").code, 1);
  EXPECT_FALSE(fs::exists(target));
  EXPECT_FALSE(fs::exists(target.string() + ".tmp"));
  EXPECT_EQ(run("universal-decode", std::string("\xff\xff\xff\x00", 4)).code, 1);
}

TEST(Cli, JsonFormat) {
  const auto r = run("--format json budget --N 2 --R 1 --n-grid 16,64");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.front(), '[');
}
