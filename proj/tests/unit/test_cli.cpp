#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "rrambb/csv.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "rrambb");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = rrambb::cli::run_command(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rrambb_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

const std::vector<std::string> kSmall = {"--n-c", "16", "--symbols", "8", "--antennas", "2"};

std::vector<std::string> with(std::vector<std::string> head, const std::vector<std::string>& tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

}  // namespace

TEST(Cli, GrayTable) {
  const Outcome r = run({"gray", "--width", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "decimal,binary,gray");
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 16u);
  EXPECT_EQ(rows[2], "2,0010,0011");
  EXPECT_EQ(rows[10], "10,1010,1111");
  EXPECT_EQ(rows[15], "15,1111,1000");
}

TEST(Cli, SimulateIsDeterministic) {
  const fs::path a = scratch("a.csv"), b = scratch("b.csv");
  ASSERT_EQ(run(with({"simulate", "--seed", "7", "--out", a.string()}, kSmall)).code, 0);
  ASSERT_EQ(run(with({"simulate", "--seed", "7", "--out", b.string()}, kSmall)).code, 0);
  const std::string ca = slurp(a);
  EXPECT_EQ(ca, slurp(b));
  EXPECT_EQ(ca.substr(0, ca.find('\n')), "snr_db,scheme,mode,trial,mer_db,ber");
  const std::string manifest = slurp(a.string() + ".manifest.json");
  EXPECT_NE(manifest.find("\"seed\": 7"), std::string::npos);
  EXPECT_NE(manifest.find("a.csv"), std::string::npos);
  const Outcome other = run(with({"simulate", "--seed", "8"}, kSmall));
  EXPECT_NE(other.out, ca);
}

TEST(Cli, BoundsRowWithinBound) {
  const Outcome r = run({"bounds", "--n", "4", "--trials", "200"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,scheme,mode,mc_mean,ci95,bound");
  int rows = 0;
  while (std::getline(in, line)) {
    const auto f = rrambb::split_csv_line(line);
    ASSERT_EQ(f.size(), 6u);
    EXPECT_LE(std::stod(f[3]), std::stod(f[5])) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 2);
}

TEST(Cli, CostMatchesBaseline) {
  const Outcome r = run({"cost"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("component,latency_s,energy_j"), std::string::npos);
  EXPECT_NE(r.out.find("total,0.0501653504"), std::string::npos);
}

TEST(Cli, ProgramTraceSchema) {
  const Outcome r = run({"program-trace", "--value", "0.4", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "pulse_index,target,side,voltage_v,conductance_s,latency_s,energy_j");
}

TEST(Cli, SweepAntennasSchema) {
  const Outcome r = run({"sweep-antennas", "--sizes", "2,4", "--trials", "2", "--n-c", "16", "--symbols", "8"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "n_antennas,scheme,latency_s,energy_j,ci95");
}

TEST(Cli, ImageWritesPgm) {
  const fs::path out = scratch("img.pgm");
  const Outcome r = run({"image", "--size", "16", "--snr", "30", "--backend", "digital", "--n-c", "16", "--symbols",
                     "8", "--antennas", "2", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(out).substr(0, 2), "P5");
}

TEST(Cli, EmitConfigReparses) {
  const fs::path cfg = scratch("effective.toml");
  ASSERT_EQ(run(with({"simulate", "--seed", "5", "--emit-config", cfg.string()}, kSmall)).code, 0);
  const Outcome again = run({"simulate", "--config", cfg.string()});
  ASSERT_EQ(again.code, 0) << again.err;
  EXPECT_EQ(again.out, run(with({"simulate", "--seed", "5"}, kSmall)).out);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"simulate", "--antennas", "0"}).code, 1);
  EXPECT_EQ(run({"simulate", "--n-c", "100"}).code, 1);
  EXPECT_EQ(run({"nosuchcommand"}).code, 1);
  EXPECT_EQ(run({"simulate", "--config", "/nonexistent/x.toml"}).code, 1);
  EXPECT_EQ(run({"image", "--in", "/nonexistent/x.pgm", "--n-c", "16", "--symbols", "8"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  const Outcome bad = run({"gray", "--width", "0"});
  EXPECT_NE(bad.code, 0);
  EXPECT_FALSE(bad.err.empty());
}
