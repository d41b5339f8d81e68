#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"ampgdf"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = ampgdf::cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("ampgdf_cli_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, ampgdf::cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, ampgdf::cli::kUsage);
  EXPECT_EQ(run({"solve", "--penalty", "l1"}).code, ampgdf::cli::kUsage);
  EXPECT_EQ(run({"solve", "--penalty", "ridge", "--lambda", "1"}).code, ampgdf::cli::kUsage);
  EXPECT_EQ(run({"sweep", "--penalty", "scad", "--lambda", "1", "--a", "1.5", "--n", "20", "--m", "10"}).code,
            ampgdf::cli::kUsage);
  EXPECT_EQ(run({"--help"}).code, ampgdf::cli::kOk);
}

TEST(Cli, GenIsDeterministic) {
  const auto d1 = fresh_dir("gen1");
  const auto d2 = fresh_dir("gen2");
  ASSERT_EQ(run({"gen", "--kind", "gaussian", "--n", "8", "--m", "5", "--seed", "3", "--out", d1.string()}).code, 0);
  ASSERT_EQ(run({"gen", "--kind", "gaussian", "--n", "8", "--m", "5", "--seed", "3", "--out", d2.string()}).code, 0);
  EXPECT_EQ(slurp(d1 / "A.csv"), slurp(d2 / "A.csv"));
  EXPECT_EQ(slurp(d1 / "y.csv"), slurp(d2 / "y.csv"));
  EXPECT_FALSE(slurp(d1 / "A.csv").empty());
  std::filesystem::remove_all(d1);
  std::filesystem::remove_all(d2);
}

TEST(Cli, SolveWritesJsonReport) {
  const auto dir = fresh_dir("solve");
  ASSERT_EQ(run({"gen", "--kind", "gaussian", "--n", "60", "--m", "40", "--seed", "5", "--out", dir.string()}).code, 0);
  const CliRun r = run({"solve", "--penalty", "mcp", "--lambda", "1.5", "--a", "3.7", "--A", (dir / "A.csv").string(),
                     "--y", (dir / "y.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.at("converged").get<bool>());
  EXPECT_GE(j.at("df1").get<double>(), 0.0);
  EXPECT_LT(j.at("df1").get<double>(), 1.0);
  std::filesystem::remove_all(dir);
}

TEST(Cli, SweepWritesOneRowPerGridPoint) {
  const auto dir = fresh_dir("sweep");
  std::filesystem::create_directories(dir);
  const auto csv = dir / "sweep.csv";
  const CliRun r = run({"sweep", "--penalty", "scad", "--lambda", "1.5:0.5:2.5", "--a", "3.7", "--n", "60", "--m", "30",
                     "--train", "2", "--test", "10", "--seed", "1", "--out", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string text = slurp(csv);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  EXPECT_TRUE(summary.contains("selected_by"));
  EXPECT_EQ(summary.at("seed").get<int>(), 1);
  std::filesystem::remove_all(dir);
}

TEST(Cli, DataErrors) {
  const auto dir = fresh_dir("bad");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "bad.csv") << "x1,y\n1,abc\n";
  EXPECT_EQ(run({"solve", "--penalty", "l1", "--lambda", "1", "--input", (dir / "bad.csv").string(), "--k", "1"}).code,
            ampgdf::cli::kDataError);
  EXPECT_EQ(run({"solve", "--penalty", "l1", "--lambda", "1", "--A", (dir / "missing.csv").string(), "--y",
                 (dir / "missing.csv").string()})
                .code,
            ampgdf::cli::kDataError);
  std::filesystem::remove_all(dir);
}

TEST(Cli, ValidateRejectsInconsistentAlpha) {
  EXPECT_EQ(run({"validate", "--penalty", "scad", "--n", "40", "--m", "20", "--alpha", "0.3"}).code,
            ampgdf::cli::kUsage);
}
