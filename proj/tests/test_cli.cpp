#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "emgdrift/version.hpp"
#include "support.hpp"

using emgdrift::testing::slurp;
using emgdrift::testing::TempDir;
using emgdrift::testing::write_file;

namespace {

const std::filesystem::path kFixture = std::filesystem::path(EMGDRIFT_FIXTURE_DIR) / "experiment.json";

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "emgdrift");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = emgdrift::cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Runs the installed binary through the shell; returns the exit status.
int shell(const std::string& command) {
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string rows_for_grasp(const std::string& report, int grasp) {
  std::istringstream in(report);
  std::string line, kept;
  std::getline(in, line);
  kept = line + "\n";
  while (std::getline(in, line)) {
    const auto first = line.find(',');
    const auto second = line.find(',', first + 1);
    if (std::stoi(line.substr(first + 1, second - first - 1)) == grasp) kept += line + "\n";
  }
  return kept;
}

}  // namespace

TEST(Cli, Version) {
  const auto r = cli({"--version"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(emgdrift::kVersion), std::string::npos);
}

TEST(Cli, UnknownFlagIsUsageError) {
  const auto r = cli({"run", "--bogus"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
  EXPECT_NE(r.err.find("Usage"), std::string::npos) << r.err;
}

TEST(Cli, MissingSubcommandIsUsageError) { EXPECT_EQ(cli({}).code, 2); }

TEST(Cli, RunSmoke) {
  TempDir dir("cli");
  const auto r = cli({"run", "--config", kFixture.string(), "-o", (dir / "report.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = slurp(dir / "report.csv");
  std::istringstream in(report);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "detector,grasp,tp,fp,fn,f1,add_seconds");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 18);
}

TEST(Cli, RunIsByteIdentical) {
  TempDir dir("cli");
  ASSERT_EQ(cli({"run", "--config", kFixture.string(), "-o", (dir / "a.csv").string()}).code, 0);
  ASSERT_EQ(cli({"run", "--config", kFixture.string(), "-o", (dir / "b.csv").string(), "--threads", "1"}).code, 0);
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
}

TEST(Cli, StepwiseChainMatchesRun) {
  TempDir dir("cli");
  const auto doc = nlohmann::json::parse(slurp(kFixture));
  write_file(dir / "synth.json", doc["inputs"]["synth"].dump());
  auto p = [&](const char* name) { return (dir / name).string(); };

  ASSERT_EQ(cli({"run", "--config", kFixture.string(), "-o", p("run.csv"), "--trace-dir", p("trace")}).code, 0);
  ASSERT_EQ(cli({"--seed", "7", "synth", "--spec", p("synth.json"), "-o", p("raw.csv")}).code, 0);
  auto r = cli({"rms", "-i", p("raw.csv"), "--fs", "100", "--grasp", "1", "-o", p("rms.csv"), "--truth-out", p("truth.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_EQ(cli({"features", "-i", p("rms.csv"), "-o", p("slopes.csv")}).code, 0);
  ASSERT_EQ(cli({"score", "-i", p("slopes.csv"), "-o", p("scores.csv")}).code, 0);
  ASSERT_EQ(cli({"detect", "-i", p("scores.csv"), "-o", p("events.csv")}).code, 0);
  r = cli({"eval", "--truth", p("truth.csv"), "--events", p("events.csv"), "--grasp", "1", "-o", p("report.csv")});
  ASSERT_EQ(r.code, 0) << r.err;

  EXPECT_EQ(slurp(dir / "truth.csv"), slurp(dir / "trace" / "grasp1_truth.csv"));
  EXPECT_EQ(slurp(dir / "scores.csv"), slurp(dir / "trace" / "grasp1_scores.csv"));
  EXPECT_EQ(slurp(dir / "report.csv"), rows_for_grasp(slurp(dir / "run.csv"), 1));
}

TEST(Cli, KlOnShortInputNamesPrecondition) {
  TempDir dir("cli");
  std::string csv = "t_seconds,slope_1,slope_2\n";
  for (int i = 0; i < 100; ++i) csv += std::to_string(i) + "," + std::to_string(i % 7) + "," + std::to_string(i % 5) + "\n";
  write_file(dir / "f.csv", csv);
  const auto r = cli({"kl", "-i", (dir / "f.csv").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("ref_len + window"), std::string::npos) << r.err;
}

TEST(Cli, KlProfile) {
  TempDir dir("cli");
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::string csv = "t_seconds,slope_1,slope_2\n";
  for (int i = 0; i < 400; ++i) {
    const double shift = i >= 300 ? 4.0 : 0.0;
    csv += std::to_string(i) + "," + std::to_string(normal(rng) + shift) + "," + std::to_string(normal(rng)) + "\n";
  }
  write_file(dir / "f.csv", csv);
  const auto r = cli({"kl", "-i", (dir / "f.csv").string(), "--ref-len", "100", "--window", "100", "--step", "100"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "window_start_index,t_seconds,kl");
  std::vector<double> kl;
  while (std::getline(in, line)) kl.push_back(std::stod(line.substr(line.rfind(',') + 1)));
  ASSERT_EQ(kl.size(), 3u);
  EXPECT_GT(kl[2], kl[0]);
  EXPECT_GT(kl[2], kl[1]);
}

TEST(Cli, KpcaOnFeatureTable) {
  TempDir dir("cli");
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal(0.0, 0.05);
  std::string csv = "f1,f2,f3,label\n";
  for (int i = 0; i < 60; ++i) {
    const double s = i % 2 ? 1.0 : -1.0;
    csv += std::to_string(s + normal(rng)) + "," + std::to_string(2 * s + normal(rng)) + "," +
           std::to_string(-s + normal(rng)) + "," + std::to_string(i % 2) + "\n";
  }
  write_file(dir / "f.csv", csv);
  const auto r = cli({"kpca", "-i", (dir / "f.csv").string(), "-o", (dir / "proj.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "accuracy=1.000000\n");
  const auto proj = slurp(dir / "proj.csv");
  EXPECT_EQ(proj.substr(0, proj.find('\n')), "index,pc1,pc2,pc3,label");
}

TEST(Cli, KpcaOnRawSignal) {
  TempDir dir("cli");
  const auto doc = nlohmann::json::parse(slurp(kFixture));
  write_file(dir / "synth.json", doc["inputs"]["synth"].dump());
  ASSERT_EQ(cli({"--seed", "7", "synth", "--spec", (dir / "synth.json").string(), "-o", (dir / "raw.csv").string()}).code, 0);
  const auto r = cli({"kpca", "-i", (dir / "raw.csv").string(), "--fs", "100", "--domains", "1:1,1:2",
                      "--max-rows", "400", "-o", (dir / "proj.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("accuracy=", 0), 0u) << r.out;
}

TEST(Cli, DetectParamsAndErrors) {
  TempDir dir("cli");
  std::string csv = "window,t_seconds,score,degenerate\n";
  for (int i = 0; i < 200; ++i) csv += std::to_string(i) + "," + std::to_string(i) + "," + (i < 100 ? "1" : "9") + ",0\n";
  write_file(dir / "s.csv", csv);
  const auto in = (dir / "s.csv").string();
  auto r = cli({"detect", "-i", in, "-d", "CUSUM", "-p", "lambda=20"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("CUSUM{lambda=20},drift,"), std::string::npos) << r.out;
  EXPECT_EQ(cli({"detect", "-i", in, "-d", "CUSUM", "-d", "PH", "-p", "lambda=20"}).code, 1);
  EXPECT_EQ(cli({"detect", "-i", in, "-d", "CUSUM", "-p", "lambda=-1"}).code, 1);
  EXPECT_EQ(cli({"detect", "-i", in, "-d", "NOPE"}).code, 1);
  EXPECT_EQ(cli({"detect", "-i", (dir / "missing.csv").string()}).code, 1);
}

TEST(Cli, BinaryExitCodes) {
  const std::string bin = EMGDRIFT_BINARY;
  EXPECT_EQ(shell(bin + " --version > /dev/null"), 0);
  EXPECT_EQ(shell(bin + " run --bogus > /dev/null 2>&1"), 2);
  EXPECT_EQ(shell(bin + " detect -i /nonexistent/scores.csv > /dev/null 2>&1"), 1);
}
