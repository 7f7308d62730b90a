// Runs the verify binary as a subprocess.

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(VERIFY_EXE) + " " + args + " 2>/dev/null";
  Outcome r;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string config(const std::string& name) { return std::string(CONFIG_DIR) + "/" + name + ".yaml"; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name, const std::string& body) {
  const fs::path p = fs::temp_directory_path() / ("sasakian_cli_" + name + ".yaml");
  std::ofstream(p) << body;
  return p;
}

// Residuals may drift in the last bits across toolchains; everything else must match exactly.
void expect_same(const json& want, const json& got, const std::string& path) {
  if (want.is_number_float() || got.is_number_float()) {
    ASSERT_TRUE(got.is_number()) << path;
    const double a = want.get<double>();
    const double b = got.get<double>();
    EXPECT_LE(std::abs(a - b), 1e-12 + 1e-9 * std::abs(a)) << path << ": " << a << " vs " << b;
    return;
  }
  ASSERT_EQ(want.type(), got.type()) << path;
  if (want.is_object()) {
    ASSERT_EQ(want.size(), got.size()) << path;
    for (auto it = want.begin(); it != want.end(); ++it) {
      ASSERT_TRUE(got.contains(it.key())) << path << "." << it.key();
      expect_same(*it, got[it.key()], path + "." + it.key());
    }
  } else if (want.is_array()) {
    ASSERT_EQ(want.size(), got.size()) << path;
    for (std::size_t i = 0; i < want.size(); ++i) expect_same(want[i], got[i], path + "[" + std::to_string(i) + "]");
  } else {
    EXPECT_EQ(want, got) << path;
  }
}

class Golden : public ::testing::TestWithParam<std::string> {};

TEST_P(Golden, MatchesCommittedReport) {
  const Outcome r = run("--config " + config(GetParam()) + " --no-timestamp");
  EXPECT_EQ(r.code, 2);
  const json want = json::parse(slurp(fs::path(GOLDEN_DIR) / (GetParam() + ".json")));
  expect_same(want, json::parse(r.out), GetParam());
}

TEST_P(Golden, ByteIdenticalAcrossRuns) {
  const std::string args = "--config " + config(GetParam()) + " --no-timestamp";
  EXPECT_EQ(run(args).out, run(args).out);
}

INSTANTIATE_TEST_SUITE_P(Configs, Golden, ::testing::Values("plane_r3", "quadric_r3", "plane_r5", "scaled_normal_r3"));

TEST(Cli, TimestampOnlyDifference) {
  const json a = json::parse(run("--config " + config("plane_r3") + " --check axioms").out);
  ASSERT_TRUE(a["meta"].contains("timestamp"));
  json b = json::parse(run("--config " + config("plane_r3") + " --check axioms --no-timestamp").out);
  json stripped = a;
  stripped["meta"].erase("timestamp");
  EXPECT_EQ(stripped, b);
}

TEST(Cli, PassingSelectionExitsZero) {
  EXPECT_EQ(run("--config " + config("plane_r3") + " --check axioms --check two_form").code, 0);
  EXPECT_EQ(run("--config " + config("plane_r3") + " --check algebraic --format text").code, 0);
}

TEST(Cli, RefutedSelectionExitsTwo) {
  EXPECT_EQ(run("--config " + config("plane_r3") + " --check nabla_V").code, 2);
}

TEST(Cli, EmptyCheckListExitsZero) {
  const fs::path p = scratch("empty", slurp(config("plane_r3")) + "\n");
  std::string body = slurp(p);
  body.replace(body.find("checks: all"), 11, "checks: []");
  std::ofstream(p) << body;
  const Outcome r = run("--config " + p.string() + " --no-timestamp");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(json::parse(r.out)["checks"].empty());
}

TEST(Cli, ConfigErrorsExitOne) {
  EXPECT_EQ(run("--config /nonexistent/x.yaml").code, 1);
  EXPECT_EQ(run("--config " + config("plane_r3") + " --check nonsense").code, 1);
  EXPECT_EQ(run("--config " + config("plane_r3") + " --format xml").code, 1);
  EXPECT_EQ(run("").code, 1);

  const fs::path arity = scratch("arity", "ambient: {n: 1}\nembedding: {map: [\"s1\", \"s2\"]}\n");
  const std::string cmd = std::string(VERIFY_EXE) + " --config " + arity.string() + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  ASSERT_NE(p, nullptr);
  std::array<char, 1024> buf{};
  std::string err;
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), p) != nullptr) err += buf.data();
  const int status = pclose(p);
  EXPECT_EQ(WEXITSTATUS(status), 1);
  EXPECT_NE(err.find("embedding.map"), std::string::npos) << err;

  const fs::path parse = scratch("parse", "ambient: {n: 1}\nembedding: {map: [\"s1\", \"s2\", \"sin(s1\"]}\n");
  EXPECT_EQ(run("--config " + parse.string()).code, 1);
}

TEST(Cli, SeedOverrideIsRecorded) {
  const json doc = json::parse(run("--config " + config("plane_r3") + " --check axioms --seed 99").out);
  EXPECT_EQ(doc["meta"]["seed"], 99);
}

TEST(Cli, StrictModeUsesPrintedConvention) {
  const json doc =
      json::parse(run("--config " + config("plane_r3") + " --check differential --strict-paper --no-timestamp").out);
  EXPECT_TRUE(doc["meta"]["strict_paper_mode"].get<bool>());
  for (const json& row : doc["checks"])
    if (row["convention"].is_string())
      EXPECT_NE(row["convention"].get<std::string>().find("printed"), std::string::npos) << row["name"];
}

TEST(Cli, OutputFile) {
  const fs::path out = fs::temp_directory_path() / "sasakian_cli_out.txt";
  fs::remove(out);
  const Outcome r = run("--config " + config("plane_r3") + " --check axioms --format text -o " + out.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(slurp(out).find("exit 0"), std::string::npos);
}

}  // namespace
