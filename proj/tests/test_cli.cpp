#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "drwkz/cli.hpp"

using nlohmann::json;

namespace {

const std::string kArr = std::string(DRWKZ_DATA_DIR) + "/arrangements/";

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "drwkz");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = drwkz::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json cli_json(std::vector<std::string> args) {
  args.insert(args.begin(), {"--format", "json"});
  auto r = cli(args);
  EXPECT_EQ(r.code, 0) << r.err;
  return json::parse(r.out);
}

std::string temp_path(const std::string& name) { return ::testing::TempDir() + name; }

}  // namespace

TEST(Cli, ThreeLinesDims) {
  auto j = cli_json({"os-build", "--in", kArr + "threelines.json", "--expect", "1,3,2"});
  EXPECT_EQ(j["command"], "os-build");
  EXPECT_EQ(j["records"][0]["payload"]["dims"], json({1, 3, 2}));
  EXPECT_EQ(j["totals"]["fail"], 0);
}

TEST(Cli, SymbolicCocyclePasses) {
  auto j = cli_json({"kz-cocycle", "--n", "2", "--N", "2"});
  EXPECT_EQ(j["totals"]["fail"], 0);
  EXPECT_EQ(j["totals"]["pass"], 3);
  EXPECT_EQ(j["records"].back()["payload"]["selected"], "ef+fe");
}

TEST(Cli, DrwIdentitiesPass) {
  auto r = cli({"drw-identities", "--p", "5", "--precision", "3", "--samples", "20"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("drw-identities: 10 pass, 0 fail"), std::string::npos) << r.out;
}

TEST(Cli, ReportSchema) {
  auto j = cli_json({"milnor-verify"});
  EXPECT_EQ(j["tool"], "drwkz");
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_TRUE(j["version"].is_string());
  for (const auto& rec : j["records"]) {
    EXPECT_TRUE(rec["id"].is_string());
    EXPECT_TRUE(rec["ref"].is_string());
    EXPECT_TRUE(rec["status"] == "pass" || rec["status"] == "fail" || rec["status"] == "info");
    EXPECT_TRUE(rec["payload"].is_object());
  }
  EXPECT_FALSE(j.contains("timestamp"));
}

TEST(Cli, FailedCheckExitsOne) {
  EXPECT_EQ(cli({"os-build", "--in", kArr + "threelines.json", "--expect", "1,3,3"}).code, 1);
  auto r = cli({"kz-cocycle", "--n", "2", "--N", "1", "--casimir", "diagonal"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("fail  kz.cocycle"), std::string::npos);
}

TEST(Cli, InvalidInputExitsTwo) {
  const std::vector<std::vector<std::string>> bad{
      {"os-build"},
      {"os-build", "--in", "/nonexistent/arrangement.json"},
      {"drw-identities", "--p", "4"},
      {"drw-identities", "--p", "five"},
      {"kz-cocycle", "--n", "2"},
      {"kz-cocycle", "--n", "1", "--N", "2", "--p", "2"},
      {"kz-cocycle", "--n", "2", "--N", "1", "--casimir", "other"},
      {"aomoto", "--in", kArr + "threelines.json", "--weights", "1,2"},
      {"psi-verify", "--in", kArr + "threelines_f5.json"},
      {"no-such-command"},
      {},
  };
  for (const auto& args : bad) {
    auto r = cli(args);
    EXPECT_EQ(r.code, 2) << (args.empty() ? "<none>" : args[0]) << " " << r.err;
    EXPECT_FALSE(r.err.empty());
  }
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(cli({"--help"}).code, 0); }

TEST(Cli, ConfigFileAndOverride) {
  const std::string path = temp_path("drwkz_cfg.json");
  {
    std::ofstream o(path);
    o << json{{"in", kArr + "threelines.json"}, {"expect", {1, 3, 3}}}.dump();
  }
  EXPECT_EQ(cli({"--config", path, "os-build"}).code, 1);
  EXPECT_EQ(cli({"--config", path, "os-build", "--expect", "1,3,2"}).code, 0);
  {
    std::ofstream o(path);
    o << "[1, 2";
  }
  EXPECT_EQ(cli({"--config", path, "os-build"}).code, 2);
  std::remove(path.c_str());
}

TEST(Cli, JsonFileMatchesStdout) {
  const std::string path = temp_path("drwkz_report.json");
  auto r = cli({"--json", path, "--format", "json", "aomoto", "--in", kArr + "points3.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path);
  std::stringstream file;
  file << in.rdbuf();
  EXPECT_EQ(file.str(), r.out);
  std::remove(path.c_str());
}

TEST(Cli, SameSeedSameBytes) {
  const std::vector<std::vector<std::string>> runs{
      {"--format", "json", "drw-identities", "--p", "3", "--precision", "2", "--samples", "30", "--seed", "5"},
      {"--format", "json", "kz-cocycle", "--n", "2", "--N", "1", "--m", "random", "--kappa", "random", "--samples", "3", "--seed", "5"},
      {"--format", "json", "aomoto", "--in", kArr + "points5.json", "--weights", "padic", "--p", "3", "--seed", "5"},
  };
  for (const auto& args : runs) {
    auto a = cli(args), b = cli(args);
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out) << args[2];
  }
}

TEST(Cli, DifferentSeedChangesSamples) {
  auto a = cli_json({"kz-cocycle", "--n", "1", "--N", "1", "--m", "random", "--samples", "2", "--seed", "1"});
  auto b = cli_json({"kz-cocycle", "--n", "1", "--N", "1", "--m", "random", "--samples", "2", "--seed", "2"});
  EXPECT_NE(a["records"][1]["payload"]["m"], b["records"][1]["payload"]["m"]);
}

TEST(Cli, ExplicitParameters) {
  auto j = cli_json({"kz-cocycle", "--n", "2", "--N", "2", "--m", "3,5", "--kappa", "7", "--p", "3"});
  EXPECT_EQ(j["config"]["m"], json({3, 5}));
  EXPECT_EQ(j["totals"]["fail"], 0);
  auto k = cli_json({"kz-cocycle", "--n", "1", "--N", "1", "--m", "1/2", "--kappa", "-3/4"});
  EXPECT_EQ(k["totals"]["fail"], 0);
}
