#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "taplab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = taplab::cli::run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const fs::path path = fs::temp_directory_path() / ("taplab_cli_" + name);
  std::ofstream(path) << text;
  return path.string();
}

const char* kPair =
    R"({"version":1,"p":4,"tasks":[{"id":0,"sigma":"2","pi":"8","arrival":"0"},{"id":1,"sigma":"1","pi":"1","arrival":"0"}]})";

}  // namespace

TEST(Cli, RunPrintsRecord) {
  const std::string file = write_temp("pair.json", kPair);
  const Outcome o = invoke({"run", file, "bal"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_EQ(j["scheduler"], "bal");
  EXPECT_EQ(j["p"], 4);
  EXPECT_EQ(j["n"], 2);
  EXPECT_TRUE(j["violations"].empty());
  EXPECT_TRUE(j.contains("awake"));
  EXPECT_TRUE(j.contains("instance_hash"));
}

TEST(Cli, CyclicInstanceIsAnError) {
  const std::string file = write_temp(
      "cyclic.json",
      R"({"version":1,"p":2,"tasks":[{"id":0,"sigma":"1","pi":"1","arrival":"0","deps":[1]},{"id":1,"sigma":"1","pi":"1","arrival":"0","deps":[0]}]})");
  const Outcome o = invoke({"run", file, "turtle"});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("cyclic dependencies"), std::string::npos);
}

TEST(Cli, CancellingSchedulerNeedsFlag) {
  const std::string file = write_temp("pair2.json", kPair);
  EXPECT_NE(invoke({"run", file, "canc"}).code, 0);
  EXPECT_EQ(invoke({"run", file, "canc", "--allow-cancel"}).code, 0);
}

TEST(Cli, UnknownSchedulerFails) {
  const std::string file = write_temp("pair3.json", kPair);
  const Outcome o = invoke({"run", file, "nonexistent"});
  EXPECT_EQ(o.code, 2);
  EXPECT_FALSE(o.err.empty());
}

TEST(Cli, SweepWritesDeterministicCsv) {
  const std::vector<std::string> args{"sweep", "--generator", "random", "--p", "4", "--count", "3",
                                      "--seed", "5", "--schedulers", "bal,unk,canc", "--threads", "1"};
  const Outcome a = invoke(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out.rfind("instance,scheduler,p,n,awake,trt,opt_awake", 0), 0u);
  std::size_t lines = 0;
  for (char c : a.out) lines += c == '\n';
  EXPECT_EQ(lines, 1u + 3 * 3);
  auto threaded = args;
  threaded.back() = "3";
  EXPECT_EQ(invoke(threaded).out, a.out);
}

TEST(Cli, GenIsSeeded) {
  const Outcome a = invoke({"gen", "random", "--p", "8", "--seed", "3", "--n", "5"});
  const Outcome b = invoke({"gen", "random", "--p", "8", "--seed", "3", "--n", "5"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(nlohmann::json::parse(a.out)["tasks"].size(), 5u);
}

TEST(Cli, OracleAndDuel) {
  const std::string file = write_temp("pair4.json", kPair);
  const Outcome o = invoke({"oracle", file});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(nlohmann::json::parse(o.out)["opt_awake"], "2");
  const Outcome d = invoke({"duel", "mwf-all-serial", "golden", "--p", "4"});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_EQ(nlohmann::json::parse(d.out)["ratio"], "987/610");
}

TEST(Cli, SeedFromEnvironment) {
  ::setenv("TAPLAB_SEED", "77", 1);
  EXPECT_EQ(taplab::cli::default_seed(1), 77u);
  ::unsetenv("TAPLAB_SEED");
  EXPECT_EQ(taplab::cli::default_seed(1), 1u);
}
