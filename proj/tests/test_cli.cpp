#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args, const std::string& stdin_file = "") {
  std::string cmd = std::string(SPCOMB_CLI_PATH) + " " + args + " 2>/dev/null";
  if (!stdin_file.empty()) cmd += " < " + stdin_file;
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("spcomb_cli_" + name);
  std::ofstream(path) << content;
  return path.string();
}

nlohmann::json json_of(const CliRun& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
  EXPECT_EQ(run("stirling --n 21 --k 3").code, 2);
  EXPECT_EQ(run("stirling --n 3 --k 4").code, 2);
  EXPECT_EQ(run("transform --op frobnicate --in -").code, 2);
  EXPECT_EQ(run("estimate --phi 'indicator[0,1]' --intensity 2 --box '[0,1]' --samples 0").code, 2);
  EXPECT_EQ(run("sample-poisson --intensity -1 --box '[0,1]'").code, 2);
  EXPECT_EQ(run("identities --config " + temp_file("bad.json", "{\"max_config_size\": ")).code, 2);
  EXPECT_EQ(run("identities --config " + temp_file("unknown.json", "{\"colour\": 3}")).code, 2);
  EXPECT_EQ(run("identities --config /nonexistent/spcomb.json").code, 2);
}

TEST(Cli, IdentitiesPassAndFail) {
  const CliRun ok = run("identities");
  ASSERT_EQ(ok.code, 0);
  const auto report = json_of(ok);
  EXPECT_EQ(report["schema_version"], 1);
  EXPECT_TRUE(report["all_pass"].get<bool>());
  for (const auto& rec : report["identities"]) {
    EXPECT_EQ(rec["status"], "pass") << rec["name"];
    EXPECT_GE(rec["instances_checked"].get<long>(), 1);
  }

  const CliRun empty = run("identities --config " + temp_file("zero.json", R"({"max_config_size": 0})"));
  EXPECT_EQ(empty.code, 0);

  // nothing is exact at 1e-300, so the battery must report failure
  const CliRun strict = run("identities --config " + temp_file("strict.json", R"({"tolerance": 1e-300})"));
  EXPECT_EQ(strict.code, 1);
  EXPECT_FALSE(json_of(strict)["all_pass"].get<bool>());
}

TEST(Cli, Stirling) {
  const CliRun r = run("stirling --n 5 --k 2");
  ASSERT_EQ(r.code, 0);
  const auto j = json_of(r);
  EXPECT_EQ(j["unsigned_first"], 50);
  EXPECT_EQ(j["signed_first"], -50);
  EXPECT_EQ(j["second"], 15);

  const CliRun t = run("stirling --table 4");
  ASSERT_EQ(t.code, 0);
  const auto table = json_of(t);
  EXPECT_EQ(table["second"][4][2], 7);
  EXPECT_EQ(table["unsigned_first"][4][2], 11);
  EXPECT_EQ(table["second"][2][4], 0);
}

TEST(Cli, TransformExamples) {
  const std::string delta2 = temp_file("delta2.json", "[0,0,1,0,0,0,0]");
  const CliRun k = run("transform --op k --in " + delta2);
  ASSERT_EQ(k.code, 0);
  EXPECT_EQ(json_of(k), nlohmann::json::parse("[0,0,1,3,6,10,15]"));

  const std::string kd = temp_file("kdelta2.json", k.out);
  const CliRun back = run("transform --op kinv --in " + kd);
  ASSERT_EQ(back.code, 0);
  EXPECT_EQ(json_of(back), nlohmann::json::parse("[0,0,1,0,0,0,0]"));

  const CliRun from_stdin = run("transform --op kinv --in -", kd);
  EXPECT_EQ(from_stdin.out, back.out);

  const std::string unit = temp_file("unit.json", "[1]");
  const CliRun star = run("transform --op star --in " + unit + " " + unit);
  ASSERT_EQ(star.code, 0);
  EXPECT_EQ(json_of(star), nlohmann::json::parse("[1]"));

  EXPECT_EQ(run("transform --op k --in " + temp_file("notarray.json", "{\"a\":1}")).code, 2);
  EXPECT_EQ(run("transform --op star --in " + unit).code, 2);
}

TEST(Cli, SamplePoissonShape) {
  const CliRun r = run("sample-poisson --intensity 3 --box '[[0,0],[1,2]]' --samples 4 --seed 9");
  ASSERT_EQ(r.code, 0);
  const auto j = json_of(r);
  EXPECT_EQ(j["schema_version"], 1);
  ASSERT_EQ(j["configurations"].size(), 4u);
  for (const auto& g : j["configurations"]) {
    for (const auto& x : g["points"]) {
      ASSERT_EQ(x.size(), 2u);
      EXPECT_GE(x[0].get<double>(), 0.0);
      EXPECT_LE(x[1].get<double>(), 2.0);
    }
  }
}

TEST(Cli, EstimateAndBogoliubov) {
  const CliRun e = run("estimate --order 2 --phi 'indicator[0,1]' --intensity 2 --box '[0,1]' --samples 10000");
  ASSERT_EQ(e.code, 0);
  const auto j = json_of(e);
  EXPECT_EQ(j["target"], 4.0);
  EXPECT_LE(j["sigma_distance"].get<double>(), 5.0);

  const CliRun b = run("bogoliubov --law poisson:1 --lambda 0.3");
  ASSERT_EQ(b.code, 0);
  EXPECT_LE(json_of(b)["rel_error"].get<double>(), 1e-9);

  const CliRun p = run("bogoliubov --law pmf:0.2,0.3,0.5 --lambda 1");
  ASSERT_EQ(p.code, 0);
  EXPECT_DOUBLE_EQ(json_of(p)["value"].get<double>(), 2.8);

  EXPECT_EQ(run("bogoliubov --law pmf:0.5,0.4 --lambda 1").code, 2);
  EXPECT_EQ(run("bogoliubov --lambda 1").code, 2);
}

TEST(Cli, OutputIsIndependentOfThreadCount) {
  for (const std::string args :
       {"estimate --order 3 --phi 'indicator[0.2,0.9]' --intensity 2 --box '[0,1]' --samples 3000 --seed 5",
        "bogoliubov --phi 'indicator[0,1]' --intensity 1.5 --box '[0,1]' --samples 3000",
        "sample-poisson --intensity 4 --box '[0,1]' --samples 20 --seed 3"}) {
    const CliRun one = run("--threads 1 " + args);
    ASSERT_EQ(one.code, 0) << args;
    EXPECT_EQ(run("--threads 0 " + args).out, one.out) << args;
    EXPECT_EQ(run("--threads 3 " + args).out, one.out) << args;
  }
}
