#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "repvote/cli.hpp"

namespace repvote {
namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "repvote");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const std::string kToy = REPVOTE_FIXTURE_DIR "/toy.csv";
const std::string kTie = REPVOTE_FIXTURE_DIR "/tie_fixture.json";

TEST(Cli, TabulateGreedyText) {
  const CliRun r = run({"tabulate", kToy});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("assigned  0   2  0"), std::string::npos) << r.out;
}

TEST(Cli, TabulateOrderCsv) {
  const CliRun r = run({"tabulate", kToy, "--method", "order", "--order", "c,b,a", "--format", "csv"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("assigned,0,1,1"), std::string::npos) << r.out;
}

TEST(Cli, TabulateCapAndTwoHouse) {
  EXPECT_EQ(run({"tabulate", kTie, "--method", "cap", "--cap", "0.3", "--seed", "4", "--seats", "100"}).code, 0);
  const CliRun r = run({"tabulate", kToy, "--method", "twohouse", "--senate", kToy, "--format", "json"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"senate\""), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"tabulate", "/nonexistent.csv"}).code, 2);
  EXPECT_EQ(run({"tabulate", kToy, "--method", "order"}).code, 2);
  EXPECT_EQ(run({"tabulate", kToy, "--method", "bogus"}).code, 2);
  EXPECT_EQ(run({"space", kToy, "--check", "2,0,0"}).code, 3);
  EXPECT_EQ(run({"space", kToy, "--check", "1,1,0"}).code, 0);
  EXPECT_EQ(run({"space", kTie, "--audit"}).code, 4);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, UnresolvableTieExitsThree) {
  const auto path = std::filesystem::temp_directory_path() / "repvote_three_way.csv";
  std::ofstream(path) << "#parties=a;b;c\nv1,a\nv2,b\nv3,c\n";
  EXPECT_EQ(run({"tabulate", path.string(), "--tie", "split"}).code, 3);
}

TEST(Cli, SpaceEnumerate) {
  const CliRun r = run({"space", kToy, "--enumerate"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out).at("vertices").at("vertices").size(), 4u);
}

TEST(Cli, CompareAndSimulate) {
  EXPECT_EQ(run({"compare", kToy, "--seats", "10"}).code, 0);
  const CliRun r = run({"simulate", "--parties", "4", "--voters", "100", "--runs", "3", "--format", "csv"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(r.out.empty());
}

TEST(Cli, OutputFileIsByteIdenticalAcrossRuns) {
  const auto dir = std::filesystem::temp_directory_path();
  const std::string a = (dir / "repvote_det_a.json").string();
  const std::string b = (dir / "repvote_det_b.json").string();
  for (const std::string& path : {a, b}) {
    ASSERT_EQ(run({"simulate", "--parties", "5", "--voters", "300", "--runs", "6", "--seed", "3", "--format", "json",
                   "-o", path})
                  .code,
              0);
  }
  std::ifstream fa(a), fb(b);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  EXPECT_FALSE(sa.str().empty());
  EXPECT_EQ(sa.str(), sb.str());
}

}  // namespace
}  // namespace repvote
