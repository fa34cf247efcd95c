#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "test_util.hpp"
#include "tornmend/report.hpp"

namespace fs = std::filesystem;
using namespace tornmend;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(TORNMEND_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / ("tornmend_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    TearSpec spec;
    spec.seed = 31;
    spec.kind = TearSpec::Kind::polyline;
    spec.gap_width = 2.0;
    pair_ = write_pair(spec, dir_.string());
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string in_pair(const std::string& name) { return (fs::path(pair_) / name).string(); }
  static std::string out(const std::string& name) { return (dir_ / name).string(); }

  static inline fs::path dir_;
  static inline std::string pair_;
};

}  // namespace

TEST_F(Cli, MendAcceptedExitsZero) {
  EXPECT_EQ(run("mend " + in_pair("a.png") + " " + in_pair("b.png") + " -o " + out("m.png") + " --report " +
                out("m.json")),
            0);
  EXPECT_TRUE(fs::exists(out("m.png")));
  std::ifstream in(out("m.json"));
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j.at("schema_version"), 1);
  EXPECT_TRUE(j.at("accepted").get<bool>());
}

TEST_F(Cli, MendRejectedExitsTwo) {
  EXPECT_EQ(run("mend " + in_pair("a.png") + " " + in_pair("a.png") + " --report " + out("r.json")), 2);
  std::ifstream in(out("r.json"));
  EXPECT_FALSE(nlohmann::json::parse(in).at("accepted").get<bool>());
}

TEST_F(Cli, ErrorsExitOne) {
  EXPECT_EQ(run("mend /nonexistent/a.png " + in_pair("b.png")), 1);
  EXPECT_EQ(run("mend " + in_pair("a.png") + " " + in_pair("b.png") + " --bogus"), 1);
  EXPECT_EQ(run("mend " + in_pair("a.png") + " " + in_pair("b.png") + " --tau -1"), 1);
  EXPECT_EQ(run("stage sharpen " + in_pair("a.png") + " -o " + out("x.png")), 1);
  EXPECT_EQ(run(""), 1);
}

TEST_F(Cli, StagesWriteTheirOutput) {
  EXPECT_EQ(run("stage filter " + in_pair("a.png") + " -o " + out("f.png") + " --iterations 2"), 0);
  EXPECT_EQ(run("stage edges " + in_pair("a.png") + " -o " + out("e.png")), 0);
  EXPECT_EQ(run("stage simplify " + in_pair("a.png") + " -o " + out("s.svg")), 0);
  EXPECT_EQ(run("stage match " + in_pair("a.png") + " " + in_pair("b.png") + " -o " + out("match.json")), 0);
  for (auto name : {"f.png", "e.png", "s.svg", "match.json"}) EXPECT_TRUE(fs::exists(out(name))) << name;
}

TEST_F(Cli, SynthAndEval) {
  const std::string manifest = out("manifest.json");
  std::ofstream(manifest) << R"([{"kind": "straight", "seed": 5}, {"kind": "polyline", "seed": 6, "gap_width": 2}])";
  const std::string corpus = out("corpus");
  ASSERT_EQ(run("synth --manifest " + manifest + " -o " + corpus), 0);
  EXPECT_EQ(list_pairs(corpus).size(), 2u);
  ASSERT_EQ(run("eval --corpus " + corpus + " --report " + out("eval.json") + " --jobs 2"), 0);
  std::ifstream in(out("eval.json"));
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j.at("pairs").size(), 2u);
  EXPECT_EQ(run("synth --manifest " + out("missing.json") + " -o " + corpus), 1);
}
